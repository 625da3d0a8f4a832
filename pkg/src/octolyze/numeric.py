"""Extended rational numbers used as DBM entries.

A bound is either an exact :class:`fractions.Fraction` or ``INF`` (``+oo``).
There is deliberately no ``-oo``: a missing constraint is always ``+oo``.
``Fraction`` already compares and adds correctly against ``math.inf``, so the
helpers below are thin and mostly exist to keep floats from leaking in.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

INF = math.inf
ZERO = Fraction(0)

Bound = Union[Fraction, float]


def bound(x) -> Bound:
    """Coerce ``x`` (int, Fraction, str, or +inf) to a canonical bound."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a bound")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if x == INF:
            return INF
        if math.isnan(x) or x == -INF:
            raise ValueError(f"not a valid bound: {x!r}")
        return Fraction(x)
    if isinstance(x, str):
        return parse_bound(x)
    raise TypeError(f"cannot make a bound from {type(x).__name__}")


def is_finite(b: Bound) -> bool:
    return b != INF


def add(a: Bound, b: Bound) -> Bound:
    if a == INF or b == INF:
        return INF
    return a + b


def bmin(a: Bound, b: Bound) -> Bound:
    return b if b < a else a


def bmax(a: Bound, b: Bound) -> Bound:
    return b if b > a else a


def half(a: Bound) -> Bound:
    if a == INF:
        return INF
    return a / 2


def format_bound(b) -> str:
    """Render as ``p/q``, a bare integer, ``+oo`` or ``-oo``.

    ``-oo`` only shows up for interval lower ends, never for DBM entries.
    """
    if b == INF:
        return "+oo"
    if b == -INF:
        return "-oo"
    b = Fraction(b)
    if b.denominator == 1:
        return str(b.numerator)
    return f"{b.numerator}/{b.denominator}"


def parse_bound(text: str) -> Bound:
    s = text.strip()
    if s in ("+oo", "oo", "inf", "+inf"):
        return INF
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"invalid bound literal: {text!r}") from None
