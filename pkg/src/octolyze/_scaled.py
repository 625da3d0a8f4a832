"""Exact integer-in-float64 encoding of rational matrices.

Entries are multiplied by a common denominator ``scale`` and stored as
float64 integers, with ``+oo`` kept as ``np.inf``.  Float64 holds every
integer below 2**53 exactly, so as long as each operand stays below
``LIMIT`` a sum of up to three of them is computed without rounding.
Callers check magnitudes before every round and fall back to Fraction
object arrays when the check fails.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .numeric import INF

LIMIT = 2.0**50


def to_scaled(a: np.ndarray, headroom: int = 1):
    """Return ``(x, scale)`` or ``None`` if the values are too large.

    ``headroom`` divides the magnitude limit, for algorithms whose
    intermediate values can grow beyond the inputs (shortest paths).
    """
    flat = a.ravel()
    finite = [v for v in flat if v != INF]
    if not finite:
        return np.full(a.shape, np.inf), 1
    scale = math.lcm(*{v.denominator for v in finite})
    limit = int(LIMIT) // headroom
    nums = {}
    for v in finite:
        if v not in nums:
            n = v.numerator * (scale // v.denominator)
            if abs(n) >= limit:
                return None
            nums[v] = float(n)
    out = np.fromiter((nums[v] if v != INF else np.inf for v in flat), dtype=np.float64, count=flat.size)
    return out.reshape(a.shape), scale


def from_scaled(x: np.ndarray, scale: int) -> np.ndarray:
    cache = {}
    out = np.empty(x.shape, dtype=object)
    flat_out = out.ravel()
    for idx, v in enumerate(x.ravel().tolist()):
        if v == np.inf:
            flat_out[idx] = INF
            continue
        f = cache.get(v)
        if f is None:
            f = cache[v] = Fraction(int(v), scale)
        flat_out[idx] = f
    return flat_out.reshape(x.shape)


def fits(x: np.ndarray, limit: float = LIMIT) -> bool:
    finite = x[np.isfinite(x)]
    return finite.size == 0 or float(np.abs(finite).max()) < limit
