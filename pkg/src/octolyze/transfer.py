"""Guard and assignment transfer functions on octagons.

Guards and assignments whose shape fits an octagonal constraint are exact:

* guard atoms ``±x ± y <= c``, ``a*x <= c`` and equalities install bounds by
  point-wise min;
* ``x := x + c`` translates the matrix, ``x := -x + c`` swaps the two forms
  of ``x`` first;
* ``x := ±y + c`` rebuilds the rows of ``x`` from the strong closure.

Anything else is over-approximated.  Non-octagonal guards are ignored and
other assignments bound the new value with interval arithmetic over the
variable ranges.

Variables declared ``int`` get integer tightening of guard bounds: over the
integers ``x < c`` is ``x <= ceil(c) - 1`` and ``x <= 5/2`` is ``x <= 2``.
Everything else is interpreted over the rationals, where strict
comparisons are relaxed to non-strict ones and ``!=`` carries no
information.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .dbm import Dbm
from .lang.ast import (
    Add,
    And,
    Atom,
    Const,
    MulConst,
    Neg,
    NonDet,
    Not,
    Opaque,
    Or,
    Program,
    Random,
    Sub,
    Var,
)
from .numeric import INF, ZERO, Bound
from .octagon import (
    Octagon,
    OctConstraint,
    _project_closed,
    is_empty,
    join,
    meet,
    strong_closure,
)


@dataclass(frozen=True)
class Env:
    """Variable names (index = position) and which of them are integers."""

    names: tuple[str, ...]
    integers: frozenset[int] = frozenset()

    @classmethod
    def default(cls, n_vars: int) -> "Env":
        return cls(tuple(f"v{i}" for i in range(n_vars)))

    @classmethod
    def from_program(cls, p: Program) -> "Env":
        names = p.variables
        ints = p.integer_variables
        return cls(names, frozenset(i for i, n in enumerate(names) if n in ints))

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None


def _env(m: Octagon, env: Env | None) -> Env:
    if env is None:
        return Env.default(m.n_vars)
    if len(env.names) != m.n_vars:
        raise ValueError(f"environment has {len(env.names)} variables, octagon has {m.n_vars}")
    return env


Linear = tuple[dict[int, Fraction], Fraction]


def linearize(e, env: Env) -> Linear | None:
    """``(coefficients, constant)`` with zero coefficients dropped, or ``None``.

    ``None`` means the expression is not linear (``rand`` or a genuinely
    non-linear operation occurs in it).  Products and quotients by
    constant sub-expressions are linear.
    """
    if isinstance(e, Const):
        return {}, Fraction(e.value)
    if isinstance(e, Var):
        return {env.index(e.name): Fraction(1)}, ZERO
    if isinstance(e, Random):
        return None
    if isinstance(e, Opaque):
        left, right = linearize(e.left, env), linearize(e.right, env)
        if left is None or right is None:
            return None
        if e.op == "*" and not right[0]:
            return _scale(left, right[1])
        if e.op == "*" and not left[0]:
            return _scale(right, left[1])
        if e.op == "/" and not right[0] and right[1] != 0:
            return _scale(left, 1 / right[1])
        return None
    if isinstance(e, Neg):
        return _scale(linearize(e.operand, env), -1)
    if isinstance(e, MulConst):
        return _scale(linearize(e.operand, env), Fraction(e.factor))
    if isinstance(e, (Add, Sub)):
        left = linearize(e.left, env)
        right = _scale(linearize(e.right, env), 1 if isinstance(e, Add) else -1)
        if left is None or right is None:
            return None
        coeffs = dict(left[0])
        for v, a in right[0].items():
            coeffs[v] = coeffs.get(v, ZERO) + a
        return {v: a for v, a in coeffs.items() if a != 0}, left[1] + right[1]
    raise TypeError(f"not an expression: {e!r}")


def _scale(lin: Linear | None, f) -> Linear | None:
    if lin is None:
        return None
    if f == 0:
        return {}, ZERO
    return {v: a * f for v, a in lin[0].items()}, lin[1] * f


# -- guards -------------------------------------------------------------------

_NEGATED = {"<=": ">", "<": ">=", ">=": "<", ">": "<=", "=": "!=", "!=": "="}


def negate(g):
    """Push a negation through ``g`` (De Morgan, comparison flipping)."""
    if isinstance(g, Atom):
        return Atom(g.lhs, _NEGATED[g.op], g.rhs)
    if isinstance(g, And):
        return Or(negate(g.left), negate(g.right))
    if isinstance(g, Or):
        return And(negate(g.left), negate(g.right))
    if isinstance(g, Not):
        return g.operand
    if isinstance(g, NonDet):
        return g
    raise TypeError(f"not a guard: {g!r}")


def guard(m: Octagon, g, env: Env | None = None) -> Octagon:
    """Over-approximate the states of ``m`` that satisfy ``g``."""
    env = _env(m, env)
    if m.is_bottom:
        return m
    if isinstance(g, NonDet):
        return m
    if isinstance(g, Not):
        return guard(m, negate(g.operand), env)
    if isinstance(g, And):
        return meet(guard(m, g.left, env), guard(m, g.right, env))
    if isinstance(g, Or):
        return join(guard(m, g.left, env), guard(m, g.right, env))
    if isinstance(g, Atom):
        return _guard_atom(m, g, env)
    raise TypeError(f"not a guard: {g!r}")


def _guard_atom(m: Octagon, g: Atom, env: Env) -> Octagon:
    lin = linearize(Sub(g.lhs, g.rhs), env)
    if lin is None:
        return m
    coeffs, const = lin
    # the atom now reads  sum(coeffs) + const  <op>  0
    if g.op == "!=":
        if not coeffs and const == 0:
            return Octagon.bottom(m.n_vars)
        return m
    if g.op in (">=", ">"):
        coeffs, const = {v: -a for v, a in coeffs.items()}, -const
    strict = g.op in ("<", ">")
    if g.op == "=":
        parts = [(coeffs, -const, False), ({v: -a for v, a in coeffs.items()}, const, False)]
    else:
        parts = [(coeffs, -const, strict)]
    out = m
    for cs, c, st in parts:
        out = _install(out, cs, c, st, env)
        if out.is_bottom:
            break
    return out


def _install(m: Octagon, coeffs: dict[int, Fraction], c: Fraction, strict: bool, env: Env) -> Octagon:
    """Guard by ``sum(coeffs[v] * v) <= c`` (``<`` when ``strict``)."""
    if coeffs and all(v in env.integers for v in coeffs) and all(a.denominator == 1 for a in coeffs.values()):
        g = math.gcd(*(int(a) for a in coeffs.values()))
        coeffs = {v: a / g for v, a in coeffs.items()}
        c = c / g
        c = Fraction(math.ceil(c) - 1) if strict else Fraction(math.floor(c))
    if not coeffs:
        holds = c > 0 if strict else c >= 0
        return m if holds else Octagon.bottom(m.n_vars)
    con = _as_octagonal(coeffs, c)
    if con is None:
        return m
    a = m.dbm.entries.copy()
    for i, j, v in con.cells():
        if v < a[i, j]:
            a[i, j] = v
    out = Octagon(m.n_vars, Dbm._wrap(a))
    return Octagon.bottom(m.n_vars) if is_empty(out) else out


def _as_octagonal(coeffs: dict[int, Fraction], c: Fraction) -> OctConstraint | None:
    items = sorted(coeffs.items())
    if len(items) == 1:
        (v, a), = items
        return OctConstraint.upper(v, c / a) if a > 0 else OctConstraint.lower(v, c / a)
    if len(items) == 2:
        (p, a), (q, b) = items
        if a == b == 1:
            return OctConstraint.sum(p, q, c)
        if a == b == -1:
            return OctConstraint.neg_sum(p, q, c)
        if a == 1 and b == -1:
            return OctConstraint.diff(p, q, c)
        if a == -1 and b == 1:
            return OctConstraint.diff(q, p, c)
    return None


def entails(m: Octagon, g, env: Env | None = None) -> bool:
    """True when every point of ``m`` satisfies ``g``.

    Bounds are read off the strong closure, so strict comparisons are
    decided exactly.  Disjunctions are only entailed through one of their
    sides, and ``?`` never is.
    """
    env = _env(m, env)
    s = strong_closure(m)
    return s.is_bottom or _entails(s, g, env)


def _entails(s: Octagon, g, env: Env) -> bool:
    if isinstance(g, NonDet):
        return False
    if isinstance(g, Not):
        return _entails(s, negate(g.operand), env)
    if isinstance(g, And):
        return _entails(s, g.left, env) and _entails(s, g.right, env)
    if isinstance(g, Or):
        return _entails(s, g.left, env) or _entails(s, g.right, env)
    lin = linearize(Sub(g.lhs, g.rhs), env)
    if lin is None:
        return False
    coeffs, const = lin
    # compare  sum(coeffs)  against  -const
    hi = _upper(s, coeffs)
    lo = -_upper(s, {v: -a for v, a in coeffs.items()})
    c = -const
    return {
        "<=": hi <= c,
        "<": hi < c,
        ">=": lo >= c,
        ">": lo > c,
        "=": lo == hi == c,
        "!=": hi < c or lo > c,
    }[g.op]


def _upper(s: Octagon, coeffs: dict[int, Fraction]) -> Bound:
    """Upper bound of ``sum(coeffs[v] * v)`` over the closed octagon ``s``."""
    a = s.dbm.entries
    items = sorted((v, c) for v, c in coeffs.items() if c != 0)
    if len(items) == 2 and all(abs(c) == 1 for _, c in items):
        (p, sp), (q, sq) = items
        # sp*p + sq*q  =  (sq*q) - (-sp*p)
        return a[2 * p + (1 if sp > 0 else 0), 2 * q + (0 if sq > 0 else 1)]
    total: Bound = ZERO
    for v, c in items:
        lo, hi = _project_closed(s, v)
        total += c * hi if c > 0 else c * lo
    return total


# -- assignments --------------------------------------------------------------


def assign(m: Octagon, k: int | str, e, env: Env | None = None) -> Octagon:
    """Over-approximate the effect of ``v_k := e`` on every state of ``m``."""
    env = _env(m, env)
    if isinstance(k, str):
        k = env.index(k)
    if m.is_bottom:
        return m
    lin = linearize(e, env)
    if lin is not None:
        coeffs, c = lin
        if coeffs == {k: 1}:
            return translate(m, k, c)
        if coeffs == {k: -1}:
            return translate(_swap_signs(m, k), k, c)
        if len(coeffs) == 1:
            (l, a), = coeffs.items()
            if a in (1, -1):
                return _assign_other(m, k, l, a, c)
    return _assign_interval(m, k, e, env)


def translate(m: Octagon, k: int, c) -> Octagon:
    """``v_k := v_k + c``: shift every bound involving ``v_k`` by ``c``."""
    if m.is_bottom or c == 0:
        return m
    a = m.dbm.entries.copy()
    p, n = 2 * k, 2 * k + 1
    a[:, p] += c
    a[:, n] -= c
    a[p, :] -= c
    a[n, :] += c
    return Octagon(m.n_vars, Dbm._wrap(a))


def _swap_signs(m: Octagon, k: int) -> Octagon:
    # v_k := -v_k exchanges the positive and negative forms of v_k
    perm = np.arange(2 * m.n_vars)
    perm[2 * k], perm[2 * k + 1] = 2 * k + 1, 2 * k
    return Octagon(m.n_vars, Dbm._wrap(m.dbm.entries[perm][:, perm]))


def _cleared(s: Octagon, k: int) -> np.ndarray:
    a = s.dbm.entries.copy()
    a[2 * k : 2 * k + 2, :] = INF
    a[:, 2 * k : 2 * k + 2] = INF
    a[2 * k, 2 * k] = a[2 * k + 1, 2 * k + 1] = ZERO
    return a


def _assign_other(m: Octagon, k: int, l: int, sign: int, c: Fraction) -> Octagon:
    """``v_k := sign * v_l + c`` with ``l != k``."""
    s = strong_closure(m)
    if s.is_bottom:
        return s
    a = _cleared(s, k)
    if sign == 1:
        con = [OctConstraint.diff(k, l, c), OctConstraint.diff(l, k, -c)]
    else:
        con = [OctConstraint.sum(k, l, c), OctConstraint.neg_sum(k, l, -c)]
    for cn in con:
        for i, j, v in cn.cells():
            a[i, j] = v
    return Octagon(m.n_vars, Dbm._wrap(a))


def _assign_interval(m: Octagon, k: int, e, env: Env) -> Octagon:
    s = strong_closure(m)
    if s.is_bottom:
        return s
    lo, hi = _eval(e, s, env)
    a = _cleared(s, k)
    if hi != INF:
        a[2 * k + 1, 2 * k] = 2 * hi
    if lo != -INF:
        a[2 * k, 2 * k + 1] = -2 * lo
    return Octagon(m.n_vars, Dbm._wrap(a))


# -- interval evaluation ------------------------------------------------------

Interval = tuple[Bound, Bound]


def interval_eval(e, m: Octagon, env: Env | None = None) -> Interval:
    """Range of ``e`` over the variable ranges of ``m`` (sound, not exact)."""
    env = _env(m, env)
    s = strong_closure(m)
    if s.is_bottom:
        raise ValueError("cannot evaluate over an empty octagon")
    return _eval(e, s, env)


def _mul(f: Fraction, iv: Interval) -> Interval:
    if f == 0:
        return ZERO, ZERO
    lo, hi = iv
    return (f * lo, f * hi) if f > 0 else (f * hi, f * lo)


def _eval(e, s: Octagon, env: Env) -> Interval:
    if isinstance(e, Const):
        return Fraction(e.value), Fraction(e.value)
    if isinstance(e, Var):
        return _project_closed(s, env.index(e.name))
    if isinstance(e, Random):
        if e.bound is None:
            return -INF, INF
        return ZERO, Fraction(e.bound - 1)
    if isinstance(e, Opaque):
        return _eval_opaque(e, s, env)
    if isinstance(e, Neg):
        return _mul(Fraction(-1), _eval(e.operand, s, env))
    if isinstance(e, MulConst):
        return _mul(Fraction(e.factor), _eval(e.operand, s, env))
    if isinstance(e, Add):
        (a, b), (c, d) = _eval(e.left, s, env), _eval(e.right, s, env)
        return a + c, b + d
    if isinstance(e, Sub):
        (a, b), (c, d) = _eval(e.left, s, env), _eval(e.right, s, env)
        return a - d, b - c
    raise TypeError(f"not an expression: {e!r}")


def _eval_opaque(e: Opaque, s: Octagon, env: Env) -> Interval:
    left, right = _eval(e.left, s, env), _eval(e.right, s, env)
    if e.op == "*" and right[0] == right[1]:
        return _mul(right[0], left)
    if e.op == "*" and left[0] == left[1]:
        return _mul(left[0], right)
    if e.op == "/" and right[0] == right[1] != 0:
        return _mul(1 / right[0], left)
    return -INF, INF
