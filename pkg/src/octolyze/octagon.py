"""The octagon abstract domain.

An octagon over ``N`` variables is stored as a coherent DBM of side ``2N``
over the doubled variables: index ``2i`` stands for ``+v_i`` and ``2i + 1``
for ``-v_i``.  Coherence means ``m[i, j] == m[bar(j), bar(i)]`` where
``bar(i) = i ^ 1``: the two potential constraints encoding one octagonal
constraint always carry the same bound.

All values are immutable.  Widening must receive its left argument
*unclosed*; closing it between steps can break termination.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _scaled
from .dbm import Dbm, bellman_ford_negative_cycle, leq, pointwise_max, pointwise_min
from .numeric import INF, ZERO, Bound, bound, format_bound, half


def bar(i: int) -> int:
    return i ^ 1


class Kind(enum.Enum):
    SUM = "sum"  # v_i + v_j <= c
    DIFF = "diff"  # v_i - v_j <= c
    NEG_SUM = "negsum"  # -v_i - v_j <= c
    UPPER = "upper"  # v_i <= c
    LOWER = "lower"  # v_i >= c


_KIND_ORDER = {Kind.SUM: 0, Kind.DIFF: 1, Kind.NEG_SUM: 2}


@dataclass(frozen=True)
class OctConstraint:
    """One octagonal constraint over program variables ``i`` (and ``j``)."""

    kind: Kind
    i: int
    j: int | None
    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c", bound(self.c))
        if self.c == INF:
            raise ValueError("constraint constant must be finite")
        unary = self.kind in (Kind.UPPER, Kind.LOWER)
        if unary != (self.j is None):
            raise ValueError(f"{self.kind.name} constraint has wrong arity")
        if not unary and self.i == self.j:
            raise ValueError("two-variable constraint needs distinct variables")

    @classmethod
    def sum(cls, i, j, c):
        return cls(Kind.SUM, i, j, c)

    @classmethod
    def diff(cls, i, j, c):
        return cls(Kind.DIFF, i, j, c)

    @classmethod
    def neg_sum(cls, i, j, c):
        return cls(Kind.NEG_SUM, i, j, c)

    @classmethod
    def upper(cls, i, c):
        return cls(Kind.UPPER, i, None, c)

    @classmethod
    def lower(cls, i, c):
        return cls(Kind.LOWER, i, None, c)

    def variables(self) -> tuple[int, ...]:
        return (self.i,) if self.j is None else (self.i, self.j)

    def cells(self) -> list[tuple[int, int, Fraction]]:
        """Matrix cells (row, col, value) this constraint installs."""
        i, j, c = self.i, self.j, self.c
        if self.kind is Kind.SUM:
            return [(2 * j + 1, 2 * i, c), (2 * i + 1, 2 * j, c)]
        if self.kind is Kind.DIFF:
            return [(2 * j, 2 * i, c), (2 * i + 1, 2 * j + 1, c)]
        if self.kind is Kind.NEG_SUM:
            return [(2 * i, 2 * j + 1, c), (2 * j, 2 * i + 1, c)]
        if self.kind is Kind.UPPER:
            return [(2 * i + 1, 2 * i, 2 * c)]
        return [(2 * i, 2 * i + 1, -2 * c)]

    def coefficients(self) -> dict[int, int]:
        if self.kind is Kind.UPPER:
            return {self.i: 1}
        if self.kind is Kind.LOWER:
            return {self.i: -1}
        si, sj = {Kind.SUM: (1, 1), Kind.DIFF: (1, -1), Kind.NEG_SUM: (-1, -1)}[self.kind]
        return {self.i: si, self.j: sj}

    def holds(self, point: Sequence) -> bool:
        if self.kind is Kind.LOWER:
            return point[self.i] >= self.c
        return sum(a * point[v] for v, a in self.coefficients().items()) <= self.c

    def format(self, names: Sequence[str] | None = None) -> str:
        nm = (lambda k: names[k]) if names is not None else (lambda k: f"v{k}")
        c = format_bound(self.c)
        if self.kind is Kind.UPPER:
            return f"{nm(self.i)} <= {c}"
        if self.kind is Kind.LOWER:
            return f"{nm(self.i)} >= {c}"
        if self.kind is Kind.SUM:
            return f"{nm(self.i)} + {nm(self.j)} <= {c}"
        if self.kind is Kind.DIFF:
            return f"{nm(self.i)} - {nm(self.j)} <= {c}"
        return f"-{nm(self.i)} - {nm(self.j)} <= {c}"

    def __str__(self):
        return self.format()


class Octagon:
    """Either bottom, or a coherent DBM of side ``2 * n_vars``."""

    __slots__ = ("n_vars", "dbm")

    def __init__(self, n_vars: int, dbm: Dbm | None):
        if n_vars <= 0:
            raise ValueError("an octagon needs at least one variable")
        if dbm is not None and dbm.dim != 2 * n_vars:
            raise ValueError(f"expected a DBM of side {2 * n_vars}, got {dbm.dim}")
        self.n_vars = n_vars
        self.dbm = dbm

    @classmethod
    def top(cls, n_vars: int) -> "Octagon":
        return cls(n_vars, Dbm.top(2 * n_vars))

    @classmethod
    def bottom(cls, n_vars: int) -> "Octagon":
        return cls(n_vars, None)

    @classmethod
    def from_matrix(cls, rows) -> "Octagon":
        d = rows if isinstance(rows, Dbm) else Dbm(rows)
        if d.dim % 2:
            raise ValueError("octagon matrices have even side")
        return cls(d.dim // 2, d)

    @property
    def is_bottom(self) -> bool:
        return self.dbm is None

    def __getitem__(self, ij):
        if self.dbm is None:
            raise ValueError("bottom has no matrix")
        return self.dbm[ij]

    def __eq__(self, other):
        """Syntactic equality (same matrix); see :func:`equals` for sets."""
        if not isinstance(other, Octagon):
            return NotImplemented
        if self.n_vars != other.n_vars:
            return False
        if self.dbm is None or other.dbm is None:
            return self.dbm is other.dbm
        return self.dbm == other.dbm

    __hash__ = None

    def __repr__(self):
        if self.dbm is None:
            return f"Octagon.bottom({self.n_vars})"
        body = "; ".join(c.format() for c in to_constraints(self))
        return f"Octagon({self.n_vars}, {{{body}}})"


def _check_vars(m: Octagon, n: Octagon) -> None:
    if m.n_vars != n.n_vars:
        raise ValueError(f"variable count mismatch: {m.n_vars} vs {n.n_vars}")


def is_coherent(m: Octagon) -> bool:
    if m.dbm is None:
        return True
    a = m.dbm.entries
    perm = np.arange(a.shape[0]) ^ 1
    return bool(np.all(a == a[perm][:, perm].T))


def from_constraints(n_vars: int, cs: Iterable[OctConstraint]) -> Octagon:
    a = np.full((2 * n_vars, 2 * n_vars), INF, dtype=object)
    for c in cs:
        for v in c.variables():
            if not 0 <= v < n_vars:
                raise ValueError(f"variable index {v} out of range for {n_vars} variables")
        for i, j, v in c.cells():
            if v < a[i, j]:
                a[i, j] = v
    return Octagon(n_vars, Dbm._wrap(a))


def _constraint_of_cell(i: int, j: int, c: Fraction) -> OctConstraint:
    # m[i, j] = c bounds s_j * v_{j//2} - s_i * v_{i//2}, s = +1 for even
    # indices and -1 for odd ones
    p, q = i // 2, j // 2
    if p == q:
        if i % 2:
            return OctConstraint.upper(p, c / 2)
        return OctConstraint.lower(p, -c / 2)
    cq = 1 if j % 2 == 0 else -1
    cp = -1 if i % 2 == 0 else 1
    if cp == 1 and cq == 1:
        return OctConstraint.sum(min(p, q), max(p, q), c)
    if cp == -1 and cq == -1:
        return OctConstraint.neg_sum(min(p, q), max(p, q), c)
    if cp == 1:
        return OctConstraint.diff(p, q, c)
    return OctConstraint.diff(q, p, c)


def _sort_key(c: OctConstraint):
    if c.j is None:
        return (0, c.i, 0 if c.kind is Kind.LOWER else 1, 0, 0)
    lo, hi = sorted((c.i, c.j))
    return (1, lo, hi, _KIND_ORDER[c.kind], c.i != lo)


def to_constraints(m: Octagon) -> list[OctConstraint]:
    """List the finite entries as constraints, coherent twins merged.

    Unary bounds come first, then binary ones ordered by (low var, high
    var, kind).  Bottom yields an empty list too; check ``is_bottom``.
    """
    if m.dbm is None:
        return []
    a = m.dbm.entries
    out = {}
    n = a.shape[0]
    for i in range(n):
        for j in range(n):
            if i == j or a[i, j] == INF:
                continue
            c = _constraint_of_cell(i, j, a[i, j])
            key = (c.kind, c.i, c.j)
            if key not in out or c.c < out[key].c:
                out[key] = c
    return sorted(out.values(), key=_sort_key)


# -- emptiness and strong closure -------------------------------------------


def is_empty(m: Octagon) -> bool:
    if m.dbm is None:
        return True
    scaled = _scaled.to_scaled(m.dbm.entries, headroom=2 * m.dbm.dim + 2)
    if scaled is not None:
        return bellman_ford_negative_cycle(scaled[0])
    return bellman_ford_negative_cycle(m.dbm.entries)


def _cplus(a: np.ndarray, k: int, zero) -> np.ndarray:
    kb = k ^ 1
    ck, ckb = a[:, k], a[:, kb]
    rk, rkb = a[k, :], a[kb, :]
    out = np.minimum(a, ck[:, None] + rk[None, :])
    out = np.minimum(out, ckb[:, None] + rkb[None, :])
    out = np.minimum(out, (ck + a[k, kb])[:, None] + rkb[None, :])
    out = np.minimum(out, (ckb + a[kb, k])[:, None] + rk[None, :])
    np.fill_diagonal(out, zero)
    return out


def _unary_sums(a: np.ndarray) -> np.ndarray:
    # s[i, j] = a[i, bar(i)] + a[bar(j), j]
    idx = np.arange(a.shape[0])
    u = a[idx, idx ^ 1]
    return u[:, None] + u[None, idx ^ 1]


def _strong_close_exact(a: np.ndarray) -> np.ndarray:
    for k in range(0, a.shape[0], 2):
        a = _cplus(a, k, ZERO)
        a = np.minimum(a, _unary_sums(a) / 2)
    return a


def _strong_close_scaled(x: np.ndarray, scale: int):
    """Same schedule on scaled float64 integers; ``None`` if values get too big."""
    for k in range(0, x.shape[0], 2):
        if not _scaled.fits(x):
            return None
        x = _cplus(x, k, 0.0)
        s = _unary_sums(x)
        fin = np.isfinite(s)
        if np.any(np.mod(s[fin], 2) != 0):
            # halving would leave the integers: refine the common denominator
            x, s, scale = x * 2, s * 2, scale * 2
        x = np.minimum(x, s / 2)
    return x, scale


def _strong_close_array(a: np.ndarray) -> np.ndarray:
    scaled = _scaled.to_scaled(a)
    if scaled is not None:
        res = _strong_close_scaled(*scaled)
        if res is not None:
            return _scaled.from_scaled(*res)
    return _strong_close_exact(a.copy())


def strong_closure(m: Octagon) -> Octagon:
    """Normal form of a non-empty octagon; bottom when the octagon is empty."""
    if is_empty(m):
        return Octagon.bottom(m.n_vars)
    return Octagon(m.n_vars, Dbm._wrap(_strong_close_array(m.dbm.entries)))


def is_strongly_closed(m: Octagon) -> bool:
    if m.dbm is None:
        return True
    a = m.dbm.entries
    if not is_coherent(m) or any(a[i, i] != 0 for i in range(a.shape[0])):
        return False
    for k in range(a.shape[0]):
        if np.any(a > a[:, k, None] + a[None, k, :]):
            return False
    return bool(np.all(a <= _unary_sums(a) / 2))


# -- comparison ---------------------------------------------------------------


def is_included(m: Octagon, n: Octagon) -> bool:
    """True iff the set of ``m`` is a subset of the set of ``n``."""
    _check_vars(m, n)
    sm = strong_closure(m)
    if sm.dbm is None:
        return True
    if n.dbm is None:
        return False
    return leq(sm.dbm, n.dbm)


def equals(m: Octagon, n: Octagon) -> bool:
    """Set equality, decided on strong closures."""
    _check_vars(m, n)
    return strong_closure(m) == strong_closure(n)


def project(m: Octagon, v: int) -> tuple[Bound, Bound]:
    """Range ``(lo, hi)`` of variable ``v``; ``lo`` may be ``-inf``."""
    s = strong_closure(m)
    if s.dbm is None:
        raise ValueError("cannot project an empty octagon")
    return _project_closed(s, v)


def _project_closed(s: Octagon, v: int) -> tuple[Bound, Bound]:
    lo = s.dbm[2 * v, 2 * v + 1]
    hi = s.dbm[2 * v + 1, 2 * v]
    return (-INF if lo == INF else -half(lo)), half(hi)


# -- lattice operators --------------------------------------------------------


def meet(m: Octagon, n: Octagon) -> Octagon:
    """Exact intersection."""
    _check_vars(m, n)
    if m.dbm is None or n.dbm is None:
        return Octagon.bottom(m.n_vars)
    r = Octagon(m.n_vars, pointwise_min(m.dbm, n.dbm))
    return Octagon.bottom(m.n_vars) if is_empty(r) else r


def join(m: Octagon, n: Octagon) -> Octagon:
    """Smallest octagon containing both; the result is strongly closed."""
    _check_vars(m, n)
    sm, sn = strong_closure(m), strong_closure(n)
    if sm.dbm is None:
        return sn
    if sn.dbm is None:
        return sm
    return Octagon(m.n_vars, pointwise_max(sm.dbm, sn.dbm))


def widen(m: Octagon, n: Octagon) -> Octagon:
    """Keep the entries of ``m`` that ``n`` does not exceed, drop the others.

    ``m`` must be the previous (unclosed) iterate; ``n`` is best strongly
    closed.  Bottom on either side returns the other argument.
    """
    _check_vars(m, n)
    if m.dbm is None:
        return n
    if n.dbm is None:
        return m
    a, b = m.dbm.entries, n.dbm.entries
    out = np.where(b <= a, a, INF).astype(object)
    return Octagon(m.n_vars, Dbm._wrap(out))


def forget(m: Octagon, k: int) -> Octagon:
    """Drop every constraint on ``v_k``, keeping implied ones on the others."""
    s = strong_closure(m)
    if s.dbm is None:
        return s
    a = s.dbm.entries.copy()
    a[2 * k : 2 * k + 2, :] = INF
    a[:, 2 * k : 2 * k + 2] = INF
    a[2 * k, 2 * k] = a[2 * k + 1, 2 * k + 1] = ZERO
    return Octagon(m.n_vars, Dbm._wrap(a))


def restrict(m: Octagon, keep: Iterable[int]) -> Octagon:
    """Forget every variable not in ``keep``."""
    keep = set(keep)
    out = strong_closure(m)
    for k in range(m.n_vars):
        if k not in keep:
            out = forget(out, k)
    return out


# -- textual constraint sets --------------------------------------------------

_NUM = r"[+-]?\d+(?:/\d+|\.\d+)?"


def parse_constraint(text: str, names: Sequence[str] | Mapping[str, int] | None = None) -> OctConstraint:
    """Parse ``[-]x [+|-] y <= c``, ``x <= c`` or ``x >= c``.

    Variables are ``v<i>`` unless ``names`` is given.
    """
    if names is None:
        index = None
    elif isinstance(names, Mapping):
        index = dict(names)
    else:
        index = {n: i for i, n in enumerate(names)}

    def var(tok: str) -> int:
        if index is None:
            m = re.fullmatch(r"v(\d+)", tok)
            if not m:
                raise ValueError(f"unknown variable {tok!r}")
            return int(m.group(1))
        if tok not in index:
            raise ValueError(f"unknown variable {tok!r}")
        return index[tok]

    ident = r"[A-Za-z_]\w*"
    s = text.strip()
    m = re.fullmatch(rf"(-?)\s*({ident})\s*([+-])\s*({ident})\s*<=\s*({_NUM})", s)
    if m:
        neg, x, op, y, c = m.groups()
        i, j, c = var(x), var(y), Fraction(c)
        if not neg and op == "+":
            return OctConstraint.sum(i, j, c)
        if not neg and op == "-":
            return OctConstraint.diff(i, j, c)
        if neg and op == "-":
            return OctConstraint.neg_sum(i, j, c)
        return OctConstraint.diff(j, i, c)
    m = re.fullmatch(rf"(-?)\s*({ident})\s*(<=|>=)\s*({_NUM})", s)
    if m:
        neg, x, op, c = m.groups()
        i, c = var(x), Fraction(c)
        if neg:
            op, c = ("<=" if op == ">=" else ">="), -c
        return OctConstraint.upper(i, c) if op == "<=" else OctConstraint.lower(i, c)
    raise ValueError(f"not an octagonal constraint: {text!r}")


def parse_constraints(text: str, names=None) -> list[OctConstraint]:
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse_constraint(line, names))
    return out


def format_constraints(m: Octagon, names: Sequence[str] | None = None) -> str:
    return "".join(c.format(names) + "\n" for c in to_constraints(m))
