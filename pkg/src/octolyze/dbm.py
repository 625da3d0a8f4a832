"""Difference-bound matrices.

Entry ``m[i, j] = c`` encodes the potential constraint ``v_j - v_i <= c``;
``+oo`` means no constraint.  Reading the matrix as an adjacency matrix
gives the potential graph: an arc ``i -> j`` of weight ``m[i, j]`` for every
finite entry.

:class:`Dbm` values are immutable.  Every operation returns a new matrix.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from . import _scaled
from .numeric import INF, ZERO, bound, format_bound, parse_bound


class NegativeCycleError(ValueError):
    """Raised when closing a matrix whose potential graph has a negative cycle."""


class Dbm:
    """A square matrix of bounds."""

    __slots__ = ("_a",)

    def __init__(self, entries: Sequence[Sequence] | np.ndarray):
        rows = [list(r) for r in entries]
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("a DBM must be a non-empty square matrix")
        a = np.empty((n, n), dtype=object)
        for i, r in enumerate(rows):
            for j, v in enumerate(r):
                a[i, j] = bound(v)
        a.flags.writeable = False
        self._a = a

    @classmethod
    def _wrap(cls, a: np.ndarray) -> "Dbm":
        # trusted constructor: `a` is an object array of Fraction/INF that
        # nobody else holds a reference to
        m = cls.__new__(cls)
        a.flags.writeable = False
        m._a = a
        return m

    @classmethod
    def top(cls, dim: int) -> "Dbm":
        if dim <= 0:
            raise ValueError("dimension must be positive")
        return cls._wrap(np.full((dim, dim), INF, dtype=object))

    @property
    def dim(self) -> int:
        return self._a.shape[0]

    @property
    def entries(self) -> np.ndarray:
        """Read-only object array view of the entries."""
        return self._a

    def __getitem__(self, ij):
        return self._a[ij]

    def to_lists(self) -> list[list]:
        return self._a.tolist()

    def replace(self, updates: Iterable[tuple[int, int, object]]) -> "Dbm":
        """Copy with some entries overwritten."""
        a = self._a.copy()
        for i, j, v in updates:
            a[i, j] = bound(v)
        return Dbm._wrap(a)

    def __eq__(self, other):
        if not isinstance(other, Dbm):
            return NotImplemented
        return self.dim == other.dim and bool(np.all(self._a == other._a))

    __hash__ = None

    def __repr__(self):
        return f"Dbm({self.to_lists()!r})"

    def dump(self) -> str:
        lines = [f"dbm {self.dim}"]
        for row in self._a:
            lines.append(" ".join(format_bound(v) for v in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_dump(cls, text: str) -> "Dbm":
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        head = lines[0].split()
        if len(head) != 2 or head[0] != "dbm":
            raise ValueError("expected header line 'dbm <dim>'")
        dim = int(head[1])
        rows = [[parse_bound(tok) for tok in ln.split()] for ln in lines[1:]]
        if len(rows) != dim:
            raise ValueError(f"expected {dim} rows, got {len(rows)}")
        return cls(rows)


def _check_dims(m: Dbm, n: Dbm) -> None:
    if m.dim != n.dim:
        raise ValueError(f"dimension mismatch: {m.dim} vs {n.dim}")


def leq(m: Dbm, n: Dbm) -> bool:
    """Point-wise order: every entry of ``m`` is <= the one in ``n``."""
    _check_dims(m, n)
    return bool(np.all(m.entries <= n.entries))


def pointwise_min(m: Dbm, n: Dbm) -> Dbm:
    _check_dims(m, n)
    return Dbm._wrap(np.minimum(m.entries, n.entries))


def pointwise_max(m: Dbm, n: Dbm) -> Dbm:
    _check_dims(m, n)
    return Dbm._wrap(np.maximum(m.entries, n.entries))


def _zero_like(a: np.ndarray):
    return ZERO if a.dtype == object else 0.0


def bellman_ford_negative_cycle(a: np.ndarray) -> bool:
    """Bellman-Ford from a virtual source joined to every node by 0-arcs.

    Works on float or object arrays.  Relaxation is done a whole round at a
    time, which still settles all shortest paths of at most ``r`` arcs after
    round ``r``.
    """
    n = a.shape[0]
    dist = np.full(n, _zero_like(a), dtype=a.dtype)
    for _ in range(n):
        new = np.minimum(dist, (dist[:, None] + a).min(axis=0))
        if np.array_equal(new, dist):
            return False
        dist = new
    return bool(np.any((dist[:, None] + a).min(axis=0) < dist))


def has_negative_cycle(m: Dbm) -> bool:
    scaled = _scaled.to_scaled(m.entries, headroom=2 * m.dim + 2)
    if scaled is not None:
        return bellman_ford_negative_cycle(scaled[0])
    return bellman_ford_negative_cycle(m.entries)


def floyd_warshall(a: np.ndarray) -> np.ndarray:
    """Shortest-path closure, pivots in increasing order, diagonal reset to 0."""
    zero = _zero_like(a)
    for k in range(a.shape[0]):
        a = np.minimum(a, a[:, k, None] + a[None, k, :])
        np.fill_diagonal(a, zero)
    return a


def closure(m: Dbm) -> Dbm:
    """Shortest-path closure of a matrix without negative cycles.

    Raises :class:`NegativeCycleError` otherwise; test emptiness first.
    """
    if has_negative_cycle(m):
        raise NegativeCycleError("closure is undefined: the potential graph has a negative cycle")
    scaled = _scaled.to_scaled(m.entries, headroom=2 * m.dim + 2)
    if scaled is not None:
        x, scale = scaled
        return Dbm._wrap(_scaled.from_scaled(floyd_warshall(x), scale))
    return Dbm._wrap(floyd_warshall(m.entries.copy()))


def is_closed(m: Dbm) -> bool:
    """Local characterisation of closure: zero diagonal and triangle inequality."""
    a = m.entries
    if any(a[i, i] != 0 for i in range(m.dim)):
        return False
    for k in range(m.dim):
        if np.any(a > a[:, k, None] + a[None, k, :]):
            return False
    return True

