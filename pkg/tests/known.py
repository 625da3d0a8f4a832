"""Hand-checked example octagons shared by several test modules."""

from octolyze.dbm import Dbm
from octolyze.numeric import INF
from octolyze.octagon import Octagon, OctConstraint, from_constraints, parse_constraints

I = INF

# v0 <= 1 and v1 <= 2, whose strong closure makes v0 + v1 <= 3 explicit
IMPLICIT_SUM = from_constraints(2, [OctConstraint.upper(0, 1), OctConstraint.upper(1, 2)])
IMPLICIT_SUM_CLOSED = Octagon.from_matrix(
    [
        [0, I, I, I],
        [2, 0, 3, I],
        [I, I, 0, I],
        [3, I, 4, 0],
    ]
)

# v1 <= v0, v0 + v1 <= 3, v1 >= 3/2: the single rational point (3/2, 3/2),
# and no integer point at all
HALF_POINT = from_constraints(2, parse_constraints("v1 - v0 <= 0\nv0 + v1 <= 3\nv1 >= 3/2"))


def unstable_chain(i: int) -> Octagon:
    """Element ``i`` of a sequence on which closing the widened iterate
    keeps the iteration from stabilizing.

    Arcs between the positive forms of v0, v1, v2 (the negative forms
    follow by coherence): for ``i == 0``, v0 <-> v1 with weight 0; for
    ``i > 0``, v0 <-> v1 and v0 <-> v2 with weight ``i``; v1 <-> v2 with
    weight 1 always.
    """
    arcs = {(1, 2): 1, (2, 1): 1}
    if i == 0:
        arcs.update({(0, 1): 0, (1, 0): 0})
    else:
        arcs.update({(0, 1): i, (1, 0): i, (0, 2): i, (2, 0): i})
    a = [[I] * 6 for _ in range(6)]
    for (x, y), w in arcs.items():
        a[2 * x][2 * y] = w
        a[2 * y + 1][2 * x + 1] = w
    return Octagon(3, Dbm(a))
