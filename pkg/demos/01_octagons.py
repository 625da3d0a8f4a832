"""
Octagons from constraints
=========================

A walk through the domain: build octagons from constraints, look at the
matrix behind them and at what strong closure adds.
"""

# %%
# An octagon over two variables is a conjunction of constraints of the
# form ``±x ± y <= c``.  Here ``v0 <= 1`` and ``v1 <= 2``.
from octolyze.numeric import format_bound
from octolyze.octagon import (
    format_constraints,
    from_constraints,
    is_empty,
    join,
    meet,
    parse_constraints,
    project,
    strong_closure,
)

box = from_constraints(2, parse_constraints("v0 <= 1\nv1 <= 2"))
print(format_constraints(box))

# %%
# Internally each variable has a positive and a negative form, so two
# variables give a 4x4 matrix.  Entry ``[i, j]`` bounds ``w_j - w_i`` where
# ``w = (v0, -v0, v1, -v1)``.  Unary bounds are stored doubled.
print(box.dbm.dump())

# %%
# Strong closure derives every implied constraint.  The sum bound
# ``v0 + v1 <= 3`` was implicit; now it is a matrix entry.
closed = strong_closure(box)
print(format_constraints(closed))
print("v0 + v1 <=", closed[1, 2])

# %%
# Over the rationals this octagon holds exactly one point, (3/2, 3/2).
# There is no integer point, which the domain cannot see.
point = from_constraints(2, parse_constraints("v1 - v0 <= 0\nv0 + v1 <= 3\nv1 >= 3/2"))
print("empty:", is_empty(point))
for v in (0, 1):
    lo, hi = project(point, v)
    print(f"v{v} in [{format_bound(lo)}, {format_bound(hi)}]")

# %%
# Meet is exact; join is the smallest octagon containing both arguments.
left = from_constraints(2, parse_constraints("v0 <= 0\nv0 >= 0\nv1 <= 0\nv1 >= 0"))
right = from_constraints(2, parse_constraints("v0 <= 2\nv0 >= 2\nv1 <= 1\nv1 >= 1"))
print(format_constraints(join(left, right)))
print("meet is empty:", meet(left, right).is_bottom)
