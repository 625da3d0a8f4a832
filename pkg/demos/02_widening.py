"""
Why widening must see the raw iterate
=====================================

Widening drops every bound that grew.  If the previous iterate is
strongly closed first, bounds it had only implicitly come back at each
step and the sequence may keep climbing.
"""

# %%
import itertools

from octolyze.dbm import Dbm
from octolyze.numeric import INF
from octolyze.octagon import Octagon, format_constraints, is_included, strong_closure, widen


def chain(i):
    # v1 and v2 stay within 1 of each other; v0 drifts away from both
    arcs = {(1, 2): 1, (2, 1): 1}
    if i == 0:
        arcs.update({(0, 1): 0, (1, 0): 0})
    else:
        arcs.update({(0, 1): i, (1, 0): i, (0, 2): i, (2, 0): i})
    a = [[INF] * 6 for _ in range(6)]
    for (x, y), w in arcs.items():
        a[2 * x][2 * y] = w
        a[2 * y + 1][2 * x + 1] = w
    return strong_closure(Octagon(3, Dbm(a)))


# %%
# Keeping the left argument as produced by widening: the sequence is
# stable after two steps.
m = chain(0)
for i in itertools.count(1):
    nxt = widen(m, chain(i))
    if nxt == m:
        print(f"stable after {i - 1} steps")
        break
    m = nxt
print(format_constraints(m))

# %%
# Closing the left argument first: every step is strictly larger than the
# last one, for as long as we care to look.
m = chain(0)
for i in range(1, 8):
    nxt = widen(strong_closure(m), chain(i))
    grew = is_included(m, nxt) and not is_included(nxt, m)
    print(f"step {i}: strictly larger = {grew}, v1 - v0 <= {strong_closure(nxt)[0, 2]}")
    m = nxt
