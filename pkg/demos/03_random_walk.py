"""
Proving array bounds in a random walk
=====================================

Analyse the random-walk program from ``corpus/``, print the invariant at
every location of its loop kernel and check the index asserts.
"""

# %%
from pathlib import Path

from octolyze.analyzer import analyze, check_asserts
from octolyze.lang import parse, parse_guard, pretty
from octolyze.octagon import Octagon
from octolyze.report import render_octagon
from octolyze.transfer import Env, guard

corpus = Path(__file__).resolve().parent.parent / "corpus"

# %%
# The kernel: a counter moves up or down once per step, m steps in total.
kernel = parse((corpus / "walk_kernel.oct").read_text())
print(pretty(kernel))

# %%
# The analysis starts from ``m >= 0``.  The trace hook sees every state as
# it is computed, so the loop body reports once per pass.
env = Env.from_program(kernel)
entry = guard(Octagon.top(3), parse_guard("m >= 0", env.names), env)
inv = analyze(kernel, entry, trace=lambda loc, m: print(f"  l{loc}: {render_octagon(m, env.names)}"))

# %%
# Stable invariants, strongly closed.  At the loop exit ``i = m + 1`` and
# ``1 - i <= a <= i - 1`` combine into ``-m <= a <= m``.
for loc in inv:
    print(f"l{loc}: {render_octagon(inv.closed(loc), env.names)}")
print("loop head iterations:", inv.loops[3].iterations)

# %%
# The full program indexes a table ``tab[-m..m]`` with the walk position.
# Both accesses are proved in bounds.
program = parse((corpus / "randomwalk.oct").read_text())
for r in check_asserts(program, analyze(program)):
    print(f"l{r.location}: {r.status}")
