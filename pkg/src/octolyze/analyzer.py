"""Forward abstract execution over the octagon domain.

Every location starts at bottom except the entry, which starts at top (or
at a caller-supplied octagon).  Statements propagate forward:

* ``x := e`` and ``assume g`` apply the matching transfer function;
* ``assert g`` leaves the state unchanged; it is checked afterwards;
* ``if`` guards each branch and joins the two branch exits;
* ``while`` iterates the loop head with widening until the head state is
  stable (matrix equality), then leaves through the negated guard.

Loop heads are iterated as ``h0 = guard(close(entry), g)`` and
``h(n+1) = widen(h(n), guard(close(body_end(n)), g))``.  The head states are
never closed themselves: widening must see the raw previous iterate.  After
stabilization, the invariants recorded inside the body are those of the
last pass, made from the stable head.  No narrowing pass follows.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field

from .lang.ast import Assert, Assign, Assume, If, Not, Program, While, block_end, locations
from .octagon import Octagon, join, strong_closure, widen
from .transfer import Env, assign, entails, guard


@dataclass
class LoopStats:
    """Bookkeeping for one ``while`` statement (keyed by its body location).

    ``iterations`` counts the head iterates computed in the most recent run
    of the loop, the final (stable) one included; ``history`` holds them.
    A loop nested in another one runs once per outer pass.
    """

    head: int
    runs: int = 0
    iterations: int = 0
    max_iterations: int = 0
    history: list[Octagon] = field(default_factory=list)


class InvariantMap(Mapping):
    """Location -> octagon, as computed by :func:`analyze`.

    Stored states are raw matrices; :meth:`closed` gives the normal form.
    """

    def __init__(self, program: Program, env: Env, states: dict[int, Octagon], loops: dict[int, LoopStats]):
        self.program = program
        self.env = env
        self._states = states
        self.loops = loops

    def __getitem__(self, loc: int) -> Octagon:
        return self._states[loc]

    def __iter__(self):
        return iter(sorted(self._states))

    def __len__(self):
        return len(self._states)

    def closed(self, loc: int) -> Octagon:
        return strong_closure(self._states[loc])

    @property
    def exit(self) -> int:
        """Location at the end of the program."""
        return block_end(self.program.body, Program.entry)


class _Run:
    def __init__(self, program: Program, env: Env, entry: Octagon, trace):
        self.env = env
        self.trace = trace
        n = len(env.names)
        self.states = {loc: Octagon.bottom(n) for loc in range(program.n_locations)}
        self.states[Program.entry] = entry
        self.loops: dict[int, LoopStats] = {}

    def record(self, loc: int, m: Octagon) -> None:
        self.states[loc] = m
        if self.trace is not None:
            self.trace(loc, m)

    def block(self, stmts, loc: int, m: Octagon) -> Octagon:
        self.record(loc, m)
        for s in stmts:
            m = self.stmt(s, m)
            self.record(s.post, m)
        return m

    def stmt(self, s, m: Octagon) -> Octagon:
        if isinstance(s, Assign):
            return assign(m, self.env.index(s.var), s.expr, self.env)
        if isinstance(s, Assume):
            return guard(m, s.guard, self.env)
        if isinstance(s, Assert):
            return m
        if isinstance(s, If):
            then_end = self.block(s.then_body, s.then_loc, guard(m, s.guard, self.env))
            else_end = self.block(s.else_body, s.else_loc, guard(m, Not(s.guard), self.env))
            return join(then_end, else_end)
        if isinstance(s, While):
            return self.loop(s, m)
        raise TypeError(f"not a statement: {s!r}")

    def loop(self, s: While, entry: Octagon) -> Octagon:
        stats = self.loops.setdefault(s.body_loc, LoopStats(s.body_loc))
        stats.runs += 1
        entry_closed = strong_closure(entry)
        head = guard(entry_closed, s.guard, self.env)
        history = [head]
        while True:
            end = self.block(s.body, s.body_loc, head)
            nxt = widen(head, guard(strong_closure(end), s.guard, self.env))
            history.append(nxt)
            if nxt == head:
                break
            head = nxt
        stats.iterations = len(history)
        stats.max_iterations = max(stats.max_iterations, stats.iterations)
        stats.history = history
        out = Not(s.guard)
        return join(guard(entry_closed, out, self.env), guard(strong_closure(end), out, self.env))


def analyze(program: Program, entry: Octagon | None = None, trace=None) -> InvariantMap:
    """Compute an invariant for every location of ``program``.

    ``entry`` is the state at ``l0`` (default: top).  ``trace(loc, state)``,
    if given, is called every time a location is (re)assigned, so loop
    bodies report once per pass.
    """
    env = Env.from_program(program)
    n = len(env.names)
    if entry is None:
        entry = Octagon.top(n)
    elif entry.n_vars != n:
        raise ValueError(f"entry octagon has {entry.n_vars} variables, program has {n}")
    run = _Run(program, env, entry, trace)
    run.block(program.body, Program.entry, entry)
    return InvariantMap(program, env, run.states, run.loops)


@dataclass(frozen=True)
class AssertResult:
    location: int
    guard: object
    status: str  # "proved" or "unknown"

    @property
    def proved(self) -> bool:
        return self.status == "proved"


@dataclass(frozen=True)
class AssertReport:
    results: tuple[AssertResult, ...]

    @property
    def all_proved(self) -> bool:
        return all(r.proved for r in self.results)

    def __iter__(self):
        return iter(self.results)

    def __len__(self):
        return len(self.results)


def check_asserts(program: Program, inv: InvariantMap) -> AssertReport:
    """An assert is proved when no state at its location violates it.

    Two sufficient tests are tried: guarding the invariant by the negated
    assertion gives bottom, or the invariant's bounds entail the assertion.
    The second one decides strict comparisons exactly, where guards relax
    them.
    """
    out = []
    for s, pre in locations(program):
        if isinstance(s, Assert):
            m = inv[pre]
            ok = guard(m, Not(s.guard), inv.env).is_bottom or entails(m, s.guard, inv.env)
            out.append(AssertResult(pre, s.guard, "proved" if ok else "unknown"))
    return AssertReport(tuple(out))
