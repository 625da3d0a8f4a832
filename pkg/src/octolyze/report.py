"""Rendering of invariants and assert verdicts, as text or JSON-ready data.

Text form isolates the variable declared first, in the usual reading order
of loop invariants: ``1 - i <= a``, ``a <= i - 1``, ``i = m + 1``.  When a
linear form has equal lower and upper bounds the pair is printed as one
equality.  The JSON form keeps one inequality per constraint, with the
variables on the left, so each entry can be fed back to
:func:`octolyze.octagon.parse_constraint`.
"""

from __future__ import annotations

from typing import Sequence

from .analyzer import AssertReport, InvariantMap
from .lang.pretty import guard as render_guard
from .numeric import format_bound
from .octagon import Kind, Octagon, OctConstraint, to_constraints


def location_name(loc: int) -> str:
    return f"l{loc}"


def _affine(sign: int, name: str | None, k) -> str:
    """Render ``sign * name + k``."""
    if name is None:
        return format_bound(k)
    if sign > 0:
        if k == 0:
            return name
        return f"{name} + {format_bound(k)}" if k > 0 else f"{name} - {format_bound(-k)}"
    return f"-{name}" if k == 0 else f"{format_bound(k)} - {name}"


def _bounds(c: OctConstraint, names: Sequence[str]):
    """``(x, side, rhs)``: ``x <= rhs`` if side is "upper", ``rhs <= x`` otherwise.

    ``x`` is the lower-indexed variable and ``rhs`` an affine expression in
    the other one.  Returns the linear form key too, for equality merging.
    """
    if c.kind is Kind.UPPER:
        return names[c.i], "upper", format_bound(c.c), (c.i, None, 1)
    if c.kind is Kind.LOWER:
        return names[c.i], "lower", format_bound(c.c), (c.i, None, 1)
    x, y = sorted((c.i, c.j))
    if c.kind is Kind.SUM:  # x <= c - y
        return names[x], "upper", _affine(-1, names[y], c.c), (x, y, -1)
    if c.kind is Kind.NEG_SUM:  # -c - y <= x
        return names[x], "lower", _affine(-1, names[y], -c.c), (x, y, -1)
    if c.i == x:  # x - y <= c  ->  x <= y + c
        return names[x], "upper", _affine(1, names[y], c.c), (x, y, 1)
    return names[x], "lower", _affine(1, names[y], -c.c), (x, y, 1)  # y - x <= c


def _bound_value(c: OctConstraint):
    # value of the affine right-hand side's constant, for matching pairs
    if c.kind is Kind.NEG_SUM:
        return -c.c
    if c.kind is Kind.DIFF and c.i != min(c.i, c.j):
        return -c.c
    return c.c


def render_constraints(m: Octagon, names: Sequence[str]) -> list[str]:
    """Human-readable constraints, equalities merged."""
    cs = to_constraints(m)
    info = [(c, *_bounds(c, names)) for c in cs]
    by_form: dict = {}
    for c, x, side, rhs, form in info:
        by_form.setdefault(form, {})[side] = c
    out, done = [], set()
    for c, x, side, rhs, form in info:
        if form in done:
            continue
        pair = by_form[form]
        if len(pair) == 2 and _bound_value(pair["upper"]) == _bound_value(pair["lower"]):
            out.append(f"{x} = {rhs}")
            done.add(form)
        elif side == "upper":
            out.append(f"{x} <= {rhs}")
        else:
            out.append(f"{rhs} <= {x}")
    return out


def render_octagon(m: Octagon, names: Sequence[str]) -> str:
    if m.is_bottom:
        return "bottom"
    return "{" + "; ".join(render_constraints(m, names)) + "}"


def constraint_parts(c: OctConstraint, names: Sequence[str]) -> dict:
    """``{"lhs", "op", "rhs"}`` with all variables on the left."""
    text = c.format(names)
    op = ">=" if c.kind is Kind.LOWER else "<="
    lhs, rhs = text.split(f" {op} ")
    return {"lhs": lhs, "op": op, "rhs": rhs}


def invariant_lines(inv: InvariantMap, locs=None, closed: bool = True, matrix: bool = False) -> list[str]:
    names = inv.env.names
    out = []
    for loc in inv:
        if locs is not None and loc not in locs:
            continue
        m = inv.closed(loc) if closed else inv[loc]
        out.append(f"{location_name(loc)}: {render_octagon(m, names)}")
        if matrix and not inv[loc].is_bottom:
            out.extend("    " + ln for ln in inv[loc].dbm.dump().splitlines())
    return out


def assert_lines(report: AssertReport) -> list[str]:
    return [f"{location_name(r.location)}: assert {render_guard(r.guard)}: {r.status}" for r in report]


def to_json(inv: InvariantMap, report: AssertReport, locs=None, closed: bool = True, matrix: bool = False) -> dict:
    names = inv.env.names
    invariants = []
    for loc in inv:
        if locs is not None and loc not in locs:
            continue
        m = inv.closed(loc) if closed else inv[loc]
        entry = {
            "location": location_name(loc),
            "constraints": [constraint_parts(c, names) for c in to_constraints(m)],
            "bottom": m.is_bottom,
        }
        if matrix:
            entry["matrix"] = None if inv[loc].is_bottom else inv[loc].dbm.dump()
        invariants.append(entry)
    asserts = [
        {"location": location_name(r.location), "guard": render_guard(r.guard), "status": r.status}
        for r in report
    ]
    loops = [
        {"location": location_name(s.head), "iterations": s.max_iterations}
        for _, s in sorted(inv.loops.items())
    ]
    return {"variables": list(names), "invariants": invariants, "asserts": asserts, "loops": loops}
