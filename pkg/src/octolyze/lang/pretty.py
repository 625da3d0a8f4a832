"""Canonical source rendering with location comments.

``parse(pretty(p)) == p`` for every program the parser can produce.  Only
the parentheses needed to preserve the tree shape are emitted.
"""

from __future__ import annotations

from fractions import Fraction

from .ast import (
    Add,
    And,
    Assert,
    Assign,
    Assume,
    Atom,
    Const,
    If,
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
    While,
)

INDENT = "  "


def number(x: Fraction) -> str:
    """Decimal literal for ``x``, or ``p/q`` when it has no finite expansion."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    d = x.denominator
    while d % 2 == 0:
        d //= 2
    while d % 5 == 0:
        d //= 5
    if d != 1:
        return f"{x.numerator}/{x.denominator}"
    digits = 0
    while (x * 10**digits).denominator != 1:
        digits += 1
    sign = "-" if x < 0 else ""
    whole, frac = divmod(abs(x.numerator) * 10**digits // x.denominator, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


# precedence: 1 additive, 2 multiplicative, 3 unary/atomic
def expr(e, prec: int = 1) -> str:
    if isinstance(e, Const):
        s, p = number(e.value), 3
    elif isinstance(e, Var):
        s, p = e.name, 3
    elif isinstance(e, Random):
        s = "rand" if e.bound is None else f"rand({e.bound})"
        p = 3
    elif isinstance(e, Neg):
        s, p = "-" + expr(e.operand, 3), 3
    elif isinstance(e, Add):
        s, p = f"{expr(e.left, 1)} + {expr(e.right, 2)}", 1
    elif isinstance(e, Sub):
        s, p = f"{expr(e.left, 1)} - {expr(e.right, 2)}", 1
    elif isinstance(e, MulConst):
        s, p = f"{number(e.factor)} * {expr(e.operand, 3)}", 2
    elif isinstance(e, Opaque):
        s, p = f"{expr(e.left, 2)} {e.op} {expr(e.right, 3)}", 2
    else:
        raise TypeError(f"not an expression: {e!r}")
    return f"({s})" if p < prec else s


def guard(g, prec: int = 1) -> str:
    if isinstance(g, Atom):
        s, p = f"{expr(g.lhs)} {g.op} {expr(g.rhs)}", 3
    elif isinstance(g, NonDet):
        s, p = "?", 3
    elif isinstance(g, Not):
        s, p = "not " + guard(g.operand, 3), 3
    elif isinstance(g, And):
        s, p = f"{guard(g.left, 2)} and {guard(g.right, 3)}", 2
    elif isinstance(g, Or):
        s, p = f"{guard(g.left, 1)} or {guard(g.right, 2)}", 1
    else:
        raise TypeError(f"not a guard: {g!r}")
    return f"({s})" if p < prec else s


def _loc(k: int) -> str:
    return f"(* l{k} *)"


def _block(stmts, depth: int, out: list[str]) -> None:
    pad = INDENT * depth
    for n, s in enumerate(stmts):
        sep = ";" if n < len(stmts) - 1 else ""
        if isinstance(s, Assign):
            out.append(f"{pad}{s.var} := {expr(s.expr)}{sep} {_loc(s.post)}")
        elif isinstance(s, Assert):
            out.append(f"{pad}assert {guard(s.guard)}{sep} {_loc(s.post)}")
        elif isinstance(s, Assume):
            out.append(f"{pad}assume {guard(s.guard)}{sep} {_loc(s.post)}")
        elif isinstance(s, If):
            out.append(f"{pad}if {guard(s.guard)} then {_loc(s.then_loc)}")
            _block(s.then_body, depth + 1, out)
            if s.else_body:
                out.append(f"{pad}else {_loc(s.else_loc)}")
                _block(s.else_body, depth + 1, out)
            else:
                out.append(f"{pad}{INDENT}(* else: l{s.else_loc} *)")
            out.append(f"{pad}fi{sep} {_loc(s.post)}")
        elif isinstance(s, While):
            out.append(f"{pad}while {guard(s.guard)} do {_loc(s.body_loc)}")
            _block(s.body, depth + 1, out)
            out.append(f"{pad}done{sep} {_loc(s.post)}")
        else:
            raise TypeError(f"not a statement: {s!r}")


def pretty(p: Program) -> str:
    out = [f"{d.kind} {', '.join(d.names)};" for d in p.decls]
    out[-1] += f" {_loc(Program.entry)}"
    _block(p.body, 0, out)
    return "\n".join(out) + "\n"
