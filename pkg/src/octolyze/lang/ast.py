"""AST of the analysed language.

Nodes are frozen dataclasses so programs compare structurally.  Location
labels live on the nodes that introduce them:

* the program entry is ``l0``;
* every statement carries ``post``, the location right after it;
* ``If`` carries ``then_loc``/``else_loc`` (start of each branch) and
  ``While`` carries ``body_loc`` (start of the body).

The location before a statement is the ``post`` of the previous statement
or the start location of its block.  :func:`label` numbers everything in
source order.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union


# -- expressions --------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class MulConst:
    factor: Fraction
    operand: "Expr"


@dataclass(frozen=True)
class Random:
    """Unknown value; ``rand(n)`` ranges over ``0 .. n-1``, plain ``rand`` is unbounded."""

    bound: int | None = None


@dataclass(frozen=True)
class Opaque:
    """Non-linear operation (``*`` of two non-constants, ``/``, ``%``)."""

    op: str
    left: "Expr"
    right: "Expr"


Expr = Union[Const, Var, Neg, Add, Sub, MulConst, Random, Opaque]


# -- guards -------------------------------------------------------------------

COMPARISONS = ("<=", "<", ">=", ">", "=", "!=")


@dataclass(frozen=True)
class Atom:
    lhs: Expr
    op: str
    rhs: Expr


@dataclass(frozen=True)
class And:
    left: "Guard"
    right: "Guard"


@dataclass(frozen=True)
class Or:
    left: "Guard"
    right: "Guard"


@dataclass(frozen=True)
class Not:
    operand: "Guard"


@dataclass(frozen=True)
class NonDet:
    """The ``?`` guard: either branch may be taken."""


Guard = Union[Atom, And, Or, Not, NonDet]


# -- statements ---------------------------------------------------------------


@dataclass(frozen=True)
class Assign:
    var: str
    expr: Expr
    post: int = -1


@dataclass(frozen=True)
class If:
    guard: Guard
    then_body: tuple["Stmt", ...]
    else_body: tuple["Stmt", ...]
    then_loc: int = -1
    else_loc: int = -1
    post: int = -1


@dataclass(frozen=True)
class While:
    guard: Guard
    body: tuple["Stmt", ...]
    body_loc: int = -1
    post: int = -1


@dataclass(frozen=True)
class Assert:
    guard: Guard
    post: int = -1


@dataclass(frozen=True)
class Assume:
    guard: Guard
    post: int = -1


Stmt = Union[Assign, If, While, Assert, Assume]


@dataclass(frozen=True)
class Decl:
    kind: str  # "var" (rational) or "int"
    names: tuple[str, ...]


@dataclass(frozen=True)
class Program:
    decls: tuple[Decl, ...]
    body: tuple[Stmt, ...]

    entry = 0

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(n for d in self.decls for n in d.names)

    @property
    def integer_variables(self) -> frozenset[str]:
        return frozenset(n for d in self.decls if d.kind == "int" for n in d.names)

    @property
    def n_locations(self) -> int:
        return 1 + sum(_locations_introduced(s) for s in walk(self.body))


def _locations_introduced(s: Stmt) -> int:
    if isinstance(s, If):
        return 3
    if isinstance(s, While):
        return 2
    return 1


def walk(body: tuple[Stmt, ...]) -> Iterator[Stmt]:
    """All statements, outer before inner, in source order."""
    for s in body:
        yield s
        if isinstance(s, If):
            yield from walk(s.then_body)
            yield from walk(s.else_body)
        elif isinstance(s, While):
            yield from walk(s.body)


def label(program: Program) -> Program:
    """Return a copy with all locations numbered in source order."""
    counter = iter(range(1, 1 << 30))

    def block(stmts):
        return tuple(stmt(s) for s in stmts)

    def stmt(s):
        if isinstance(s, If):
            then_loc = next(counter)
            then_body = block(s.then_body)
            else_loc = next(counter)
            else_body = block(s.else_body)
            return dataclasses.replace(
                s, then_body=then_body, else_body=else_body, then_loc=then_loc, else_loc=else_loc, post=next(counter)
            )
        if isinstance(s, While):
            body_loc = next(counter)
            body = block(s.body)
            return dataclasses.replace(s, body=body, body_loc=body_loc, post=next(counter))
        return dataclasses.replace(s, post=next(counter))

    return dataclasses.replace(program, body=block(program.body))


def locations(program: Program) -> Iterator[tuple[Stmt, int]]:
    """Yield ``(statement, location before it)`` pairs in source order."""

    def block(stmts, start):
        pre = start
        for s in stmts:
            yield s, pre
            if isinstance(s, If):
                yield from block(s.then_body, s.then_loc)
                yield from block(s.else_body, s.else_loc)
            elif isinstance(s, While):
                yield from block(s.body, s.body_loc)
            pre = s.post

    yield from block(program.body, Program.entry)


def block_end(stmts: tuple[Stmt, ...], start: int) -> int:
    """Location at the end of a block that starts at ``start``."""
    return stmts[-1].post if stmts else start
