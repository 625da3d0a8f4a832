"""The analysed toy language: AST, parser and pretty printer."""

from .ast import (
    COMPARISONS,
    Add,
    And,
    Assert,
    Assign,
    Assume,
    Atom,
    Const,
    Decl,
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
    label,
    locations,
    walk,
)
from .parser import ParseError, parse, parse_expr, parse_guard
from .pretty import pretty

__all__ = [
    "COMPARISONS",
    "Add",
    "And",
    "Assert",
    "Assign",
    "Assume",
    "Atom",
    "Const",
    "Decl",
    "If",
    "MulConst",
    "Neg",
    "NonDet",
    "Not",
    "Opaque",
    "Or",
    "Program",
    "Random",
    "Sub",
    "Var",
    "While",
    "label",
    "locations",
    "walk",
    "ParseError",
    "parse",
    "parse_expr",
    "parse_guard",
    "pretty",
]
