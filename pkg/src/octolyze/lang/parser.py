"""Recursive-descent parser.

Grammar (``#`` and ``(* ... *)`` are comments)::

    program := decl+ [block]
    decl    := ("var" | "int") IDENT ("," IDENT)* ";"
    block   := stmt (";" stmt)* [";"]
    stmt    := IDENT ":=" expr
             | "if" guard "then" block ["else" block] "fi"
             | "while" guard "do" block "done"
             | "assert" guard | "assume" guard
    guard   := conj ("or" conj)*
    conj    := neg ("and" neg)*
    neg     := "not" neg | "?" | "(" guard ")" | expr CMP expr
    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/" | "%") unary)*
    unary   := "-" unary | NUMBER | IDENT | "rand" ["(" NUMBER ")"] | "(" expr ")"
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

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
    Expr,
    Guard,
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
)

KEYWORDS = {
    "var", "int", "if", "then", "else", "fi", "while", "do", "done",
    "assert", "assume", "and", "or", "not", "rand",
}  # fmt: skip

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*|\(\*.*?\*\))
  | (?P<num>\d+(?:\.\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>:=|<=|>=|!=|[<>=+\-*/%(),;?])
    """,
    re.VERBOSE | re.DOTALL,
)


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass
class Token:
    kind: str  # "num", "ident", "kw", "op", "eof"
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        if text.startswith("(*", pos) and text.find("*)", pos + 2) < 0:
            raise ParseError("unterminated comment", line, pos - line_start + 1)
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            tok_text = m.group()
            if kind == "ident" and tok_text in KEYWORDS:
                kind = "kw"
            toks.append(Token(kind, tok_text, line, pos - line_start + 1))
        chunk = m.group()
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    toks.append(Token("eof", "", line, pos - line_start + 1))
    return toks


def _constant(e) -> Fraction | None:
    # a literal, possibly under unary minus signs
    sign = 1
    while isinstance(e, Neg):
        e, sign = e.operand, -sign
    return sign * e.value if isinstance(e, Const) else None


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.pos = 0
        self.declared: set[str] = set()

    # -- token helpers

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("kw", "op") and t.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        t = self.tok
        self.pos += 1
        return t

    def fail(self, message: str):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(f"{message}, found {found}", t.line, t.col)

    # -- program structure

    def program(self) -> Program:
        decls = []
        while self.at("var") or self.at("int"):
            decls.append(self.decl())
        if not decls:
            self.fail("expected a declaration ('var' or 'int')")
        body = () if self.tok.kind == "eof" else self.block()
        if self.tok.kind != "eof":
            self.fail("expected ';' or end of input")
        return label(Program(tuple(decls), body))

    def decl(self) -> Decl:
        kind = self.tok.text
        self.pos += 1
        names = [self.new_name()]
        while self.accept(","):
            names.append(self.new_name())
        self.expect(";")
        return Decl(kind, tuple(names))

    def new_name(self) -> str:
        t = self.tok
        if t.kind != "ident":
            self.fail("expected a variable name")
        if t.text in self.declared:
            raise ParseError(f"variable {t.text!r} declared twice", t.line, t.col)
        self.declared.add(t.text)
        self.pos += 1
        return t.text

    def block(self) -> tuple:
        stmts = [self.stmt()]
        while self.accept(";"):
            if self.tok.kind == "eof" or any(self.at(k) for k in ("fi", "else", "done")):
                break
            stmts.append(self.stmt())
        return tuple(stmts)

    def stmt(self):
        t = self.tok
        if self.accept("if"):
            g = self.guard()
            self.expect("then")
            then_body = self.block()
            else_body = self.block() if self.accept("else") else ()
            self.expect("fi")
            return If(g, then_body, else_body)
        if self.accept("while"):
            g = self.guard()
            self.expect("do")
            body = self.block()
            self.expect("done")
            return While(g, body)
        if self.accept("assert"):
            return Assert(self.guard())
        if self.accept("assume"):
            return Assume(self.guard())
        if t.kind == "ident":
            name = self.use_name()
            self.expect(":=")
            return Assign(name, self.expr())
        self.fail("expected a statement")

    def use_name(self) -> str:
        t = self.tok
        if t.text not in self.declared:
            raise ParseError(f"undeclared variable {t.text!r}", t.line, t.col)
        self.pos += 1
        return t.text

    # -- guards

    def guard(self) -> Guard:
        g = self.conj()
        while self.accept("or"):
            g = Or(g, self.conj())
        return g

    def conj(self) -> Guard:
        g = self.neg()
        while self.accept("and"):
            g = And(g, self.neg())
        return g

    def neg(self) -> Guard:
        if self.accept("not"):
            return Not(self.neg())
        if self.accept("?"):
            return NonDet()
        if self.at("("):
            # either a parenthesised guard or an atom whose lhs starts with "("
            save = self.pos
            self.pos += 1
            try:
                g = self.guard()
                self.expect(")")
            except ParseError:
                g = None
            if g is not None and not (self.tok.kind == "op" and self.tok.text in COMPARISONS + ("+", "-", "*", "/", "%")):
                return g
            self.pos = save
        return self.atom()

    def atom(self) -> Atom:
        lhs = self.expr()
        t = self.tok
        if not (t.kind == "op" and t.text in COMPARISONS):
            self.fail("expected a comparison operator")
        self.pos += 1
        return Atom(lhs, t.text, self.expr())

    # -- expressions

    def expr(self) -> Expr:
        e = self.term()
        while True:
            if self.accept("+"):
                e = Add(e, self.term())
            elif self.accept("-"):
                e = Sub(e, self.term())
            else:
                return e

    def term(self) -> Expr:
        e = self.unary()
        while True:
            if self.accept("*"):
                r = self.unary()
                if _constant(e) is not None:
                    e = MulConst(_constant(e), r)
                elif _constant(r) is not None:
                    e = MulConst(_constant(r), e)
                else:
                    e = Opaque("*", e, r)
            elif self.at("/") or self.at("%"):
                op = self.tok.text
                self.pos += 1
                e = Opaque(op, e, self.unary())
            else:
                return e

    def unary(self) -> Expr:
        t = self.tok
        if self.accept("-"):
            return Neg(self.unary())
        if t.kind == "num":
            self.pos += 1
            return Const(Fraction(t.text))
        if self.accept("rand"):
            if self.accept("("):
                n = self.tok
                if n.kind != "num" or "." in n.text or int(n.text) == 0:
                    self.fail("expected a positive integer")
                self.pos += 1
                self.expect(")")
                return Random(int(n.text))
            return Random()
        if t.kind == "ident":
            return Var(self.use_name())
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        self.fail("expected an expression")


def parse(text: str) -> Program:
    """Parse source text into a labelled :class:`Program`."""
    return _Parser(text).program()


def parse_guard(text: str, variables) -> Guard:
    p = _Parser(text)
    p.declared = set(variables)
    g = p.guard()
    if p.tok.kind != "eof":
        p.fail("unexpected trailing input")
    return g


def parse_expr(text: str, variables) -> Expr:
    p = _Parser(text)
    p.declared = set(variables)
    e = p.expr()
    if p.tok.kind != "eof":
        p.fail("unexpected trailing input")
    return e
