"""Recursive-descent parser for polynomial expressions.

Grammar (whitespace-insensitive)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/")? unary)*        juxtaposition multiplies
    unary  := ("+" | "-") unary | power
    power  := atom (("^" | "**") INT)?
    atom   := NUMBER | NAME | "(" expr ")"

Division is only allowed by nonzero constants.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import List, Tuple

from .ring import Polynomial, VarOrder

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d*)?|\.\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class ParseError(ValueError):
    """Malformed polynomial text; carries a 1-based line and column."""

    def __init__(self, message: str, text: str = "", pos: int = 0, line: int = 1):
        self.message = message
        self.text = text
        self.pos = pos
        self.line = line
        self.column = pos + 1
        super().__init__(f"line {line}, column {self.column}: {message}")


def _tokenize(text: str, line: int) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos, line)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("num", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), start))
        else:
            tokens.append(("op", m.group(3), start))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, ring: VarOrder, line: int):
        self.text = text
        self.ring = ring
        self.line = line
        self.tokens = _tokenize(text, line)
        self.i = 0

    def error(self, message: str, tok=None):
        tok = tok or self.tokens[self.i]
        raise ParseError(message, self.text, tok[2], self.line)

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def accept(self, op: str) -> bool:
        tok = self.peek()
        if tok[0] == "op" and tok[1] == op:
            self.i += 1
            return True
        return False

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            self.error("empty expression")
        p = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while True:
            if self.accept("+"):
                p = p + self.term()
            elif self.accept("-"):
                p = p - self.term()
            else:
                return p

    def _starts_atom(self) -> bool:
        kind, val, _ = self.peek()
        return kind in ("num", "name") or (kind == "op" and val == "(")

    def term(self) -> Polynomial:
        p = self.unary()
        while True:
            if self.accept("*"):
                p = p * self.unary()
            elif self.peek()[0] == "op" and self.peek()[1] == "/":
                tok = self.take()
                d = self.unary()
                if not d.is_constant():
                    self.error("division by a non-constant expression", tok)
                if not d:
                    self.error("division by zero", tok)
                p = p / d.constant_value()
            elif self._starts_atom():
                p = p * self.power()
            else:
                return p

    def unary(self) -> Polynomial:
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.accept("^") or self.accept("**"):
            tok = self.take()
            if tok[0] != "num" or not tok[1].isdigit():
                self.error("exponent must be a nonnegative integer literal", tok)
            base = base ** int(tok[1])
        return base

    def atom(self) -> Polynomial:
        tok = self.take()
        kind, val, _ = tok
        if kind == "num":
            return self.ring.const(Fraction(val))
        if kind == "name":
            try:
                return self.ring.var(val)
            except KeyError:
                self.error(f"unknown variable {val!r}", tok)
        if kind == "op" and val == "(":
            p = self.expr()
            if not self.accept(")"):
                self.error("expected ')'")
            return p
        if kind == "end":
            self.error("unexpected end of expression", tok)
        self.error(f"unexpected {val!r}", tok)


def parse_polynomial(text: str, ring: VarOrder, line: int = 1) -> Polynomial:
    """Parse ``text`` into a polynomial over ``ring``."""
    return _Parser(text, ring, line).parse()
