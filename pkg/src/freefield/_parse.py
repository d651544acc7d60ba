"""Small Pratt parser shared by the text encodings of RingElem, AElement and SymRat.

Grammar (whitespace ignored)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary | <implicit product>)*
    unary  := '-' unary | '+' unary | power
    power  := atom ('^' exponent)?
    atom   := INT | NAME | '(' expr ')'
    exponent := ['-'] INT | '(' ['-'] INT ')'

Implicit products are accepted between an integer and a following name or
parenthesis (``2i``, ``3(v+1)``). Atoms are resolved by a caller-supplied
function so every value type reuses the same parser.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Callable

__all__ = ["ParseError", "parse_expression"]


class ParseError(ValueError):
    """Syntax error with a character position."""

    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.message = message
        self.text = text
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


@dataclass(frozen=True)
class _Tok:
    kind: str  # 'int', 'name', 'op', 'end'
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            toks.append(_Tok("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            toks.append(_Tok("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", text, m.start(3))
            toks.append(_Tok("op", ch, m.start(3)))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, atom: Callable[[str], Any], number: Callable[[int], Any]):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.atom = atom
        self.number = number

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, op: str) -> None:
        t = self.next()
        if t.kind != "op" or t.text != op:
            raise ParseError(f"expected {op!r}", self.text, t.pos)

    def fail(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok.pos)

    def expr(self):
        val = self.term()
        while True:
            t = self.peek()
            if t.kind == "op" and t.text in "+-":
                self.next()
                rhs = self.term()
                val = val + rhs if t.text == "+" else val - rhs
            else:
                return val

    def term(self):
        val = self.unary()
        while True:
            t = self.peek()
            if t.kind == "op" and t.text in "*/":
                self.next()
                rhs = self.unary()
                if t.text == "*":
                    val = val * rhs
                else:
                    try:
                        val = val / rhs
                    except ZeroDivisionError:
                        self.fail("division by zero", t)
            elif t.kind in ("name", "int") or (t.kind == "op" and t.text == "("):
                val = val * self.unary()
            else:
                return val

    def unary(self):
        t = self.peek()
        if t.kind == "op" and t.text == "-":
            self.next()
            return -self.unary()
        if t.kind == "op" and t.text == "+":
            self.next()
            return self.unary()
        return self.power()

    def power(self):
        base = self.primary()
        t = self.peek()
        if t.kind == "op" and t.text == "^":
            self.next()
            e = self.exponent()
            try:
                return base ** e
            except ZeroDivisionError:
                self.fail("zero to a negative power", t)
        return base

    def exponent(self) -> int:
        t = self.peek()
        paren = t.kind == "op" and t.text == "("
        if paren:
            self.next()
        sign = 1
        t = self.peek()
        if t.kind == "op" and t.text == "-":
            self.next()
            sign = -1
        t = self.next()
        if t.kind != "int":
            self.fail("expected integer exponent", t)
        if paren:
            self.expect(")")
        return sign * int(t.text)

    def primary(self):
        t = self.next()
        if t.kind == "int":
            return self.number(int(t.text))
        if t.kind == "name":
            try:
                return self.atom(t.text)
            except KeyError:
                self.fail(f"unknown symbol {t.text!r}", t)
        if t.kind == "op" and t.text == "(":
            val = self.expr()
            self.expect(")")
            return val
        self.fail("unexpected end of input" if t.kind == "end" else f"unexpected {t.text!r}", t)


def parse_expression(text: str, atom: Callable[[str], Any], number: Callable[[int], Any]):
    """Parse ``text`` with the given atom resolver (raise KeyError for unknown names)."""
    p = _Parser(text, atom, number)
    if p.peek().kind == "end":
        p.fail("empty expression")
    val = p.expr()
    if p.peek().kind != "end":
        p.fail(f"unexpected {p.peek().text!r}")
    return val
