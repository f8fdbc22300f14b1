"""Plain-ASCII infix parser for human-authored expressions.

Stricter than the LaTeX reader: no juxtaposition, and function application
requires parentheses ("sin x" is an error, "sin(x)" is not).
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError
from .latex import MAX_INPUT_BYTES
from .nodes import (
    MAX_DEPTH,
    MAX_NODES,
    Binary,
    Constant,
    Expr,
    Function,
    Number,
    SourceSpan,
    Unary,
    Variable,
    depth,
)

_FUNCTIONS = {
    "sin", "cos", "tan", "cot", "sec", "csc",
    "asin", "acos", "atan", "ln", "log", "log10", "exp", "sqrt", "abs",
}

_TOKEN_RE = re.compile(
    r"(?P<num>\d+\.\d+|\d+|\.\d+)|(?P<name>[a-zA-Z][a-zA-Z0-9_]*)|(?P<sym>[-+*/^(),])"
)


def _tokenize(s: str):
    toks = []
    pos = 0
    while pos < len(s):
        if s[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(s, pos)
        if not m:
            raise ParseError(f"unexpected character {s[pos]!r}", SourceSpan(pos, pos + 1))
        kind = m.lastgroup
        toks.append((kind, m.group(), m.start(), m.end()))
        pos = m.end()
    toks.append(("eof", "", len(s), len(s)))
    return toks


class _InfixParser:
    def __init__(self, s: str):
        if len(s.encode("utf-8")) > MAX_INPUT_BYTES:
            raise ParseError("input too long", SourceSpan(0, len(s)))
        self.toks = _tokenize(s)
        self.pos = 0
        self.nodes = 0
        self.nesting = 0

    def peek(self):
        return self.toks[self.pos]

    def next(self):
        t = self.toks[self.pos]
        if t[0] != "eof":
            self.pos += 1
        return t

    def make(self, ctor, *args) -> Expr:
        self.nodes += 1
        if self.nodes > MAX_NODES:
            raise ParseError("expression too large", SourceSpan(*self.peek()[2:4]))
        return ctor(*args)

    def parse(self) -> Expr:
        e = self.sum_()
        t = self.peek()
        if t[0] != "eof":
            raise ParseError("trailing input", SourceSpan(t[2], t[3]))
        if depth(e) > MAX_DEPTH:
            raise ParseError("expression too deep", SourceSpan(0, self.toks[-1][3]))
        return e

    def sum_(self) -> Expr:
        # bracketed groups and signed/power chains recurse through here or
        # through signed/signed_power; guard stack depth at parse time
        self.nesting += 1
        if self.nesting > MAX_DEPTH:
            raise ParseError("expression too deep", SourceSpan(*self.peek()[2:4]))
        try:
            return self._sum_body()
        finally:
            self.nesting -= 1

    def _sum_body(self) -> Expr:
        left = self.product()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "sym":
            op = self.next()[1]
            left = self.make(Binary, "add" if op == "+" else "sub", left, self.product())
        return left

    def product(self) -> Expr:
        left = self.signed()
        while self.peek()[0] == "sym" and self.peek()[1] in ("*", "/"):
            op = self.next()[1]
            left = self.make(Binary, "mul" if op == "*" else "div", left, self.signed())
        return left

    def signed(self) -> Expr:
        t = self.peek()
        if t[0] == "sym" and t[1] in ("-", "+"):
            self.nesting += 1
            if self.nesting > MAX_DEPTH:
                raise ParseError("expression too deep", SourceSpan(*t[2:4]))
            try:
                self.next()
                if t[1] == "-":
                    return self.make(Unary, "neg", self.signed())
                return self.signed()
            finally:
                self.nesting -= 1
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        t = self.peek()
        if t[0] == "sym" and t[1] == "^":
            self.next()
            # right-associative; allow a signed exponent: x^-2
            exp = self.signed_power()
            return self.make(Binary, "pow", base, exp)
        return base

    def signed_power(self) -> Expr:
        self.nesting += 1
        if self.nesting > MAX_DEPTH:
            raise ParseError("expression too deep", SourceSpan(*self.peek()[2:4]))
        try:
            t = self.peek()
            if t[0] == "sym" and t[1] == "-":
                self.next()
                return self.make(Unary, "neg", self.signed_power())
            return self.power()
        finally:
            self.nesting -= 1

    def atom(self) -> Expr:
        kind, text, start, end = self.peek()
        if kind == "num":
            self.next()
            return self.make(Number, Fraction(text))
        if kind == "name":
            self.next()
            if text in _FUNCTIONS:
                t = self.peek()
                if not (t[0] == "sym" and t[1] == "("):
                    raise ParseError(
                        f"function {text!r} requires parenthesized argument",
                        SourceSpan(start, end),
                    )
                self.next()
                arg = self.sum_()
                self._expect(")")
                name = "log10" if text == "log" else text
                return self.make(Function, name, arg)
            if text == "pi":
                return self.make(Constant, "pi")
            if text == "e":
                return self.make(Constant, "euler")
            return self.make(Variable, text)
        if kind == "sym" and text == "(":
            self.next()
            e = self.sum_()
            self._expect(")")
            return e
        raise ParseError("expected an expression", SourceSpan(start, end))

    def _expect(self, sym: str):
        t = self.peek()
        if t[0] != "sym" or t[1] != sym:
            raise ParseError(f"expected {sym!r}", SourceSpan(t[2], t[3]))
        self.next()


def parse_infix(s: str) -> Expr:
    return _InfixParser(s).parse()
