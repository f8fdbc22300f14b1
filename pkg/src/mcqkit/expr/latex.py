"""LaTeX subset parser and printer.

The grammar is deliberately small and closed: the macros listed in
``_FUNCTION_MACROS`` plus \\frac, \\sqrt, \\pi, \\cdot, \\left / \\right
fences, ^, _, juxtaposition multiplication, and "/" as inline division.
Anything else is a hard ParseError -- silently skipping unknown macros is
exactly how semantic distortion sneaks into generated content.

Conventions:
  * ``e`` is Euler's number, never a variable.
  * \\frac{p}{q} with integer literal p, q (q != 0) is a rational literal.
  * \\log is base 10, \\ln natural.
  * \\frac{d}{dx} prefixes a derivative whose body extends over the
    following product term.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError
from .nodes import (
    MAX_DEPTH,
    MAX_NODES,
    Binary,
    Constant,
    Derivative,
    Expr,
    Function,
    Number,
    SourceSpan,
    Unary,
    Variable,
    depth,
    node_count,
)

MAX_INPUT_BYTES = 64 * 1024

_FUNCTION_MACROS = {
    "sin": "sin", "cos": "cos", "tan": "tan",
    "cot": "cot", "sec": "sec", "csc": "csc",
    "arcsin": "asin", "arccos": "acos", "arctan": "atan",
    "ln": "ln", "log": "log10", "exp": "exp",
}


@dataclass(frozen=True)
class _Tok:
    kind: str  # num ident cmd sym eof
    text: str
    start: int
    end: int

    @property
    def span(self) -> SourceSpan:
        return SourceSpan(self.start, self.end)


def _tokenize(s: str) -> list[_Tok]:
    toks: list[_Tok] = []
    i, n = 0, len(s)
    while i < n:
        c = s[i]
        if c.isspace():
            i += 1
            continue
        if c == "\\":
            j = i + 1
            while j < n and s[j].isalpha():
                j += 1
            if j == i + 1:
                raise ParseError("stray backslash", SourceSpan(i, i + 1))
            toks.append(_Tok("cmd", s[i + 1:j], i, j))
            i = j
        elif c.isdigit() or (c == "." and i + 1 < n and s[i + 1].isdigit()):
            j = i
            seen_dot = False
            while j < n and (s[j].isdigit() or (s[j] == "." and not seen_dot)):
                if s[j] == ".":
                    seen_dot = True
                j += 1
            toks.append(_Tok("num", s[i:j], i, j))
            i = j
        elif c.isalpha():
            toks.append(_Tok("ident", c, i, i + 1))
            i += 1
        elif c in "{}()[]^_+-*/|,=":
            toks.append(_Tok("sym", c, i, i + 1))
            i += 1
        else:
            raise ParseError(f"unexpected character {c!r}", SourceSpan(i, i + 1))
    toks.append(_Tok("eof", "", n, n))
    return toks


class _LatexParser:
    def __init__(self, s: str):
        if len(s.encode("utf-8")) > MAX_INPUT_BYTES:
            raise ParseError("input too long", SourceSpan(0, len(s)))
        self.src = s
        self.toks = _tokenize(s)
        self.pos = 0
        self.nodes = 0
        self.nesting = 0

    # -- token plumbing ----------------------------------------------------
    def peek(self, ahead: int = 0) -> _Tok:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def next(self) -> _Tok:
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def expect(self, kind: str, text: str) -> _Tok:
        t = self.peek()
        if t.kind != kind or t.text != text:
            raise ParseError(f"expected {text!r}", t.span)
        return self.next()

    def _count(self) -> None:
        self.nodes += 1
        if self.nodes > MAX_NODES:
            raise ParseError("expression too large", self.peek().span)

    def make(self, ctor, *args) -> Expr:
        self._count()
        return ctor(*args)

    # -- grammar -----------------------------------------------------------
    def parse(self) -> Expr:
        e = self.sum_()
        t = self.peek()
        if t.kind != "eof":
            raise ParseError("trailing input", t.span)
        if depth(e) > MAX_DEPTH:
            raise ParseError("expression too deep", SourceSpan(0, len(self.src)))
        return e

    def sum_(self) -> Expr:
        # every parenthesized or braced group recurses through here, so
        # this bounds parse-time recursion as well as result depth
        self.nesting += 1
        if self.nesting > MAX_DEPTH:
            raise ParseError("expression too deep", self.peek().span)
        try:
            return self._sum_body()
        finally:
            self.nesting -= 1

    def _sum_body(self) -> Expr:
        left = self.product()
        while True:
            t = self.peek()
            if t.kind == "sym" and t.text in "+-":
                self.next()
                right = self.product()
                left = self.make(Binary, "add" if t.text == "+" else "sub", left, right)
            else:
                return left

    def product(self) -> Expr:
        left = self.signed()
        while True:
            t = self.peek()
            if t.kind == "sym" and t.text in "*/":
                self.next()
                right = self.signed()
                left = self.make(Binary, "mul" if t.text == "*" else "div", left, right)
            elif t.kind == "cmd" and t.text == "cdot":
                self.next()
                left = self.make(Binary, "mul", left, self.signed())
            elif self._starts_factor(t):
                left = self.make(Binary, "mul", left, self.power())
            else:
                return left

    def _starts_factor(self, t: _Tok) -> bool:
        if t.kind in ("num", "ident"):
            return True
        if t.kind == "sym" and t.text in "({":
            return True
        if t.kind == "cmd":
            return t.text in _FUNCTION_MACROS or t.text in ("frac", "sqrt", "pi", "left")
        return False

    def signed(self) -> Expr:
        t = self.peek()
        if t.kind == "sym" and t.text in "+-":
            # guard sign chains only; the plain fall-through to power()
            # adds no nesting of its own
            self.nesting += 1
            if self.nesting > MAX_DEPTH:
                raise ParseError("expression too deep", t.span)
            try:
                self.next()
                if t.text == "-":
                    return self.make(Unary, "neg", self.signed())
                return self.signed()
            finally:
                self.nesting -= 1
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        t = self.peek()
        if t.kind == "sym" and t.text == "^":
            self.next()
            exp = self.exponent()
            return self.make(Binary, "pow", base, exp)
        return base

    def exponent(self) -> Expr:
        # Braced exponents hold a full expression; unbraced ones a single
        # (optionally negated) atom, right-associatively chained.
        self.nesting += 1
        if self.nesting > MAX_DEPTH:
            raise ParseError("expression too deep", self.peek().span)
        try:
            return self._exponent_body()
        finally:
            self.nesting -= 1

    def _exponent_body(self) -> Expr:
        t = self.peek()
        if t.kind == "sym" and t.text == "{":
            self.next()
            e = self.sum_()
            self.expect("sym", "}")
            nxt = self.peek()
            if nxt.kind == "sym" and nxt.text == "^":
                self.next()
                return self.make(Binary, "pow", e, self.exponent())
            return e
        if t.kind == "sym" and t.text == "-":
            self.next()
            return self.make(Unary, "neg", self.exponent())
        return self.power()

    def group(self) -> Expr:
        self.expect("sym", "{")
        e = self.sum_()
        self.expect("sym", "}")
        return e

    def atom(self) -> Expr:
        t = self.peek()
        if t.kind == "num":
            self.next()
            return self.make(Number, _parse_number(t))
        if t.kind == "ident":
            self.next()
            name = t.text
            nxt = self.peek()
            if nxt.kind == "sym" and nxt.text == "_":
                self.next()
                name += "_" + self._subscript()
            if name == "e":
                return self.make(Constant, "euler")
            return self.make(Variable, name)
        if t.kind == "sym" and t.text == "(":
            self.next()
            e = self.sum_()
            self.expect("sym", ")")
            return e
        if t.kind == "sym" and t.text == "{":
            return self.group()
        if t.kind == "cmd":
            return self._command(t)
        raise ParseError("expected an expression", t.span)

    def _subscript(self) -> str:
        t = self.peek()
        if t.kind in ("num", "ident"):
            self.next()
            return t.text
        if t.kind == "sym" and t.text == "{":
            self.next()
            parts = []
            while True:
                u = self.peek()
                if u.kind == "sym" and u.text == "}":
                    self.next()
                    break
                if u.kind not in ("num", "ident"):
                    raise ParseError("bad subscript", u.span)
                self.next()
                parts.append(u.text)
            if not parts:
                raise ParseError("empty subscript", t.span)
            return "".join(parts)
        raise ParseError("bad subscript", t.span)

    def _command(self, t: _Tok) -> Expr:
        name = t.text
        if name == "pi":
            self.next()
            return self.make(Constant, "pi")
        if name in _FUNCTION_MACROS:
            self.next()
            return self.make(Function, _FUNCTION_MACROS[name], self._func_arg())
        if name == "sqrt":
            self.next()
            nxt = self.peek()
            if nxt.kind == "sym" and nxt.text == "[":
                self.next()
                deg = self.peek()
                if deg.kind != "num" or "." in deg.text:
                    raise ParseError("root degree must be an integer", deg.span)
                self.next()
                self.expect("sym", "]")
                n = int(deg.text)
                if n == 0:
                    raise ParseError("zeroth root", deg.span)
                arg = self.group()
                return self.make(Binary, "pow", arg, Number(Fraction(1, n)))
            return self.make(Function, "sqrt", self.group())
        if name == "frac":
            return self._frac(t)
        if name == "left":
            return self._fenced()
        raise ParseError(f"unknown macro \\{name}", t.span)

    def _func_arg(self) -> Expr:
        t = self.peek()
        if t.kind == "sym" and t.text == "(":
            self.next()
            e = self.sum_()
            self.expect("sym", ")")
            return e
        if t.kind == "sym" and t.text == "{":
            return self.group()
        if t.kind == "cmd" and t.text == "left":
            return self._fenced()
        if t.kind == "sym":
            raise ParseError("function needs an argument", t.span)
        # bare operand: one factor including its exponent, e.g. \sin x^2
        return self.power()

    def _fenced(self) -> Expr:
        self.expect("cmd", "left")
        opener = self.next()
        if opener.kind == "sym" and opener.text == "(":
            e = self.sum_()
            self.expect("cmd", "right")
            self.expect("sym", ")")
            return e
        if opener.kind == "sym" and opener.text == "|":
            e = self.sum_()
            self.expect("cmd", "right")
            self.expect("sym", "|")
            return self.make(Function, "abs", e)
        raise ParseError("unsupported \\left fence", opener.span)

    def _frac(self, start: _Tok) -> Expr:
        self.next()
        # \frac{d}{d<var>} introduces a derivative over the next product term
        save = self.pos
        var = self._try_derivative_head()
        if var is not None:
            # binds like a prefix function: the next (signed) factor
            body = self.signed()
            return self.make(Derivative, var, body)
        self.pos = save
        numer = self.group()
        denom = self.group()
        if (
            isinstance(numer, Number) and numer.value.denominator == 1
            and isinstance(denom, Number) and denom.value.denominator == 1
            and denom.value != 0
        ):
            # integer-over-integer \frac is a rational literal
            return self.make(Number, Fraction(int(numer.value), int(denom.value)))
        return self.make(Binary, "div", numer, denom)

    def _try_derivative_head(self) -> str | None:
        toks = self.toks
        p = self.pos
        def sym(k, txt):
            return toks[k].kind == "sym" and toks[k].text == txt
        if not (sym(p, "{") and toks[p + 1].kind == "ident" and toks[p + 1].text == "d"
                and sym(p + 2, "}") and sym(p + 3, "{")
                and toks[p + 4].kind == "ident" and toks[p + 4].text == "d"
                and toks[p + 5].kind == "ident"):
            return None
        name = toks[p + 5].text
        k = p + 6
        if toks[k].kind == "sym" and toks[k].text == "_":
            if toks[k + 1].kind in ("num", "ident"):
                name += "_" + toks[k + 1].text
                k += 2
            else:
                return None
        if not sym(k, "}"):
            return None
        self.pos = k + 1
        return name


def _parse_number(t: _Tok) -> Fraction:
    text = t.text
    if text.endswith("."):
        raise ParseError("malformed number", t.span)
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError("malformed number", t.span) from None


def parse_latex(s: str) -> Expr:
    return _LatexParser(s).parse()


# -- printing ----------------------------------------------------------------

_FUNC_TO_MACRO = {v: k for k, v in _FUNCTION_MACROS.items()}

# precedence for parenthesization decisions
_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _is_int_div(e: Expr) -> bool:
    # integer-over-integer division renders inline ("2/3") because a
    # \frac of two integer literals re-parses as a rational literal
    return (
        isinstance(e, Binary) and e.op == "div"
        and isinstance(e.left, Number) and e.left.value.denominator == 1
        and e.left.value >= 0
        and isinstance(e.right, Number) and e.right.value.denominator == 1
        and e.right.value >= 0
    )


def _prec(e: Expr) -> int:
    if isinstance(e, Binary):
        if e.op in ("add", "sub"):
            return _PREC_ADD
        if e.op == "mul":
            return _PREC_MUL
        if e.op == "div":
            return _PREC_MUL if _is_int_div(e) else _PREC_ATOM  # \frac self-fences
        return _PREC_POW
    if isinstance(e, Unary):
        return _PREC_NEG
    if isinstance(e, Number):
        return _PREC_ATOM if e.value >= 0 and e.value.denominator == 1 else _PREC_NEG
    if isinstance(e, Derivative):
        return _PREC_MUL
    return _PREC_ATOM


def _parens(s: str) -> str:
    return "\\left(" + s + "\\right)"


def _var_latex(name: str) -> str:
    if "_" in name:
        head, rest = name.split("_", 1)
        return f"{head}_{{{rest}}}"
    return name


def to_latex(e: Expr) -> str:
    """Render with minimal parenthesization; re-parsing yields ``e`` back."""
    if isinstance(e, Number):
        v = e.value
        if v.denominator == 1:
            return str(v)
        if v < 0:
            return "-\\frac{%d}{%d}" % (-v.numerator, v.denominator)
        return "\\frac{%d}{%d}" % (v.numerator, v.denominator)
    if isinstance(e, Constant):
        return "\\pi" if e.name == "pi" else "e"
    if isinstance(e, Variable):
        return _var_latex(e.name)
    if isinstance(e, Unary):
        inner = to_latex(e.arg)
        if _prec(e.arg) <= _PREC_MUL and not isinstance(e.arg, Derivative):
            inner = _parens(inner)
        return "-" + inner
    if isinstance(e, Binary):
        return _binary_latex(e)
    if isinstance(e, Function):
        if e.name == "sqrt":
            return "\\sqrt{%s}" % to_latex(e.arg)
        if e.name == "abs":
            return "\\left|%s\\right|" % to_latex(e.arg)
        return "\\%s\\left(%s\\right)" % (_FUNC_TO_MACRO[e.name], to_latex(e.arg))
    if isinstance(e, Derivative):
        body = to_latex(e.body)
        # the derivative binds one factor; fence anything looser than pow
        if _prec(e.body) < _PREC_POW:
            body = _parens(body)
        return "\\frac{d}{d%s} %s" % (_var_latex(e.var), body)
    raise TypeError(f"not an Expr: {e!r}")


def _binary_latex(e: Binary) -> str:
    if e.op == "div":
        if _is_int_div(e):
            return "%s/%s" % (to_latex(e.left), to_latex(e.right))
        return "\\frac{%s}{%s}" % (to_latex(e.left), to_latex(e.right))
    left, right = to_latex(e.left), to_latex(e.right)
    if e.op in ("add", "sub"):
        if _prec(e.right) <= _PREC_ADD or (e.op == "sub" and isinstance(e.right, Unary)):
            right = _parens(right)
        if isinstance(e.right, (Unary, Number)) and right.startswith("-"):
            right = _parens(right)
        return f"{left}{'+' if e.op == 'add' else '-'}{right}"
    if e.op == "mul":
        if _prec(e.left) < _PREC_MUL:
            left = _parens(left)
        # left-associative: a right operand at mul precedence (nested mul,
        # inline division, derivative factor) must keep its own grouping
        if _prec(e.right) <= _PREC_MUL:
            right = _parens(right)
        return f"{left}\\cdot {right}"
    # pow: fence every non-atomic base so "^" attaches to the whole of it
    if _prec(e.left) < _PREC_ATOM or isinstance(e.left, Binary):
        left = _parens(left)
    return f"{left}^{{{right}}}"
