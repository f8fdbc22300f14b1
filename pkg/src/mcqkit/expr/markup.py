"""Content-oriented XML markup for expressions.

The dialect (documented in docs/markup.md) is a small content-MathML
subset: one element per AST node, no presentation information. The writer
is canonical -- no whitespace between elements -- so writing, reading back,
and writing again is byte-stable.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from fractions import Fraction

from .nodes import (
    Binary,
    Constant,
    Derivative,
    Expr,
    Function,
    Number,
    Unary,
    Variable,
)

_BINOP_TAGS = {"add": "plus", "sub": "minus", "mul": "times", "div": "divide", "pow": "power"}
_TAG_BINOPS = {v: k for k, v in _BINOP_TAGS.items()}

_FUNC_TAGS = {
    "sin": "sin", "cos": "cos", "tan": "tan", "cot": "cot", "sec": "sec", "csc": "csc",
    "asin": "arcsin", "acos": "arccos", "atan": "arctan",
    "ln": "ln", "log10": "log", "exp": "exp", "sqrt": "root", "abs": "abs",
}
_TAG_FUNCS = {v: k for k, v in _FUNC_TAGS.items()}


def to_semantic_markup(e: Expr) -> str:
    if isinstance(e, Number):
        v = e.value
        if v.denominator == 1:
            return f'<cn type="integer">{v.numerator}</cn>'
        return f'<cn type="rational">{v.numerator}/{v.denominator}</cn>'
    if isinstance(e, Constant):
        return "<pi/>" if e.name == "pi" else "<exponentiale/>"
    if isinstance(e, Variable):
        return f"<ci>{e.name}</ci>"
    if isinstance(e, Unary):
        return f"<apply><minus/>{to_semantic_markup(e.arg)}</apply>"
    if isinstance(e, Binary):
        tag = _BINOP_TAGS[e.op]
        return (
            f"<apply><{tag}/>{to_semantic_markup(e.left)}"
            f"{to_semantic_markup(e.right)}</apply>"
        )
    if isinstance(e, Function):
        tag = _FUNC_TAGS[e.name]
        return f"<apply><{tag}/>{to_semantic_markup(e.arg)}</apply>"
    if isinstance(e, Derivative):
        return (
            f"<apply><diff/><bvar><ci>{e.var}</ci></bvar>"
            f"{to_semantic_markup(e.body)}</apply>"
        )
    raise TypeError(f"not an Expr: {e!r}")


class MarkupError(ValueError):
    pass


def from_semantic_markup(s: str) -> Expr:
    try:
        root = ET.fromstring(s)
    except ET.ParseError as exc:
        raise MarkupError(f"malformed markup: {exc}") from None
    return _read(root)


def _read(el: ET.Element) -> Expr:
    tag = el.tag
    if tag == "cn":
        text = (el.text or "").strip()
        kind = el.get("type", "integer")
        try:
            if kind == "rational":
                p, q = text.split("/")
                return Number(Fraction(int(p), int(q)))
            return Number(Fraction(int(text)))
        except (ValueError, ZeroDivisionError):
            raise MarkupError(f"bad <cn> content {text!r}") from None
    if tag == "ci":
        name = (el.text or "").strip()
        if not name:
            raise MarkupError("empty <ci>")
        return Variable(name)
    if tag == "pi":
        return Constant("pi")
    if tag == "exponentiale":
        return Constant("euler")
    if tag != "apply" or len(el) == 0:
        raise MarkupError(f"unexpected element <{tag}>")

    head, *rest = list(el)
    op = head.tag
    if op == "minus":
        if len(rest) == 1:
            return Unary("neg", _read(rest[0]))
        if len(rest) == 2:
            return Binary("sub", _read(rest[0]), _read(rest[1]))
        raise MarkupError("<minus/> takes 1 or 2 operands")
    if op in _TAG_BINOPS:
        if len(rest) != 2:
            raise MarkupError(f"<{op}/> takes 2 operands")
        return Binary(_TAG_BINOPS[op], _read(rest[0]), _read(rest[1]))
    if op in _TAG_FUNCS:
        if len(rest) != 1:
            raise MarkupError(f"<{op}/> takes 1 operand")
        return Function(_TAG_FUNCS[op], _read(rest[0]))
    if op == "diff":
        if len(rest) != 2 or rest[0].tag != "bvar":
            raise MarkupError("<diff/> needs <bvar> and a body")
        bvar = rest[0]
        if len(bvar) != 1 or bvar[0].tag != "ci":
            raise MarkupError("<bvar> must hold one <ci>")
        var = (bvar[0].text or "").strip()
        return Derivative(var, _read(rest[1]))
    raise MarkupError(f"unknown operator <{op}>")
