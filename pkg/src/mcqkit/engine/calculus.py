"""Symbolic differentiation; eliminates Derivative nodes."""

from __future__ import annotations

from fractions import Fraction

from ..expr.nodes import (
    Binary,
    Constant,
    Derivative,
    Expr,
    Function,
    Number,
    Unary,
    Variable,
)
from .errors import UnsupportedDerivative

_ZERO = Number(Fraction(0))
_ONE = Number(Fraction(1))
_TWO = Number(Fraction(2))


def _is_const(e: Expr, k) -> bool:
    return isinstance(e, Number) and e.value == k


def add(l: Expr, r: Expr) -> Expr:
    if _is_const(l, 0):
        return r
    if _is_const(r, 0):
        return l
    if isinstance(l, Number) and isinstance(r, Number):
        return Number(l.value + r.value)
    return Binary("add", l, r)


def sub(l: Expr, r: Expr) -> Expr:
    if _is_const(r, 0):
        return l
    if _is_const(l, 0):
        return neg(r)
    if isinstance(l, Number) and isinstance(r, Number):
        return Number(l.value - r.value)
    return Binary("sub", l, r)


def mul(l: Expr, r: Expr) -> Expr:
    if _is_const(l, 0) or _is_const(r, 0):
        return _ZERO
    if _is_const(l, 1):
        return r
    if _is_const(r, 1):
        return l
    return Binary("mul", l, r)


def div(l: Expr, r: Expr) -> Expr:
    if _is_const(l, 0):
        return _ZERO
    if _is_const(r, 1):
        return l
    return Binary("div", l, r)


def neg(e: Expr) -> Expr:
    if isinstance(e, Unary) and e.op == "neg":
        return e.arg
    return Unary("neg", e)


def pow_(l: Expr, r: Expr) -> Expr:
    if _is_const(r, 1):
        return l
    return Binary("pow", l, r)


def differentiate(e: Expr, var: str) -> Expr:
    if isinstance(e, (Number, Constant)):
        return _ZERO
    if isinstance(e, Variable):
        return _ONE if e.name == var else _ZERO
    if isinstance(e, Unary):
        return neg(differentiate(e.arg, var))
    if isinstance(e, Binary):
        return _diff_binary(e, var)
    if isinstance(e, Function):
        inner = differentiate(e.arg, var)
        return mul(_func_derivative(e.name, e.arg), inner)
    if isinstance(e, Derivative):
        # nested derivative: eliminate the inner one first
        return differentiate(differentiate(e.body, e.var), var)
    raise TypeError(f"not an Expr: {e!r}")


def _diff_binary(e: Binary, var: str) -> Expr:
    l, r = e.left, e.right
    dl = differentiate(l, var)
    dr = differentiate(r, var)
    if e.op == "add":
        return add(dl, dr)
    if e.op == "sub":
        return sub(dl, dr)
    if e.op == "mul":
        return add(mul(dl, r), mul(l, dr))
    if e.op == "div":
        return div(sub(mul(dl, r), mul(l, dr)), pow_(r, _TWO))
    # power rule; constant exponents get the short form
    if _is_const(dr, 0):
        return mul(mul(r, pow_(l, sub(r, _ONE))), dl)
    # f^g = exp(g ln f): d = f^g * (dg ln f + g df / f)
    return mul(
        Binary("pow", l, r),
        add(mul(dr, Function("ln", l)), div(mul(r, dl), l)),
    )


def _func_derivative(name: str, u: Expr) -> Expr:
    if name == "sin":
        return Function("cos", u)
    if name == "cos":
        return neg(Function("sin", u))
    if name == "tan":
        return pow_(Function("sec", u), _TWO)
    if name == "cot":
        return neg(pow_(Function("csc", u), _TWO))
    if name == "sec":
        return mul(Function("sec", u), Function("tan", u))
    if name == "csc":
        return neg(mul(Function("csc", u), Function("cot", u)))
    if name == "asin":
        return div(_ONE, Function("sqrt", sub(_ONE, pow_(u, _TWO))))
    if name == "acos":
        return neg(div(_ONE, Function("sqrt", sub(_ONE, pow_(u, _TWO)))))
    if name == "atan":
        return div(_ONE, add(_ONE, pow_(u, _TWO)))
    if name == "ln":
        return div(_ONE, u)
    if name == "log10":
        return div(_ONE, mul(u, Function("ln", Number(Fraction(10)))))
    if name == "exp":
        return Function("exp", u)
    if name == "sqrt":
        return div(_ONE, mul(_TWO, Function("sqrt", u)))
    if name == "abs":
        return div(u, Function("abs", u))
    raise UnsupportedDerivative(f"no derivative rule for {name}")
