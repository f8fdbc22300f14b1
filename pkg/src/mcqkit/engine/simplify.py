"""Equivalence-preserving simplification to a fixpoint.

Folds closed subtrees through the exact evaluator when the value stays in
the a + b*sqrt(n) field, applies the usual identity rules elsewhere, and
never raises: anything it cannot improve it leaves intact.
"""

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
    free_variables,
)
from .errors import DomainError, NotRepresentable, UnboundVariable, UnsupportedDerivative
from .exact import ExactValue, eval_exact

_MAX_PASSES = 50


def exact_to_expr(v: ExactValue) -> Expr:
    if v.b == 0:
        return Number(v.a)
    radical = Function("sqrt", Number(Fraction(v.n)))
    if v.b == 1:
        surd = radical
    else:
        surd = Binary("mul", Number(v.b), radical)
    if v.a == 0:
        return surd
    return Binary("add", Number(v.a), surd)


def simplify(e: Expr) -> Expr:
    for _ in range(_MAX_PASSES):
        nxt = _pass(e)
        if nxt == e:
            return e
        e = nxt
    return e


def _pass(e: Expr) -> Expr:
    if isinstance(e, Unary):
        arg = _pass(e.arg)
        if isinstance(arg, Unary) and arg.op == "neg":
            return arg.arg
        if isinstance(arg, Number):
            return Number(-arg.value)
        return _fold(Unary(e.op, arg))
    if isinstance(e, Binary):
        return _fold(_rewrite_binary(Binary(e.op, _pass(e.left), _pass(e.right))))
    if isinstance(e, Function):
        return _fold(Function(e.name, _pass(e.arg)))
    if isinstance(e, Derivative):
        return _fold(Derivative(e.var, _pass(e.body)))
    return e


def _is(e: Expr, k) -> bool:
    return isinstance(e, Number) and e.value == k


def _rewrite_binary(e: Binary) -> Expr:
    l, r = e.left, e.right
    if e.op == "add":
        if _is(l, 0):
            return r
        if _is(r, 0):
            return l
    elif e.op == "sub":
        if _is(r, 0):
            return l
        if _is(l, 0):
            return Unary("neg", r)
    elif e.op == "mul":
        if _is(l, 0) or _is(r, 0):
            return Number(Fraction(0))
        if _is(l, 1):
            return r
        if _is(r, 1):
            return l
    elif e.op == "div":
        if _is(r, 1):
            return l
        if _is(l, 0) and not _is(r, 0):
            return Number(Fraction(0))
    elif e.op == "pow":
        if _is(r, 1):
            return l
        if _is(r, 0):
            return Number(Fraction(1))  # x^0 -> 1, 0^0 corner accepted
    return e


def _fold(e: Expr) -> Expr:
    """Replace a closed subtree by its exact value when representable."""
    if isinstance(e, (Number, Constant)):
        return e
    if free_variables(e):
        return e
    try:
        v = eval_exact(e)
    except (NotRepresentable, DomainError, UnboundVariable, UnsupportedDerivative):
        return e
    folded = exact_to_expr(v)
    # only adopt the fold if it actually shrinks or normalizes the tree
    return folded if folded != e else e
