"""Immutable AST for the mathematical expressions the pipeline carries.

Every node is a frozen dataclass so expressions can be hashed, compared
structurally, and shared freely between threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

MAX_DEPTH = 64
MAX_NODES = 10_000

BINARY_OPS = ("add", "sub", "mul", "div", "pow")

FUNCTION_NAMES = (
    "sin", "cos", "tan", "cot", "sec", "csc",
    "asin", "acos", "atan",
    "ln", "log10", "exp", "sqrt", "abs",
)

_IDENT_RE = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*\Z")


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int


@dataclass(frozen=True)
class Number:
    value: Fraction

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class Constant:
    name: str  # "pi" | "euler"


@dataclass(frozen=True)
class Variable:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str  # only "neg"
    arg: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str  # add | sub | mul | div | pow
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Function:
    name: str
    arg: "Expr"


@dataclass(frozen=True)
class Derivative:
    var: str
    body: "Expr"


Expr = Union[Number, Constant, Variable, Unary, Binary, Function, Derivative]

PI = Constant("pi")
EULER = Constant("euler")


def num(p, q=1) -> Number:
    return Number(Fraction(p, q))


def is_identifier(name: str) -> bool:
    return bool(_IDENT_RE.match(name))


def children(e: Expr) -> tuple:
    if isinstance(e, Unary):
        return (e.arg,)
    if isinstance(e, Binary):
        return (e.left, e.right)
    if isinstance(e, Function):
        return (e.arg,)
    if isinstance(e, Derivative):
        return (e.body,)
    return ()


def node_count(e: Expr) -> int:
    return 1 + sum(node_count(c) for c in children(e))


def depth(e: Expr) -> int:
    kids = children(e)
    if not kids:
        return 1
    return 1 + max(depth(c) for c in kids)


def free_variables(e: Expr) -> set[str]:
    """Free variable names of ``e``.

    A derivative's differentiation variable stays free in the body: the
    derivative is taken with respect to it, it is not a binder that hides it.
    """
    if isinstance(e, Variable):
        return {e.name}
    out: set[str] = set()
    for c in children(e):
        out |= free_variables(c)
    return out


class SubstitutionError(ValueError):
    pass


def substitute(e: Expr, bindings: dict[str, Expr]) -> Expr:
    """Simultaneously replace free variables of ``e`` per ``bindings``.

    Raises SubstitutionError when a binding targets a differentiation
    variable: rewriting d/dx under {x -> 2} has no meaning.
    """
    if not bindings:
        return e
    if isinstance(e, Variable):
        return bindings.get(e.name, e)
    if isinstance(e, Derivative):
        if e.var in bindings:
            raise SubstitutionError(
                f"cannot substitute differentiation variable {e.var!r}"
            )
        return Derivative(e.var, substitute(e.body, bindings))
    if isinstance(e, Unary):
        return Unary(e.op, substitute(e.arg, bindings))
    if isinstance(e, Binary):
        return Binary(e.op, substitute(e.left, bindings), substitute(e.right, bindings))
    if isinstance(e, Function):
        return Function(e.name, substitute(e.arg, bindings))
    return e
