"""IEEE-double evaluation with strict real-domain checks."""

from __future__ import annotations

import math

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
from .errors import DomainError, UnboundVariable

# any intermediate denominator smaller than this counts as a pole
SINGULARITY_EPS = 1e-12


def _checked_div(num: float, den: float, what: str) -> float:
    if abs(den) < SINGULARITY_EPS:
        raise DomainError(f"{what}: denominator vanishes")
    return num / den


def eval_numeric(e: Expr, env: dict[str, float] | None = None) -> float:
    env = env or {}
    if isinstance(e, Number):
        return float(e.value)
    if isinstance(e, Constant):
        return math.pi if e.name == "pi" else math.e
    if isinstance(e, Variable):
        try:
            return float(env[e.name])
        except KeyError:
            raise UnboundVariable(e.name) from None
    if isinstance(e, Unary):
        return -eval_numeric(e.arg, env)
    if isinstance(e, Binary):
        l = eval_numeric(e.left, env)
        r = eval_numeric(e.right, env)
        if e.op == "add":
            return l + r
        if e.op == "sub":
            return l - r
        if e.op == "mul":
            return l * r
        if e.op == "div":
            return _checked_div(l, r, "division")
        return _pow(l, r)
    if isinstance(e, Function):
        return _apply(e.name, eval_numeric(e.arg, env))
    if isinstance(e, Derivative):
        from .calculus import differentiate

        return eval_numeric(differentiate(e.body, e.var), env)
    raise TypeError(f"not an Expr: {e!r}")


def _pow(base: float, exp: float) -> float:
    if base == 0 and exp == 0:
        return 1.0  # algebraic convention, matches simplify's x^0 -> 1
    if abs(base) < SINGULARITY_EPS and exp < 0:
        raise DomainError("zero base with negative exponent")
    if base < 0:
        if exp != round(exp):
            raise DomainError("negative base with non-integer exponent")
        return base ** round(exp)
    try:
        v = base ** exp
    except OverflowError:
        raise DomainError("power overflow") from None
    if isinstance(v, complex) or math.isinf(v) or math.isnan(v):
        raise DomainError("power left the real domain")
    return v


def _apply(name: str, x: float) -> float:
    if name == "sin":
        return math.sin(x)
    if name == "cos":
        return math.cos(x)
    if name == "tan":
        return _checked_div(math.sin(x), math.cos(x), "tan")
    if name == "cot":
        return _checked_div(math.cos(x), math.sin(x), "cot")
    if name == "sec":
        return _checked_div(1.0, math.cos(x), "sec")
    if name == "csc":
        return _checked_div(1.0, math.sin(x), "csc")
    if name == "asin":
        if not -1.0 <= x <= 1.0:
            raise DomainError("asin outside [-1, 1]")
        return math.asin(x)
    if name == "acos":
        if not -1.0 <= x <= 1.0:
            raise DomainError("acos outside [-1, 1]")
        return math.acos(x)
    if name == "atan":
        return math.atan(x)
    if name == "ln":
        if x <= 0:
            raise DomainError("ln of a non-positive value")
        return math.log(x)
    if name == "log10":
        if x <= 0:
            raise DomainError("log of a non-positive value")
        return math.log10(x)
    if name == "exp":
        try:
            return math.exp(x)
        except OverflowError:
            raise DomainError("exp overflow") from None
    if name == "sqrt":
        if x < 0:
            raise DomainError("square root of a negative value")
        return math.sqrt(x)
    if name == "abs":
        return abs(x)
    raise ValueError(f"unknown function {name}")
