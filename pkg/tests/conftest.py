"""Shared test helpers: random expression generation and oracles."""

from __future__ import annotations

import random
from fractions import Fraction

from mcqkit.expr.nodes import (
    Binary,
    Constant,
    Derivative,
    Expr,
    Function,
    Number,
    Unary,
    Variable,
)

FUNCTION_NAMES = (
    "sin", "cos", "tan", "cot", "sec", "csc",
    "asin", "acos", "atan", "ln", "log10", "exp", "sqrt", "abs",
)

BINARY_OPS = ("add", "sub", "mul", "div", "pow")

VARIABLES = ("x", "y", "z")


def random_expr(rng: random.Random, depth: int = 5) -> Expr:
    """Random expression over every node kind.

    Numbers are nonnegative because the parser never produces negative
    literals (a leading minus parses as Unary neg), so nonnegative trees
    are exactly the printer round-trip normal form.
    """
    if depth <= 0:
        return _leaf(rng)
    kind = rng.randrange(8)
    if kind <= 1:
        return _leaf(rng)
    if kind == 2:
        return Unary("neg", random_expr(rng, depth - 1))
    if kind <= 5:
        op = rng.choice(BINARY_OPS)
        return Binary(op, random_expr(rng, depth - 1), random_expr(rng, depth - 1))
    if kind == 6:
        return Function(rng.choice(FUNCTION_NAMES), random_expr(rng, depth - 1))
    return Derivative(rng.choice(VARIABLES), random_expr(rng, depth - 1))


def _leaf(rng: random.Random) -> Expr:
    kind = rng.randrange(4)
    if kind == 0:
        return Number(Fraction(rng.randrange(0, 12)))
    if kind == 1:
        return Number(Fraction(rng.randrange(0, 12), rng.randrange(1, 9)))
    if kind == 2:
        return Constant(rng.choice(("pi", "euler")))
    return Variable(rng.choice(VARIABLES))


def random_smooth_expr(rng: random.Random, depth: int = 3) -> Expr:
    """Random differentiable expression in the single variable x, built
    from constructs that are smooth on generic points (for comparing
    symbolic derivatives against finite differences)."""
    if depth <= 0:
        choice = rng.randrange(3)
        if choice == 0:
            return Variable("x")
        if choice == 1:
            return Number(Fraction(rng.randrange(1, 6)))
        return Number(Fraction(rng.randrange(1, 8), rng.randrange(2, 5)))
    kind = rng.randrange(6)
    if kind == 0:
        return Unary("neg", random_smooth_expr(rng, depth - 1))
    if kind <= 2:
        op = rng.choice(("add", "sub", "mul"))
        return Binary(op, random_smooth_expr(rng, depth - 1),
                      random_smooth_expr(rng, depth - 1))
    if kind == 3:
        base = random_smooth_expr(rng, depth - 1)
        return Binary("pow", base, Number(Fraction(rng.randrange(2, 4))))
    if kind == 4:
        fn = rng.choice(("sin", "cos", "exp", "atan"))
        return Function(fn, random_smooth_expr(rng, depth - 1))
    return Binary("div", random_smooth_expr(rng, depth - 1),
                  Binary("add", Number(Fraction(rng.randrange(3, 7))),
                         Binary("pow", Variable("x"), Number(Fraction(2)))))
