import random
from fractions import Fraction

import pytest

from conftest import random_expr
from mcqkit.expr.errors import ParseError
from mcqkit.expr.latex import parse_latex, to_latex
from mcqkit.expr.nodes import (
    Binary,
    Constant,
    Derivative,
    Function,
    Number,
    Unary,
    Variable,
)

F = Fraction


class TestParseLatex:
    def test_trig_of_fraction(self):
        got = parse_latex(r"\sin(\frac{\pi}{4})")
        assert got == Function(
            "sin", Binary("div", Constant("pi"), Number(F(4)))
        )

    def test_single_variable(self):
        assert parse_latex("x") == Variable("x")

    def test_derivative_prefix(self):
        got = parse_latex(r"\frac{d}{dx} \sin{x^2}")
        body = Function("sin", Binary("pow", Variable("x"), Number(F(2))))
        assert got == Derivative("x", body)

    def test_juxtaposition_multiplication(self):
        got = parse_latex("2x+1")
        assert got == Binary(
            "add", Binary("mul", Number(F(2)), Variable("x")), Number(F(1))
        )

    def test_integer_fraction_is_rational_literal(self):
        assert parse_latex(r"\frac{3}{2}") == Number(F(3, 2))

    def test_decimal_is_exact_rational(self):
        assert parse_latex("0.5") == Number(F(1, 2))

    def test_nth_root_becomes_fractional_power(self):
        got = parse_latex(r"\sqrt[3]{x}")
        assert got == Binary("pow", Variable("x"), Number(F(1, 3)))

    def test_absolute_value_fences(self):
        assert parse_latex(r"\left|x\right|") == Function("abs", Variable("x"))

    def test_e_is_euler(self):
        assert parse_latex("e^x") == Binary(
            "pow", Constant("euler"), Variable("x")
        )

    def test_power_is_right_associative(self):
        assert parse_latex("x^2^3") == parse_latex("x^{2^{3}}")

    def test_pow_binds_tighter_than_neg(self):
        assert parse_latex("-x^2") == Unary(
            "neg", Binary("pow", Variable("x"), Number(F(2)))
        )

    def test_add_is_left_associative(self):
        a, b, c = Variable("x"), Variable("y"), Variable("z")
        assert parse_latex("x-y-z") == Binary("sub", Binary("sub", a, b), c)

    def test_cdot_multiplication(self):
        assert parse_latex(r"2\cdot x") == parse_latex("2x")


class TestParseErrors:
    @pytest.mark.parametrize("bad", [
        "", "   ", r"\unknownmacro{x}", r"\frac{1}", "((x)", "x+",
        r"\sin", "2**3", "x^", "@", r"\left|x",
    ])
    def test_malformed_input_raises(self, bad):
        with pytest.raises(ParseError):
            parse_latex(bad)

    def test_span_lies_inside_input(self):
        src = r"1+\oops{2}"
        with pytest.raises(ParseError) as info:
            parse_latex(src)
        span = info.value.span
        assert 0 <= span.start <= span.end <= len(src)

    def test_input_size_limit(self):
        with pytest.raises(ParseError):
            parse_latex("x+" * 40000 + "x")

    def test_depth_limit(self):
        with pytest.raises(ParseError):
            parse_latex("-" * 80 + "x")

    def test_deep_parens_fail_cleanly(self):
        # totality: a ParseError, never a recursion crash
        with pytest.raises(ParseError):
            parse_latex("(" * 5000 + "x" + ")" * 5000)

    def test_zero_denominator_fraction_is_division(self):
        got = parse_latex(r"\frac{1}{0}")
        assert got == Binary("div", Number(F(1)), Number(F(0)))


class TestToLatex:
    def test_trig_rendering(self):
        e = Function("sin", Binary("div", Constant("pi"), Number(F(4))))
        assert to_latex(e) == r"\sin\left(\frac{\pi}{4}\right)"

    def test_variable(self):
        assert to_latex(Variable("x")) == "x"

    def test_power_of_sum_is_fenced(self):
        e = Binary("pow", Binary("add", Variable("x"), Number(F(1))), Number(F(2)))
        assert to_latex(e) == r"\left(x+1\right)^{2}"

    def test_rational_literal_renders_as_fraction(self):
        assert to_latex(Number(F(3, 2))) == r"\frac{3}{2}"

    @pytest.mark.parametrize("seed", range(30))
    def test_round_trip_random(self, seed):
        rng = random.Random(seed)
        e = random_expr(rng, depth=4)
        assert parse_latex(to_latex(e)) == e

    def test_round_trip_integer_division(self):
        e = Binary("div", Number(F(3)), Number(F(2)))
        assert parse_latex(to_latex(e)) == e
