import math
import random
from fractions import Fraction

import pytest

from conftest import random_expr, random_smooth_expr
from mcqkit.engine.calculus import differentiate
from mcqkit.engine.equivalence import EquivalencePolicy, equivalent
from mcqkit.engine.errors import (
    DomainError,
    NotRepresentable,
    UnboundVariable,
)
from mcqkit.engine.exact import ExactValue, eval_exact, exact_sqrt
from mcqkit.engine.numeric import eval_numeric
from mcqkit.engine.simplify import exact_to_expr, simplify
from mcqkit.expr.infix import parse_infix
from mcqkit.expr.latex import parse_latex
from mcqkit.expr.nodes import (
    Binary,
    Constant,
    Derivative,
    Function,
    Number,
    Variable,
    free_variables,
)

F = Fraction


class TestEvalNumeric:
    def test_sin_quarter_pi(self):
        got = eval_numeric(parse_latex(r"\sin(\frac{\pi}{4})"), {})
        assert abs(got - 0.7071067811865476) < 1e-12

    def test_pole_is_domain_error(self):
        with pytest.raises(DomainError):
            eval_numeric(parse_infix("1/x"), {"x": 0.0})

    def test_double_angle_identity_numerically(self):
        a = eval_numeric(parse_infix("2*sin(x)*cos(x)"), {"x": 0.7})
        b = eval_numeric(parse_infix("sin(2*x)"), {"x": 0.7})
        assert abs(a - b) < 1e-12

    def test_unbound_variable(self):
        with pytest.raises(UnboundVariable):
            eval_numeric(Variable("x"), {})

    def test_log_of_nonpositive(self):
        with pytest.raises(DomainError):
            eval_numeric(parse_infix("ln(x)"), {"x": -1.0})

    def test_tan_pole_guard(self):
        with pytest.raises(DomainError):
            eval_numeric(parse_infix("tan(pi/2)"), {})

    def test_zero_to_the_zero_is_one(self):
        assert eval_numeric(parse_infix("0^0"), {}) == 1.0

    def test_negative_base_fractional_power(self):
        with pytest.raises(DomainError):
            eval_numeric(parse_infix("(0-2)^(1/2)"), {})

    def test_derivative_node_evaluates(self):
        e = Derivative("x", Function("sin", Variable("x")))
        got = eval_numeric(e, {"x": 0.5})
        assert abs(got - math.cos(0.5)) < 1e-12


class TestEvalExact:
    def test_sin_quarter_pi_surd(self):
        v = eval_exact(parse_latex(r"\sin(\frac{\pi}{4})"))
        assert v == ExactValue(F(0), F(1, 2), 2)

    def test_cos_pi(self):
        assert eval_exact(parse_infix("cos(pi)")) == ExactValue(F(-1))

    def test_cot_pi_sixth_by_independent_oracle(self):
        # oracle: cot = cos/sin with surd arithmetic done by hand:
        # (sqrt(3)/2) / (1/2) = sqrt(3)
        v = eval_exact(parse_infix("cot(pi/6)"))
        assert v == ExactValue(F(0), F(1), 3)

    def test_non_table_argument(self):
        with pytest.raises(NotRepresentable):
            eval_exact(parse_infix("sin(1)"))

    def test_cot_zero_pole(self):
        with pytest.raises(DomainError):
            eval_exact(parse_infix("cot(0)"))

    def test_matches_numeric_where_defined(self):
        for src in ["sin(pi/3)", "sec(pi/4)", "csc(pi/6)", "tan(5*pi/6)",
                    "sqrt(8)", "ln(1)", "log(100)", "(3/4)^2", "2^(1/2)"]:
            e = parse_infix(src)
            assert abs(eval_exact(e).to_float() - eval_numeric(e, {})) < 1e-12

    def test_surd_arithmetic_closure(self):
        a = exact_sqrt(F(2))
        assert a * a == ExactValue(F(2))
        assert (a + a) == ExactValue(F(0), F(2), 2)
        assert a.inverse() == ExactValue(F(0), F(1, 2), 2)

    def test_mixed_radicals_not_representable(self):
        with pytest.raises(NotRepresentable):
            eval_exact(parse_infix("2^(1/2) + 3^(1/2)"))

    def test_squarefree_normalization(self):
        assert eval_exact(parse_infix("sqrt(12)")) == ExactValue(F(0), F(2), 3)


class TestSimplify:
    def test_additive_identity(self):
        assert simplify(parse_infix("x+0")) == Variable("x")

    def test_fraction_reduction(self):
        got = simplify(parse_infix("(2/4)*x"))
        assert got == Binary("mul", Number(F(1, 2)), Variable("x"))

    def test_closed_trig_folds_to_surd(self):
        got = simplify(parse_infix("sin(pi/4)+0"))
        assert got == exact_to_expr(ExactValue(F(0), F(1, 2), 2))

    def test_double_negation(self):
        assert simplify(parse_infix("-(-x)")) == Variable("x")

    def test_power_identities(self):
        assert simplify(parse_infix("x^1")) == Variable("x")
        assert simplify(parse_infix("x^0")) == Number(F(1))
        assert simplify(parse_infix("x*0")) == Number(F(0))

    def test_unsimplifiable_left_intact(self):
        e = parse_infix("ln(x)+sin(y)")
        assert simplify(e) == e

    @pytest.mark.parametrize("seed", range(60))
    def test_preserves_equivalence(self, seed):
        rng = random.Random(seed)
        e = random_expr(rng, 3)
        assert not equivalent(e, simplify(e)).is_distinct


class TestDifferentiate:
    def test_chain_rule_example(self):
        got = differentiate(parse_infix("sin(x^2)"), "x")
        want = parse_infix("cos(x^2)*2*x")
        assert equivalent(got, want).is_equivalent

    def test_constant_and_identity(self):
        assert differentiate(Number(F(5)), "x") == Number(F(0))
        assert differentiate(Variable("x"), "x") == Number(F(1))
        assert differentiate(Constant("pi"), "x") == Number(F(0))

    def test_product_and_quotient_rules(self):
        for src, want in [
            ("x*sin(x)", "sin(x)+x*cos(x)"),
            ("sin(x)/x", "(cos(x)*x-sin(x))/x^2"),
            ("e^x", "e^x"),
            ("ln(x)", "1/x"),
            ("x^3", "3*x^2"),
        ]:
            got = differentiate(parse_infix(src), "x")
            assert equivalent(got, parse_infix(want)).is_equivalent, src

    def test_derivative_nodes_eliminated(self):
        e = Derivative("x", Function("sin", Binary("pow", Variable("x"), Number(F(2)))))
        got = differentiate(e.body, e.var)
        assert "Derivative" not in repr(got)

    @pytest.mark.parametrize("seed", range(40))
    def test_finite_difference_oracle(self, seed):
        rng = random.Random(1000 + seed)
        e = random_smooth_expr(rng, 3)
        d = differentiate(e, "x")
        checked = 0
        for _ in range(10):
            x = rng.uniform(-2.0, 2.0)
            h = 1e-5
            try:
                fd = (eval_numeric(e, {"x": x + h}) - eval_numeric(e, {"x": x - h})) / (2 * h)
                sym = eval_numeric(d, {"x": x})
            except DomainError:
                continue
            scale = max(abs(fd), abs(sym), 1.0)
            assert abs(fd - sym) / scale < 1e-4, (src := repr(e), x)
            checked += 1
        assert checked >= 5


class TestEquivalence:
    def test_double_angle(self):
        v = equivalent(parse_infix("2*sin(x)*cos(x)"), parse_infix("sin(2*x)"))
        assert v.is_equivalent

    def test_surd_rationalization(self):
        v = equivalent(parse_latex(r"\frac{\sqrt{2}}{2}"), parse_latex(r"\frac{1}{\sqrt{2}}"))
        assert v.is_equivalent

    def test_sin_vs_cos_distinct(self):
        assert equivalent(parse_infix("sin(x)"), parse_infix("cos(x)")).is_distinct

    def test_disjoint_domains_inconclusive(self):
        v = equivalent(parse_infix("ln(x)"), parse_infix("ln(0-x)"))
        assert v.is_inconclusive
        assert "common-domain" in v.reason

    def test_reflexive_and_symmetric(self):
        a, b = parse_infix("sin(x)+x^2"), parse_infix("cos(x)*x")
        assert equivalent(a, a).is_equivalent
        assert equivalent(a, b).kind == equivalent(b, a).kind

    def test_deterministic_given_seed(self):
        policy = EquivalencePolicy(seed=42)
        a, b = parse_infix("sin(x)^2"), parse_infix("1-cos(x)^2")
        assert equivalent(a, b, policy) == equivalent(a, b, policy)
        assert equivalent(a, b, policy).is_equivalent

    def test_policy_validation(self):
        with pytest.raises(ValueError):
            EquivalencePolicy(sample_count=4, min_valid_points=8)
        with pytest.raises(ValueError):
            EquivalencePolicy(domain_low=3, domain_high=-3)
        with pytest.raises(ValueError):
            EquivalencePolicy(abs_tol=0)
