import json
from fractions import Fraction

import pytest

from mcqkit.model import (
    ConstraintUnsatisfiable,
    EPOCH_ISO,
    OptionTemplate,
    Question,
    QuestionOption,
    QuestionTemplate,
    TemplateError,
    VariableSpec,
    draw_variables,
    instantiate_template,
)

F = Fraction


def linear_template() -> QuestionTemplate:
    return QuestionTemplate(
        id="linear-eq",
        stem_template="Solve ${a}x + ${b} = 0 for x.",
        option_templates=(
            OptionTemplate("\\frac{-${b}}{${a}}", "Correct: isolate $x$.", True),
            OptionTemplate("\\frac{${b}}{${a}}", "Sign slipped when moving ${b}.", False),
            OptionTemplate("${b}-${a}", "Subtraction is not the inverse here.", False),
        ),
        variables=(
            VariableSpec("a", "int", min=1, max=9),
            VariableSpec("b", "int", min=1, max=9, condition="a != b"),
        ),
        topic="linear equations",
    )


class TestDrawVariables:
    def test_deterministic_in_seed(self):
        specs = (VariableSpec("a", "int", min=1, max=9),)
        assert draw_variables(specs, 7) == draw_variables(specs, 7)

    def test_condition_always_holds(self):
        specs = (
            VariableSpec("a", "int", min=1, max=3),
            VariableSpec("b", "int", min=1, max=3, condition="a != b"),
        )
        from mcqkit.engine.numeric import eval_numeric

        for seed in range(1000):
            got = draw_variables(specs, seed)
            assert eval_numeric(got["a"], {}) != eval_numeric(got["b"], {})

    def test_empty_support_raises(self):
        specs = (VariableSpec("a", "int", min=5, max=5, exclude=(F(5),)),)
        with pytest.raises(ConstraintUnsatisfiable):
            draw_variables(specs, 0)

    def test_rational_and_choice_kinds(self):
        from mcqkit.expr.latex import parse_latex

        specs = (
            VariableSpec("q", "rational", min=1, max=5, denominator_max=4),
            VariableSpec("c", "choice",
                         choices=(parse_latex(r"\pi"), parse_latex("x"))),
        )
        got = draw_variables(specs, 3)
        assert set(got) == {"q", "c"}


class TestTemplateValidation:
    def test_undeclared_placeholder_rejected(self):
        with pytest.raises(TemplateError):
            QuestionTemplate(
                id="t", stem_template="${missing}",
                option_templates=(
                    OptionTemplate("1", "f", True),
                    OptionTemplate("2", "f", False),
                ),
            )

    def test_exactly_one_correct_required(self):
        with pytest.raises(TemplateError):
            QuestionTemplate(
                id="t", stem_template="q",
                option_templates=(
                    OptionTemplate("1", "f", True),
                    OptionTemplate("2", "f", True),
                ),
            )

    def test_bad_variable_kind(self):
        with pytest.raises(TemplateError):
            VariableSpec("a", "float")


class TestInstantiate:
    def test_linear_solution_matches_oracle(self):
        from mcqkit.engine.numeric import eval_numeric

        t = linear_template()
        q = instantiate_template(t, seed=11)
        bindings = draw_variables(t.variables, 11)
        a = eval_numeric(bindings["a"], {})
        b = eval_numeric(bindings["b"], {})
        key_value = eval_numeric(q.key.body_ast, {})
        assert abs(key_value - (-b / a)) < 1e-9

    def test_bitwise_identical_across_runs(self):
        t = linear_template()
        first = json.dumps(instantiate_template(t, 42).to_dict(), sort_keys=True)
        for _ in range(10):
            again = json.dumps(instantiate_template(t, 42).to_dict(), sort_keys=True)
            assert again == first

    def test_zero_variable_template_constant(self):
        t = QuestionTemplate(
            id="static", stem_template="What is $1+1$?",
            option_templates=(
                OptionTemplate("2", "yes", True),
                OptionTemplate("3", "no", False),
            ),
        )
        assert instantiate_template(t, 1) == instantiate_template(t, 99)

    def test_seeds_vary_bindings(self):
        t = linear_template()
        stems = {instantiate_template(t, s).stem for s in range(50)}
        assert len(stems) > 10

    def test_instances_pass_structural_checks(self):
        t = linear_template()
        for seed in range(50):
            q = instantiate_template(t, seed)
            assert q.structural_issues() == []

    def test_created_at_defaults_to_epoch(self):
        assert instantiate_template(linear_template(), 0).created_at == EPOCH_ISO

    def test_template_round_trips_through_dict(self):
        t = linear_template()
        assert QuestionTemplate.from_dict(t.to_dict()) == t


class TestQuestionModel:
    def _question(self, **overrides):
        base = dict(
            id="q1", stem="Pick $x$.",
            options=(
                QuestionOption("A", "1", "yes", True),
                QuestionOption("B", "2", "no", False),
            ),
            correct_option_id="A", topic="t",
        )
        base.update(overrides)
        return Question(**base)

    def test_clean_question_has_no_issues(self):
        assert self._question().structural_issues() == []

    def test_flag_mismatch_detected(self):
        q = self._question(correct_option_id="B")
        assert any("disagrees" in i for i in q.structural_issues())

    def test_no_correct_detected(self):
        q = self._question(options=(
            QuestionOption("A", "1", "yes", False),
            QuestionOption("B", "2", "no", False),
        ))
        assert any("0 options marked correct" in i for i in q.structural_issues())

    def test_bad_stem_math_detected(self):
        q = self._question(stem=r"Evaluate $\frac{1}$.")
        assert any("does not parse" in i for i in q.structural_issues())

    def test_round_trip_serialization(self):
        q = self._question()
        assert Question.from_dict(q.to_dict()).to_dict() == q.to_dict()
