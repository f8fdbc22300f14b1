"""Question and template model with seeded algorithmic variables."""

from __future__ import annotations

import re
import uuid
from dataclasses import dataclass, field
from fractions import Fraction

from .engine.errors import DomainError, UnboundVariable
from .engine.numeric import eval_numeric
from .engine.simplify import simplify
from .expr.errors import ParseError
from .expr.infix import parse_infix
from .expr.latex import parse_latex, to_latex
from .expr.nodes import Expr, Number, is_identifier, substitute
from .rng import SplitMix64

DIFFICULTIES = ("low", "medium", "high")

# default timestamp keeps instantiation bit-reproducible; callers that want
# wall-clock time pass it explicitly
EPOCH_ISO = "1970-01-01T00:00:00+00:00"

_NAMESPACE = uuid.UUID("6ba7b810-9dad-11d1-80b4-00c04fd430c8")

_PLACEHOLDER_RE = re.compile(r"\$\{([a-zA-Z][a-zA-Z0-9_]*)\}")
MATH_SEGMENT_RE = re.compile(r"\$([^$]+)\$")


class ConstraintUnsatisfiable(ValueError):
    pass


class TemplateError(ValueError):
    pass


@dataclass(frozen=True)
class QuestionOption:
    id: str  # single letter A-Z
    body_latex: str
    feedback: str
    is_correct: bool
    body_ast: Expr | None = None  # None for plain-text options

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "latex": self.body_latex,
            "feedback": self.feedback,
            "is_correct": self.is_correct,
        }


@dataclass(frozen=True)
class Question:
    id: str
    stem: str
    options: tuple[QuestionOption, ...]
    correct_option_id: str
    topic: str
    difficulty: str = "medium"
    distractor_strategies: tuple[str, ...] = ()
    provenance: str = "generated"  # generated | authored
    created_at: str = EPOCH_ISO

    @property
    def key(self) -> QuestionOption:
        for o in self.options:
            if o.id == self.correct_option_id:
                return o
        raise KeyError(self.correct_option_id)

    def structural_issues(self) -> list[str]:
        issues = []
        ids = [o.id for o in self.options]
        if len(set(ids)) != len(ids):
            issues.append("duplicate option ids")
        if not 2 <= len(self.options) <= 8:
            issues.append(f"option count {len(self.options)} outside 2..8")
        correct = [o.id for o in self.options if o.is_correct]
        if len(correct) != 1:
            issues.append(f"{len(correct)} options marked correct (need exactly 1)")
        elif correct[0] != self.correct_option_id:
            issues.append("correct_option_id disagrees with is_correct flags")
        if self.correct_option_id not in ids:
            issues.append(f"correct_option_id {self.correct_option_id!r} not among options")
        if self.difficulty not in DIFFICULTIES:
            issues.append(f"unknown difficulty {self.difficulty!r}")
        for seg in MATH_SEGMENT_RE.findall(self.stem):
            try:
                parse_latex(seg)
            except ParseError as exc:
                issues.append(f"stem math {seg!r} does not parse: {exc.message}")
        return issues

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "stem": self.stem,
            "options": [o.to_dict() for o in self.options],
            "correct_option_id": self.correct_option_id,
            "topic": self.topic,
            "difficulty": self.difficulty,
            "distractor_strategies": list(self.distractor_strategies),
            "provenance": self.provenance,
            "created_at": self.created_at,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Question":
        options = []
        for o in d["options"]:
            ast = None
            try:
                ast = parse_latex(o["latex"])
            except ParseError:
                pass
            options.append(
                QuestionOption(
                    id=o["id"],
                    body_latex=o["latex"],
                    feedback=o.get("feedback", ""),
                    is_correct=bool(o["is_correct"]),
                    body_ast=ast,
                )
            )
        return cls(
            id=d["id"],
            stem=d["stem"],
            options=tuple(options),
            correct_option_id=d["correct_option_id"],
            topic=d.get("topic", ""),
            difficulty=d.get("difficulty", "medium"),
            distractor_strategies=tuple(d.get("distractor_strategies", ())),
            provenance=d.get("provenance", "generated"),
            created_at=d.get("created_at", EPOCH_ISO),
        )


@dataclass(frozen=True)
class VariableSpec:
    name: str
    kind: str  # int | rational | choice
    min: int = 1
    max: int = 9
    denominator_max: int = 9
    choices: tuple[Expr, ...] = ()
    exclude: tuple[Fraction, ...] = ()
    condition: str | None = None

    def __post_init__(self):
        if not is_identifier(self.name):
            raise TemplateError(f"bad variable name {self.name!r}")
        if self.kind not in ("int", "rational", "choice"):
            raise TemplateError(f"unknown variable kind {self.kind!r}")
        if self.kind == "choice" and not self.choices:
            raise TemplateError(f"choice variable {self.name!r} needs choices")
        if self.min > self.max:
            raise TemplateError(f"variable {self.name!r}: min > max")


@dataclass(frozen=True)
class OptionTemplate:
    body: str
    feedback: str
    is_correct: bool


@dataclass(frozen=True)
class QuestionTemplate:
    id: str
    stem_template: str
    option_templates: tuple[OptionTemplate, ...]
    variables: tuple[VariableSpec, ...] = ()
    topic: str = ""
    difficulty: str = "medium"

    def __post_init__(self):
        declared = {v.name for v in self.variables}
        texts = [self.stem_template] + [
            t.body + " " + t.feedback for t in self.option_templates
        ]
        for text in texts:
            for name in _PLACEHOLDER_RE.findall(text):
                if name not in declared:
                    raise TemplateError(f"placeholder ${{{name}}} is undeclared")
        correct = [t for t in self.option_templates if t.is_correct]
        if len(correct) != 1:
            raise TemplateError("template needs exactly one correct option")

    @classmethod
    def from_dict(cls, d: dict) -> "QuestionTemplate":
        variables = []
        for v in d.get("variables", ()):
            choices = tuple(parse_latex(c) for c in v.get("choices", ()))
            exclude = tuple(Fraction(str(x)) for x in v.get("exclude", ()))
            variables.append(
                VariableSpec(
                    name=v["name"],
                    kind=v["kind"],
                    min=v.get("min", 1),
                    max=v.get("max", 9),
                    denominator_max=v.get("denominator_max", 9),
                    choices=choices,
                    exclude=exclude,
                    condition=v.get("condition"),
                )
            )
        return cls(
            id=d["id"],
            stem_template=d["stem_template"],
            option_templates=tuple(
                OptionTemplate(t["body"], t.get("feedback", ""), bool(t["is_correct"]))
                for t in d["option_templates"]
            ),
            variables=tuple(variables),
            topic=d.get("topic", ""),
            difficulty=d.get("difficulty", "medium"),
        )

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "stem_template": self.stem_template,
            "option_templates": [
                {"body": t.body, "feedback": t.feedback, "is_correct": t.is_correct}
                for t in self.option_templates
            ],
            "variables": [
                {
                    "name": v.name,
                    "kind": v.kind,
                    "min": v.min,
                    "max": v.max,
                    "denominator_max": v.denominator_max,
                    "choices": [to_latex(c) for c in v.choices],
                    "exclude": [str(x) for x in v.exclude],
                    "condition": v.condition,
                }
                for v in self.variables
            ],
            "topic": self.topic,
            "difficulty": self.difficulty,
        }


MAX_DRAW_ATTEMPTS = 10_000

_COMPARE_RE = re.compile(r"(!=|<=|>=|==|=|<|>)")


def _value_of(e: Expr) -> float:
    return eval_numeric(e, {})


def _holds(condition: str, bindings: dict[str, Expr]) -> bool:
    env = {name: _value_of(expr) for name, expr in bindings.items()}
    for clause in condition.split(" and "):
        parts = _COMPARE_RE.split(clause)
        if len(parts) != 3:
            raise TemplateError(f"bad condition clause {clause!r}")
        lhs, op, rhs = parts
        try:
            l = eval_numeric(parse_infix(lhs), env)
            r = eval_numeric(parse_infix(rhs), env)
        except (ParseError, DomainError, UnboundVariable) as exc:
            raise TemplateError(f"bad condition {condition!r}: {exc}") from None
        eq = abs(l - r) <= 1e-9
        ok = {
            "=": eq, "==": eq, "!=": not eq,
            "<": l < r and not eq, "<=": l < r or eq,
            ">": l > r and not eq, ">=": l > r or eq,
        }[op]
        if not ok:
            return False
    return True


def _draw_one(spec: VariableSpec, rng: SplitMix64) -> Expr:
    if spec.kind == "int":
        return Number(Fraction(rng.randint(spec.min, spec.max)))
    if spec.kind == "rational":
        return Number(rng.fraction(spec.min, spec.max, spec.denominator_max))
    return rng.choice(spec.choices)


def _excluded(spec: VariableSpec, value: Expr) -> bool:
    if not spec.exclude:
        return False
    try:
        v = _value_of(value)
    except (DomainError, UnboundVariable):
        return False
    return any(abs(v - float(x)) <= 1e-12 for x in spec.exclude)


def draw_variables(specs: tuple[VariableSpec, ...] | list, seed: int) -> dict[str, Expr]:
    """Deterministically draw a satisfying assignment, or raise
    ConstraintUnsatisfiable after MAX_DRAW_ATTEMPTS rejections."""
    rng = SplitMix64(seed)
    conditions = [s.condition for s in specs if s.condition]
    for _ in range(MAX_DRAW_ATTEMPTS):
        bindings: dict[str, Expr] = {}
        ok = True
        for spec in specs:
            value = _draw_one(spec, rng)
            if _excluded(spec, value):
                ok = False
                break
            bindings[spec.name] = value
        if not ok:
            continue
        if all(_holds(c, bindings) for c in conditions):
            return bindings
    raise ConstraintUnsatisfiable(
        f"no satisfying assignment in {MAX_DRAW_ATTEMPTS} attempts"
    )


def _render_value(e: Expr) -> str:
    return to_latex(simplify(e))


def _substitute_math(segment: str, bindings: dict[str, Expr]) -> str:
    # ${name} -> name, parse, substitute semantically, fold, re-render
    source = _PLACEHOLDER_RE.sub(lambda m: m.group(1), segment)
    ast = parse_latex(source)
    ast = substitute(ast, bindings)
    return to_latex(simplify(ast))


_MASK_RE = re.compile("\x00([a-zA-Z][a-zA-Z0-9_]*)\x00")


def _substitute_text(text: str, bindings: dict[str, Expr]) -> str:
    # the ${name} syntax contains a dollar sign, so placeholders are masked
    # before the $...$ math segments are located
    masked = _PLACEHOLDER_RE.sub(lambda m: "\x00" + m.group(1) + "\x00", text)

    def render(segment: str) -> str:
        return _MASK_RE.sub(lambda p: _render_value(bindings[p.group(1)]), segment)

    parts = []
    last = 0
    for m in MATH_SEGMENT_RE.finditer(masked):
        parts.append(render(masked[last:m.start()]))
        source = _MASK_RE.sub(lambda p: p.group(1), m.group(1))
        ast = substitute(parse_latex(source), bindings)
        parts.append("$" + to_latex(simplify(ast)) + "$")
        last = m.end()
    parts.append(render(masked[last:]))
    return "".join(parts)


def instantiate_template(
    t: QuestionTemplate, seed: int, created_at: str = EPOCH_ISO
) -> Question:
    bindings = draw_variables(t.variables, seed)
    stem = _substitute_text(t.stem_template, bindings)
    options = []
    correct_id = ""
    for i, ot in enumerate(t.option_templates):
        oid = chr(ord("A") + i)
        body_ast = None
        try:
            body_latex = _substitute_math(ot.body, bindings)
            body_ast = parse_latex(body_latex)
        except ParseError:
            # plain-text option body: textual substitution only
            body_latex = _PLACEHOLDER_RE.sub(
                lambda p: _render_value(bindings[p.group(1)]), ot.body
            )
        feedback = _substitute_text(ot.feedback, bindings)
        if ot.is_correct:
            correct_id = oid
        options.append(QuestionOption(oid, body_latex, feedback, ot.is_correct, body_ast))
    # id is a function of the drawn values, not the raw seed, so templates
    # without variables instantiate identically for every seed
    drawn = ",".join(f"{k}={to_latex(v)}" for k, v in sorted(bindings.items()))
    qid = str(uuid.uuid5(_NAMESPACE, f"{t.id}:{drawn}"))
    return Question(
        id=qid,
        stem=stem,
        options=tuple(options),
        correct_option_id=correct_id,
        topic=t.topic,
        difficulty=t.difficulty,
        provenance="authored",
        created_at=created_at,
    )
