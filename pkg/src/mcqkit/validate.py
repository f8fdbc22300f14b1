"""Validation workflow: structural checks, key-uniqueness via the math
engine, and the bounded adjust-prompt-and-regenerate loop."""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field, replace
from typing import Callable

from .engine.equivalence import EquivalencePolicy, Verdict, equivalent
from .engine.errors import DomainError, NotRepresentable, UnboundVariable
from .engine.exact import eval_exact
from .expr.errors import ParseError
from .expr.latex import parse_latex
from .gen.backends import GenerationBackend, RetryPolicy, generate_with_retry
from .gen.errors import BackendError, BackendExhausted
from .gen.prompts import PromptBundle, PromptSpec, build_prompt
from .gen.response import parse_response
from .model import Question

FEEDBACK_ADJUST_CLAUSE = "Provide detailed feedback for each option."
DISTINCT_DISTRACTORS_CLAUSE = (
    "All distractors must be mathematically distinct from each other."
)

_EXACT_ASK_RE = re.compile(r"exact value of \$(.+?)\$")


@dataclass(frozen=True)
class Uniqueness:
    kind: str  # unique | duplicate_key | no_correct | inconclusive
    option_ids: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {"kind": self.kind, "option_ids": list(self.option_ids)}


UNIQUE = Uniqueness("unique")


@dataclass(frozen=True)
class OptionVerdict:
    verdict: Verdict
    exact_latex: str | None = None  # option value when exactly computable

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.kind,
            "reason": self.verdict.reason,
            "exact": self.exact_latex,
        }


@dataclass(frozen=True)
class ValidationReport:
    question_id: str
    structural_issues: tuple[str, ...]
    option_verdicts: dict[str, OptionVerdict]
    uniqueness: Uniqueness
    feedback_ok: bool
    disposition: str  # accept | regenerate | human_review
    reasons: tuple[str, ...] = ()
    key_latex: str = ""

    @property
    def accepted(self) -> bool:
        return self.disposition == "accept"

    def to_dict(self) -> dict:
        return {
            "question_id": self.question_id,
            "structural_issues": list(self.structural_issues),
            "option_verdicts": {k: v.to_dict() for k, v in self.option_verdicts.items()},
            "uniqueness": self.uniqueness.to_dict(),
            "feedback_ok": self.feedback_ok,
            "disposition": self.disposition,
            "reasons": list(self.reasons),
            "key_latex": self.key_latex,
        }


@dataclass(frozen=True)
class LoopPolicy:
    max_attempts: int = 3
    equivalence: EquivalencePolicy = field(default_factory=EquivalencePolicy)

    def __post_init__(self):
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")


def _exact_latex(expr) -> str | None:
    from .engine.simplify import exact_to_expr
    from .expr.latex import to_latex

    try:
        return to_latex(exact_to_expr(eval_exact(expr)))
    except (NotRepresentable, DomainError, UnboundVariable):
        return None


def check_uniqueness(
    q: Question, policy: EquivalencePolicy | None = None
) -> tuple[Uniqueness, dict[str, OptionVerdict], list[str]]:
    """Equivalence of every distractor against the key, plus pairwise
    distractor distinctness (reported as structural issues)."""
    policy = policy or EquivalencePolicy()
    issues: list[str] = []
    correct = [o for o in q.options if o.is_correct]
    if not correct:
        return Uniqueness("no_correct"), {}, issues
    key = correct[0]
    if key.body_ast is None:
        issues.append(f"key option {key.id} is not mathematical")
        return Uniqueness("inconclusive", (key.id,)), {}, issues

    verdicts: dict[str, OptionVerdict] = {}
    duplicates: list[str] = []
    inconclusive_ids: list[str] = []
    distractors = [o for o in q.options if not o.is_correct]
    for o in distractors:
        if o.body_ast is None:
            # plain-text distractor: distinct unless byte-equal to the key
            if o.body_latex == key.body_latex:
                duplicates.append(o.id)
            continue
        v = equivalent(o.body_ast, key.body_ast, policy)
        verdicts[o.id] = OptionVerdict(v, _exact_latex(o.body_ast))
        if v.is_equivalent:
            duplicates.append(o.id)
        elif v.is_inconclusive:
            inconclusive_ids.append(o.id)

    # pairwise distractor distinctness
    math_distractors = [o for o in distractors if o.body_ast is not None]
    for i, a in enumerate(math_distractors):
        for b in math_distractors[i + 1:]:
            v = equivalent(a.body_ast, b.body_ast, policy)
            if v.is_equivalent:
                issues.append(f"distractors {a.id} and {b.id} are equivalent")

    if duplicates:
        uniqueness = Uniqueness("duplicate_key", tuple(duplicates))
    elif inconclusive_ids:
        uniqueness = Uniqueness("inconclusive", tuple(inconclusive_ids))
    else:
        uniqueness = UNIQUE
    return uniqueness, verdicts, issues


def _key_exact_check(q: Question) -> str | None:
    """For stems of the form "... exact value of $f(c)$ ...", confirm the
    key matches the engine's exact value. Returns an issue string or None."""
    m = _EXACT_ASK_RE.search(q.stem)
    if not m:
        return None
    try:
        ask = parse_latex(m.group(1))
    except ParseError:
        return None
    try:
        expected = eval_exact(ask)
    except (NotRepresentable, UnboundVariable):
        return None  # not machine-decidable; uniqueness checks still apply
    except DomainError as exc:
        return f"stem asks for an undefined value: {exc}"
    key = next((o for o in q.options if o.is_correct), None)
    if key is None or key.body_ast is None:
        return None
    try:
        actual = eval_exact(key.body_ast)
    except (NotRepresentable, DomainError, UnboundVariable):
        return None
    if actual != expected:
        return "key fails exact check against the stem's ask"
    return None


def validate(q: Question, policy: LoopPolicy | None = None) -> ValidationReport:
    policy = policy or LoopPolicy()
    issues = list(q.structural_issues())
    feedback_ok = all(o.feedback.strip() for o in q.options)
    key_issue = _key_exact_check(q)
    if key_issue:
        issues.append(key_issue)
    uniqueness, verdicts, uniq_issues = check_uniqueness(q, policy.equivalence)
    issues.extend(uniq_issues)

    reasons: list[str] = list(issues)
    if not feedback_ok:
        reasons.append("empty feedback on at least one option")
    if uniqueness.kind == "duplicate_key":
        reasons.append(
            "options " + ", ".join(uniqueness.option_ids) + " are equivalent to the key"
        )
    elif uniqueness.kind == "no_correct":
        reasons.append("no option is marked correct")

    has_inconclusive = uniqueness.kind == "inconclusive" or any(
        v.verdict.is_inconclusive for v in verdicts.values()
    )
    if not issues and uniqueness.kind == "unique" and feedback_ok and not has_inconclusive:
        disposition = "accept"
    elif has_inconclusive:
        # regeneration cannot fix a sampling-domain limitation; a human can
        disposition = "human_review"
        reasons.append("equivalence inconclusive for: " + ", ".join(
            sorted({*uniqueness.option_ids,
                    *(k for k, v in verdicts.items() if v.verdict.is_inconclusive)})))
    else:
        disposition = "regenerate"

    key = next((o for o in q.options if o.is_correct), None)
    return ValidationReport(
        question_id=q.id,
        structural_issues=tuple(issues),
        option_verdicts=verdicts,
        uniqueness=uniqueness,
        feedback_ok=feedback_ok,
        disposition=disposition,
        reasons=tuple(reasons),
        key_latex=key.body_latex if key else "",
    )


def adjust_prompt(spec: PromptSpec, report: ValidationReport) -> PromptSpec:
    """Append targeted clauses for the report's failures; idempotent."""
    from .gen.prompts import UNIQUENESS_CLAUSE

    out = spec
    if report.uniqueness.kind == "duplicate_key":
        out = out.with_clause(UNIQUENESS_CLAUSE) if not out.uniqueness_clause else out
        out = out.with_clause(
            f"Do not include any option equivalent to {report.key_latex}."
        )
    if not report.feedback_ok:
        out = out.with_clause(FEEDBACK_ADJUST_CLAUSE)
    if any("distractors" in issue and "equivalent" in issue
           for issue in report.structural_issues):
        out = out.with_clause(DISTINCT_DISTRACTORS_CLAUSE)
    return out


@dataclass
class AttemptRecord:
    attempt: int
    bundle: PromptBundle
    prompt_metadata: dict


@dataclass
class ValidatedBatch:
    accepted: list[tuple[Question, ValidationReport]]
    rejected: list[tuple[Question | str, str]]
    attempts_used: int
    attempt_records: list[AttemptRecord] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "accepted": [
                {"question": q.to_dict(), "report": r.to_dict()}
                for q, r in self.accepted
            ],
            "rejected": [
                {
                    "question": item.to_dict() if isinstance(item, Question) else item,
                    "reason": reason,
                }
                for item, reason in self.rejected
            ],
            "attempts_used": self.attempts_used,
            "attempts": [
                {"attempt": rec.attempt, "prompt_metadata": rec.prompt_metadata}
                for rec in self.attempt_records
            ],
        }


def generate_validated(
    spec: PromptSpec,
    backend: GenerationBackend,
    policy: LoopPolicy | None = None,
    audit: Callable[[dict], None] | None = None,
    retry_policy: RetryPolicy | None = None,
    sleep: Callable[[float], None] = time.sleep,
) -> ValidatedBatch:
    """Bounded generate -> parse -> validate -> adjust loop.

    Transport retries (handled inside generate_with_retry) consume no
    attempt; parse and validation failures consume one each. Raises
    BackendExhausted when every attempt died at the backend.
    """
    policy = policy or LoopPolicy()
    emit = audit or (lambda event: None)
    accepted: list[tuple[Question, ValidationReport]] = []
    rejected: list[tuple[Question | str, str]] = []
    records: list[AttemptRecord] = []
    backend_failures: list[BackendError] = []
    cur = spec
    attempts = 0

    while len(accepted) < spec.count and attempts < policy.max_attempts:
        attempts += 1
        need = spec.count - len(accepted)
        attempt_spec = replace(cur, count=need)
        bundle = build_prompt(attempt_spec)
        meta = attempt_spec.metadata() | {"attempt": attempts}
        records.append(AttemptRecord(attempts, bundle, meta))

        def on_error(err: BackendError, call_no: int, _meta=meta):
            emit({"kind": "backend_error", "error_code": err.kind,
                  "detail": err.detail, "prompt_metadata": _meta,
                  "retry_call": call_no})

        started = time.monotonic()
        try:
            raw = generate_with_retry(
                backend, bundle, retry_policy, sleep=sleep, on_error=on_error
            )
        except BackendError as err:
            backend_failures.append(err)
            continue
        latency_ms = round((time.monotonic() - started) * 1000, 3)

        try:
            questions = parse_response(raw)
        except BackendError as err:
            # the call's single audit event carries the parse failure
            emit({"kind": "backend_error", "error_code": err.kind,
                  "detail": err.detail, "prompt_metadata": meta})
            if err.kind == "MissingField" and "feedback" in err.detail:
                cur = cur.with_clause(FEEDBACK_ADJUST_CLAUSE)
            continue
        emit({"kind": "generate", "prompt_metadata": meta,
              "latency_ms": latency_ms})

        for q in questions:
            if len(accepted) >= spec.count:
                break
            report = validate(q, policy)
            emit({"kind": "validate", "question_id": q.id,
                  "disposition": report.disposition, "prompt_metadata": meta})
            if report.accepted:
                accepted.append((_with_meta(q, attempt_spec), report))
            elif report.disposition == "human_review":
                rejected.append((q, "; ".join(report.reasons) or "needs human review"))
            else:
                rejected.append((q, "; ".join(report.reasons) or "validation failed"))
                cur = adjust_prompt(cur, report)

    if not accepted and backend_failures and len(backend_failures) == attempts:
        raise BackendExhausted(
            f"all {attempts} attempts failed at the backend", backend_failures
        )
    return ValidatedBatch(accepted, rejected, attempts, records)


def _with_meta(q: Question, spec: PromptSpec) -> Question:
    return replace(
        q,
        topic=q.topic or spec.topic,
        difficulty=spec.difficulty,
        distractor_strategies=tuple(spec.distractor_strategies),
    )
