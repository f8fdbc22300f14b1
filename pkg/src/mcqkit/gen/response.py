"""Parse and validate structured generation payloads into Questions.

Total on arbitrary input: every failure maps to a classified BackendError,
never an unhandled exception.
"""

from __future__ import annotations

import json
import uuid

import jsonschema

from ..expr.errors import ParseError
from ..expr.latex import parse_latex
from ..model import MATH_SEGMENT_RE, EPOCH_ISO, Question, QuestionOption
from .errors import BackendError
from .schema import RESPONSE_SCHEMA

_NAMESPACE = uuid.UUID("9e107d9d-372b-4a30-b7a4-1f9f5f2a7a55")

_REQUIRED_QUESTION = ("stem", "options", "correct_option_id", "topic")
_REQUIRED_OPTION = ("id", "latex", "feedback", "is_correct")


def _is_unbalanced(raw: str) -> bool:
    """True when braces, brackets, or a string literal stay open at EOF."""
    depth = 0
    in_string = escaped = False
    for c in raw:
        if in_string:
            if escaped:
                escaped = False
            elif c == "\\":
                escaped = True
            elif c == '"':
                in_string = False
        elif c == '"':
            in_string = True
        elif c in "{[":
            depth += 1
        elif c in "}]":
            depth -= 1
    return in_string or depth > 0


def parse_response(raw: str) -> list[Question]:
    if not isinstance(raw, str) or not raw.strip():
        raise BackendError("Truncated", "empty payload")
    try:
        payload = json.loads(raw)
    except json.JSONDecodeError as exc:
        if _is_unbalanced(raw):
            raise BackendError("Truncated", f"payload ends early: {exc.msg}") from None
        raise BackendError("SchemaViolation", f"not valid JSON: {exc.msg}") from None

    if not isinstance(payload, dict) or not isinstance(payload.get("questions"), list):
        raise BackendError("SchemaViolation", "top-level 'questions' array missing")
    if not payload["questions"]:
        raise BackendError("SchemaViolation", "'questions' array is empty")

    questions = []
    for i, item in enumerate(payload["questions"]):
        questions.append(_parse_question(i, item))

    # belt-and-braces: anything the targeted checks missed
    try:
        jsonschema.validate(payload, RESPONSE_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise BackendError("SchemaViolation", exc.message) from None
    return questions


def _parse_question(i: int, item) -> Question:
    where = f"question {i}"
    if not isinstance(item, dict):
        raise BackendError("SchemaViolation", f"{where} is not an object")
    for key in _REQUIRED_QUESTION:
        if key not in item:
            raise BackendError("MissingField", f"{where} missing {key!r}")
    stem, options, topic = item["stem"], item["options"], item["topic"]
    if not isinstance(stem, str) or not isinstance(topic, str):
        raise BackendError("SchemaViolation", f"{where}: stem/topic must be strings")
    if not isinstance(options, list) or not 2 <= len(options) <= 8:
        raise BackendError("SchemaViolation", f"{where}: need 2..8 options")

    parsed_options = []
    seen_ids = set()
    for opt in options:
        if not isinstance(opt, dict):
            raise BackendError("SchemaViolation", f"{where}: option is not an object")
        for key in _REQUIRED_OPTION:
            if key not in opt:
                oid = opt.get("id", "?")
                raise BackendError(
                    "MissingField", f"{where} option {oid}: missing {key!r}"
                )
        oid = opt["id"]
        if not isinstance(oid, str) or len(oid) != 1 or not oid.isupper():
            raise BackendError("SchemaViolation", f"{where}: bad option id {oid!r}")
        if oid in seen_ids:
            raise BackendError("SchemaViolation", f"{where}: duplicate option id {oid}")
        seen_ids.add(oid)
        if not isinstance(opt["feedback"], str) or not opt["feedback"].strip():
            raise BackendError("MissingField", f"{where} option {oid}: missing 'feedback'")
        if not isinstance(opt["is_correct"], bool):
            raise BackendError("SchemaViolation", f"{where} option {oid}: bad is_correct")
        latex = opt["latex"]
        if not isinstance(latex, str) or not latex.strip():
            raise BackendError("SchemaViolation", f"{where} option {oid}: empty latex")
        try:
            ast = parse_latex(latex)
        except ParseError as exc:
            raise BackendError(
                "MathParseError",
                f"{where} option {oid}: {exc.message} "
                f"(span {exc.span.start}..{exc.span.end})",
            ) from None
        parsed_options.append(
            QuestionOption(oid, latex, opt["feedback"], opt["is_correct"], ast)
        )

    correct_ids = [o.id for o in parsed_options if o.is_correct]
    declared = item["correct_option_id"]
    if len(correct_ids) != 1:
        raise BackendError(
            "AmbiguousCorrect", f"{where}: {len(correct_ids)} options marked correct"
        )
    if declared != correct_ids[0]:
        raise BackendError(
            "AmbiguousCorrect",
            f"{where}: correct_option_id {declared!r} disagrees with flags",
        )

    for seg in MATH_SEGMENT_RE.findall(stem):
        try:
            parse_latex(seg)
        except ParseError as exc:
            raise BackendError(
                "MathParseError", f"{where} stem math {seg!r}: {exc.message}"
            ) from None

    qid = str(uuid.uuid5(_NAMESPACE, json.dumps(item, sort_keys=True)))
    return Question(
        id=qid,
        stem=stem,
        options=tuple(parsed_options),
        correct_option_id=declared,
        topic=topic,
        provenance="generated",
        created_at=EPOCH_ISO,
    )
