"""Built-in item catalog backing the deterministic mock backend.

Items ask for the exact value of a trig function at a pi/6- or pi/4-lattice
angle; keys are computed through the exact evaluator, distractors through
common-error transforms (sign flip, cofunction swap, reciprocal, doubled
angle), filtered so all four options are pairwise exactly distinct.
"""

from __future__ import annotations

from fractions import Fraction

from ..engine.errors import DomainError, NotRepresentable
from ..engine.exact import ExactValue, eval_exact
from ..engine.simplify import exact_to_expr
from ..expr.latex import to_latex
from ..expr.nodes import Binary, Constant, Expr, Function, Number
from ..rng import SplitMix64

F = Fraction

# angles as fractions of pi, chosen to avoid zeros and poles per function
_ANGLES: dict[str, tuple[Fraction, ...]] = {
    "sin": (F(1, 6), F(1, 4), F(1, 3), F(2, 3), F(5, 6)),
    "cos": (F(1, 6), F(1, 4), F(1, 3), F(3, 4), F(1)),
    "tan": (F(1, 6), F(1, 4), F(1, 3), F(3, 4), F(5, 6)),
    "cot": (F(1, 6), F(1, 4), F(1, 3), F(2, 3), F(3, 4)),
    "sec": (F(1, 6), F(1, 4), F(1, 3), F(2, 3), F(1)),
    "csc": (F(1, 6), F(1, 4), F(1, 3), F(2, 3), F(5, 6)),
}

_COFUNCTION = {"sin": "cos", "cos": "sin", "tan": "cot",
               "cot": "tan", "sec": "csc", "csc": "sec"}

_FUNCTION_WORDS = {
    "sine": "sin", "cosine": "cos", "tangent": "tan",
    "cotangent": "cot", "secant": "sec", "cosecant": "csc",
}

_ERROR_NOTES = {
    "sign": "flipping the sign of the true value",
    "cofunction": "evaluating the cofunction instead",
    "reciprocal": "taking the reciprocal of the true value",
    "doubled": "doubling the angle before evaluating",
    "halved": "halving the true value",
    "double_value": "doubling the true value instead of the angle",
    "neg_reciprocal": "taking the negative reciprocal of the true value",
}


def _angle_expr(t: Fraction) -> Expr:
    pi = Constant("pi")
    if t == 1:
        return pi
    if t.numerator == 1:
        return Binary("div", pi, Number(F(t.denominator)))
    return Binary("div", Binary("mul", Number(F(t.numerator)), pi), Number(F(t.denominator)))


def _call(fn: str, t: Fraction) -> Expr:
    return Function(fn, _angle_expr(t))


def _value(fn: str, t: Fraction) -> ExactValue:
    return eval_exact(_call(fn, t))


def _latex(v: ExactValue) -> str:
    return to_latex(exact_to_expr(v))


def equivalent_form_latex(v: ExactValue) -> str:
    """An unsimplified expression exactly equal to ``v`` (for duplicate-key
    fault injection), e.g. sqrt(2)/2 -> 1/sqrt(2)."""
    if v.a == 0 and v.b != 0:
        # b*sqrt(n) == (b*n)/sqrt(n)
        numer = Number(v.b * v.n)
        return to_latex(Binary("div", numer, Function("sqrt", Number(F(v.n)))))
    doubled = exact_to_expr(ExactValue(2 * v.a, 2 * v.b, v.n))
    return to_latex(Binary("div", doubled, Number(F(2))))


def _distractors(fn: str, t: Fraction, key: ExactValue) -> list[tuple[ExactValue, str]]:
    candidates: list[tuple[ExactValue, str]] = [(-key, "sign")]
    try:
        candidates.append((_value(_COFUNCTION[fn], t), "cofunction"))
    except (DomainError, NotRepresentable):
        pass
    if not key.is_zero():
        candidates.append((key.inverse(), "reciprocal"))
    try:
        candidates.append((_value(fn, 2 * t), "doubled"))
    except (DomainError, NotRepresentable):
        pass
    candidates.append((key * ExactValue(F(1, 2)), "halved"))
    # fallbacks for angles where the transforms above collide with the
    # key or each other (e.g. tan(pi/4): self-reciprocal, doubled-angle pole)
    candidates.append((key * ExactValue(F(2)), "double_value"))
    if not key.is_zero():
        candidates.append((-key.inverse(), "neg_reciprocal"))
    chosen: list[tuple[ExactValue, str]] = []
    seen = {key}
    for value, note in candidates:
        if value not in seen:
            chosen.append((value, note))
            seen.add(value)
        if len(chosen) == 3:
            break
    return chosen


def _item(fn: str, t: Fraction, topic: str, rng: SplitMix64) -> dict:
    key = _value(fn, t)
    distractors = _distractors(fn, t, key)
    angle_latex = to_latex(_angle_expr(t))
    fn_latex = to_latex(_call(fn, t))
    stem = f"What is the exact value of ${fn_latex}$?"
    key_feedback = (
        f"Correct. Evaluating at ${angle_latex}$ with the exact trig table "
        f"gives ${_latex(key)}$."
    )
    bodies = [(_latex(key), key_feedback, True)]
    for value, note in distractors:
        feedback = (
            f"Incorrect. This value results from {_ERROR_NOTES[note]}; "
            f"the exact value is ${_latex(key)}$."
        )
        bodies.append((_latex(value), feedback, False))
    order = list(range(4))
    # deterministic shuffle
    for i in range(3, 0, -1):
        j = rng.randint(0, i)
        order[i], order[j] = order[j], order[i]
    options = []
    correct_id = ""
    for pos, idx in enumerate(order):
        oid = chr(ord("A") + pos)
        latex, feedback, is_correct = bodies[idx]
        if is_correct:
            correct_id = oid
        options.append(
            {"id": oid, "latex": latex, "feedback": feedback, "is_correct": is_correct}
        )
    return {
        "stem": stem,
        "options": options,
        "correct_option_id": correct_id,
        "topic": topic,
    }


def catalog_payload(
    topic: str,
    count: int,
    function_constraints: tuple[str, ...] = (),
    seed: int = 0,
) -> dict:
    """Deterministic payload of ``count`` catalog questions."""
    fns = [_FUNCTION_WORDS.get(w.lower(), w.lower()) for w in function_constraints]
    fns = [f for f in fns if f in _ANGLES] or ["sin", "cos", "cot"]
    rng = SplitMix64(seed)
    questions = []
    for i in range(count):
        fn = fns[i % len(fns)]
        angles = _ANGLES[fn]
        t = angles[rng.randint(0, len(angles) - 1)]
        questions.append(_item(fn, t, topic, rng))
    return {"questions": questions}
