"""Structured prompt construction for the generation backend."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .schema import schema_text

STRATEGIES = (
    "sign-inversion",
    "incorrect-identity",
    "evaluation-method-error",
    "stepwise-error",
)

DIFFICULTY_CLAUSES = {
    "low": (
        "Ensure distractors are easily dismissed by students familiar "
        "with the concept."
    ),
    "medium": (
        "Ensure distractors are plausible at first glance but clearly "
        "incorrect on careful computation."
    ),
    "high": (
        "Ensure distractors reflect common stepwise errors such that they "
        "appear plausible without thorough computation."
    ),
}

UNIQUENESS_CLAUSE = (
    "Ensure only one answer evaluates to the correct result; all other "
    "responses should reflect common incorrect reasoning paths without "
    "coinciding with the correct value."
)

FEEDBACK_CLAUSE = (
    "Provide detailed feedback for each option that explains why the answer "
    "is right or wrong, including the correct method for solving each problem."
)

_STRATEGY_TEXT = {
    "sign-inversion": "sign inversion",
    "incorrect-identity": "incorrect identity use",
    "evaluation-method-error": "evaluation method errors",
    "stepwise-error": "stepwise computation errors",
}

SYSTEM_INSTRUCTIONS = (
    "You generate multiple choice mathematics assessment items. "
    "Respond with a single JSON object conforming exactly to the provided "
    "response schema: no prose, no markdown fences. Write every "
    "mathematical expression as LaTeX in the option \"latex\" fields and "
    "inside $...$ segments of the stem. Include feedback for every option."
)


@dataclass(frozen=True)
class PromptSpec:
    topic: str
    count: int = 3
    function_constraints: tuple[str, ...] = ()
    difficulty: str = "medium"
    distractor_strategies: tuple[str, ...] = STRATEGIES[:3]
    uniqueness_clause: bool = True
    extra_clauses: tuple[str, ...] = ()

    def __post_init__(self):
        if not 1 <= self.count <= 10:
            raise ValueError("count must be in 1..10")
        if self.difficulty not in DIFFICULTY_CLAUSES:
            raise ValueError(f"unknown difficulty {self.difficulty!r}")
        if not self.distractor_strategies:
            raise ValueError("at least one distractor strategy required")
        for s in self.distractor_strategies:
            if s not in STRATEGIES:
                raise ValueError(f"unknown strategy {s!r}")

    def with_clause(self, clause: str) -> "PromptSpec":
        if clause in self.extra_clauses:
            return self
        return replace(self, extra_clauses=self.extra_clauses + (clause,))

    def metadata(self) -> dict:
        return {
            "topic": self.topic,
            "count": self.count,
            "difficulty": self.difficulty,
            "function_constraints": list(self.function_constraints),
            "strategies": list(self.distractor_strategies),
            "clauses": self.clauses(),
        }

    def clauses(self) -> list[str]:
        out = [DIFFICULTY_CLAUSES[self.difficulty]]
        if self.uniqueness_clause:
            out.append(UNIQUENESS_CLAUSE)
        out.extend(self.extra_clauses)
        return out


@dataclass(frozen=True)
class PromptBundle:
    system_instructions: str
    user_prompt: str
    response_schema: str

    def to_dict(self) -> dict:
        return {
            "system_instructions": self.system_instructions,
            "prompt": self.user_prompt,
            "response_schema": self.response_schema,
        }


def build_prompt(spec: PromptSpec) -> PromptBundle:
    plural = "questions" if spec.count != 1 else "question"
    lines = [f"Generate {_count_words(spec.count)} multiple choice {plural} on {spec.topic}."]
    if spec.function_constraints:
        fns = ", ".join(spec.function_constraints)
        lines.append(
            "Each question should ask for the exact value of a trigonometric "
            f"function, using each of: {fns}."
        )
    strategies = ", ".join(_STRATEGY_TEXT[s] for s in spec.distractor_strategies)
    lines.append(
        "Distractors should be constructed based on common student errors "
        f"such as {strategies}."
    )
    lines.append(FEEDBACK_CLAUSE)
    lines.extend(spec.clauses())
    return PromptBundle(
        system_instructions=SYSTEM_INSTRUCTIONS,
        user_prompt="\n".join(lines),
        response_schema=schema_text(),
    )


_SMALL_COUNTS = {
    1: "one", 2: "two", 3: "three", 4: "four", 5: "five",
    6: "six", 7: "seven", 8: "eight", 9: "nine", 10: "ten",
}


def _count_words(n: int) -> str:
    return _SMALL_COUNTS.get(n, str(n))
