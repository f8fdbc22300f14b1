"""Failure taxonomy for the generation backend and response parsing."""

from __future__ import annotations

from dataclasses import dataclass

# kinds that a retry can plausibly fix; everything else needs a changed
# prompt or a human
RETRIABLE_KINDS = frozenset({"RateLimited", "Timeout", "TransportError"})

KINDS = frozenset(
    {
        "SchemaViolation",
        "MissingField",
        "AmbiguousCorrect",
        "MathParseError",
        "Truncated",
        "RateLimited",
        "Timeout",
        "ModelError",
        "TransportError",
    }
)


@dataclass(frozen=True)
class BackendError(Exception):
    kind: str
    detail: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown error kind {self.kind!r}")

    @property
    def retriable(self) -> bool:
        return self.kind in RETRIABLE_KINDS

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}" if self.detail else self.kind


class BackendExhausted(RuntimeError):
    """Every generation attempt failed at the backend level."""

    def __init__(self, message: str, errors: list[BackendError] | None = None):
        super().__init__(message)
        self.errors = errors or []
