"""Decide mathematical equivalence: exact comparison when both sides stay
in the exact field, seeded random-point sampling otherwise."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..expr.nodes import Expr, free_variables
from ..rng import SplitMix64
from .errors import DomainError, NotRepresentable, UnboundVariable, UnsupportedDerivative
from .exact import eval_exact
from .numeric import eval_numeric


@dataclass(frozen=True)
class EquivalencePolicy:
    sample_count: int = 16
    min_valid_points: int = 8
    domain_low: float = -3.0
    domain_high: float = 3.0
    abs_tol: float = 1e-9
    rel_tol: float = 1e-9
    seed: int = 42

    def __post_init__(self):
        if not (self.sample_count >= self.min_valid_points >= 1):
            raise ValueError("need sample_count >= min_valid_points >= 1")
        if not self.domain_low < self.domain_high:
            raise ValueError("empty sampling domain")
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class Verdict:
    kind: str  # "equivalent" | "distinct" | "inconclusive"
    reason: str = ""

    @property
    def is_equivalent(self) -> bool:
        return self.kind == "equivalent"

    @property
    def is_distinct(self) -> bool:
        return self.kind == "distinct"

    @property
    def is_inconclusive(self) -> bool:
        return self.kind == "inconclusive"


EQUIVALENT = Verdict("equivalent")
DISTINCT = Verdict("distinct")


def inconclusive(reason: str) -> Verdict:
    return Verdict("inconclusive", reason)


def _close(x: float, y: float, policy: EquivalencePolicy) -> bool:
    return abs(x - y) <= policy.abs_tol + policy.rel_tol * max(abs(x), abs(y))


def equivalent(a: Expr, b: Expr, policy: EquivalencePolicy | None = None) -> Verdict:
    policy = policy or EquivalencePolicy()
    vars_ = sorted(free_variables(a) | free_variables(b))

    if not vars_:
        try:
            va, vb = eval_exact(a), eval_exact(b)
            return EQUIVALENT if va == vb else DISTINCT
        except NotRepresentable:
            pass
        except DomainError as exc:
            return inconclusive(f"domain error in exact evaluation: {exc}")
        except (UnboundVariable, UnsupportedDerivative) as exc:
            return inconclusive(str(exc))
        try:
            xa, xb = eval_numeric(a, {}), eval_numeric(b, {})
        except DomainError as exc:
            return inconclusive(f"domain error in closed evaluation: {exc}")
        except (UnboundVariable, UnsupportedDerivative, ValueError) as exc:
            return inconclusive(str(exc))
        return EQUIVALENT if _close(xa, xb, policy) else DISTINCT

    rng = SplitMix64(policy.seed)
    valid = 0
    for _ in range(policy.sample_count):
        env = {v: rng.uniform(policy.domain_low, policy.domain_high) for v in vars_}
        try:
            xa = eval_numeric(a, env)
            xb = eval_numeric(b, env)
        except DomainError:
            continue
        except (UnboundVariable, UnsupportedDerivative, ValueError) as exc:
            return inconclusive(str(exc))
        valid += 1
        if not _close(xa, xb, policy):
            return DISTINCT
    if valid < policy.min_valid_points:
        return inconclusive(
            f"only {valid} common-domain points (need {policy.min_valid_points})"
        )
    return EQUIVALENT
