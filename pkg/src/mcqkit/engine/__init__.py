from .calculus import differentiate
from .equivalence import (
    DISTINCT,
    EQUIVALENT,
    EquivalencePolicy,
    Verdict,
    equivalent,
    inconclusive,
)
from .errors import (
    DomainError,
    NotRepresentable,
    UnboundVariable,
    UnsupportedDerivative,
)
from .exact import ExactValue, eval_exact, exact_sqrt
from .numeric import eval_numeric
from .simplify import exact_to_expr, simplify

__all__ = [
    "DISTINCT", "DomainError", "EQUIVALENT", "EquivalencePolicy", "ExactValue",
    "NotRepresentable", "UnboundVariable", "UnsupportedDerivative", "Verdict",
    "differentiate", "equivalent", "eval_exact", "eval_numeric", "exact_sqrt",
    "exact_to_expr", "inconclusive", "simplify",
]
