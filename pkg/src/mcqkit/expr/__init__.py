from .errors import ParseError
from .infix import parse_infix
from .latex import parse_latex, to_latex
from .markup import MarkupError, from_semantic_markup, to_semantic_markup
from .nodes import (
    Binary,
    Constant,
    Derivative,
    Expr,
    Function,
    Number,
    SourceSpan,
    SubstitutionError,
    Unary,
    Variable,
    depth,
    free_variables,
    node_count,
    num,
    substitute,
)

__all__ = [
    "Binary", "Constant", "Derivative", "Expr", "Function", "MarkupError",
    "Number", "ParseError", "SourceSpan", "SubstitutionError", "Unary",
    "Variable", "depth", "free_variables", "from_semantic_markup",
    "node_count", "num", "parse_infix", "parse_latex", "substitute",
    "to_latex", "to_semantic_markup",
]
