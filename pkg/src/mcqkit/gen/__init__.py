from .backends import (
    FAULT_BEHAVIORS,
    GenerationBackend,
    HttpBackend,
    MockBackend,
    RetryPolicy,
    generate_with_retry,
    http_generate,
)
from .catalog import catalog_payload
from .errors import BackendError, BackendExhausted, RETRIABLE_KINDS
from .prompts import (
    DIFFICULTY_CLAUSES,
    FEEDBACK_CLAUSE,
    PromptBundle,
    PromptSpec,
    STRATEGIES,
    UNIQUENESS_CLAUSE,
    build_prompt,
)
from .response import parse_response
from .schema import RESPONSE_SCHEMA, schema_text

__all__ = [
    "BackendError", "BackendExhausted", "DIFFICULTY_CLAUSES", "FAULT_BEHAVIORS",
    "FEEDBACK_CLAUSE", "GenerationBackend", "HttpBackend", "MockBackend",
    "PromptBundle", "PromptSpec", "RESPONSE_SCHEMA", "RETRIABLE_KINDS",
    "RetryPolicy", "STRATEGIES", "UNIQUENESS_CLAUSE", "build_prompt",
    "catalog_payload", "generate_with_retry", "http_generate",
    "parse_response", "schema_text",
]
