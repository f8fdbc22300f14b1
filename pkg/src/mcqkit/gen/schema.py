"""Canonical response schema for generated question payloads.

The layout is documented bit-exact in docs/schema.md; both the mock and
any HTTP backend must emit it.
"""

from __future__ import annotations

import json

RESPONSE_SCHEMA: dict = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["questions"],
    "additionalProperties": False,
    "properties": {
        "questions": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["stem", "options", "correct_option_id", "topic"],
                "additionalProperties": False,
                "properties": {
                    "stem": {"type": "string", "minLength": 1},
                    "topic": {"type": "string"},
                    "correct_option_id": {"type": "string", "pattern": "^[A-Z]$"},
                    "options": {
                        "type": "array",
                        "minItems": 2,
                        "maxItems": 8,
                        "items": {
                            "type": "object",
                            "required": ["id", "latex", "feedback", "is_correct"],
                            "additionalProperties": False,
                            "properties": {
                                "id": {"type": "string", "pattern": "^[A-Z]$"},
                                "latex": {"type": "string", "minLength": 1},
                                "feedback": {"type": "string", "minLength": 1},
                                "is_correct": {"type": "boolean"},
                            },
                        },
                    },
                },
            },
        }
    },
}


def schema_text() -> str:
    return json.dumps(RESPONSE_SCHEMA, indent=2, sort_keys=True)
