"""Runtime configuration with precedence: flags > environment > config
file > defaults. Documented in docs/config.md."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields
from pathlib import Path

_ENV_VARS = {
    "bank_path": "BANK_PATH",
    "audit_path": "AUDIT_PATH",
    "port": "PORT",
    "genai_endpoint": "GENAI_ENDPOINT",
    "genai_token": "GENAI_TOKEN",
    "genai_timeout_ms": "GENAI_TIMEOUT_MS",
}

_INT_KEYS = {"port", "genai_timeout_ms"}


@dataclass(frozen=True)
class Config:
    bank_path: str = "bank.jsonl"
    audit_path: str = "audit.jsonl"
    port: int = 8000
    genai_endpoint: str = ""
    genai_token: str = ""
    genai_timeout_ms: int = 30000

    @property
    def genai_timeout_s(self) -> float:
        return self.genai_timeout_ms / 1000.0


class ConfigError(ValueError):
    pass


def load_config(
    flags: dict | None = None,
    env: dict | None = None,
    config_path: str | Path | None = None,
) -> Config:
    """Merge the four sources; unknown file keys are an error, unknown
    flag keys are ignored (the CLI owns its namespace)."""
    env = os.environ if env is None else env
    known = {f.name for f in fields(Config)}
    merged: dict = {}

    if config_path:
        path = Path(config_path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc.msg}") from None
        if not isinstance(data, dict):
            raise ConfigError(f"config file {path} must hold a JSON object")
        for key, value in data.items():
            if key not in known:
                raise ConfigError(f"unknown config key {key!r} in {path}")
            merged[key] = value

    for key, var in _ENV_VARS.items():
        if var in env and env[var] != "":
            merged[key] = env[var]

    for key, value in (flags or {}).items():
        if key in known and value is not None:
            merged[key] = value

    for key in _INT_KEYS:
        if key in merged:
            try:
                merged[key] = int(merged[key])
            except (TypeError, ValueError):
                raise ConfigError(f"{key} must be an integer, got {merged[key]!r}") from None
    return Config(**merged)
