"""Structured JSON-lines audit log.

One event per backend call, per validation, and per review decision, so
the line count of a run is auditable against its activity.
"""

from __future__ import annotations

import json
import threading
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

EVENT_KINDS = ("generate", "validate", "backend_error", "decision")


def _now_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass(frozen=True)
class AuditEvent:
    kind: str
    timestamp: str = field(default_factory=_now_iso)
    error_code: str | None = None
    detail: str | None = None
    prompt_metadata: dict | None = None
    latency_ms: float | None = None
    question_id: str | None = None
    disposition: str | None = None
    decision: str | None = None
    retry_call: int | None = None

    def __post_init__(self):
        if self.kind not in EVENT_KINDS:
            raise ValueError(f"unknown audit event kind {self.kind!r}")

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


class AuditLog:
    """Append-only writer; pass ``self.emit`` wherever an audit callback is
    accepted (generate_validated, the HTTP layer, the CLI)."""

    def __init__(self, path: str | Path, clock=None):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._clock = clock or _now_iso
        self.events_written = 0

    def emit(self, event: dict | AuditEvent) -> AuditEvent:
        if isinstance(event, dict):
            event = AuditEvent(timestamp=self._clock(), **event)
        line = json.dumps(event.to_dict(), sort_keys=True, ensure_ascii=False)
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8", newline="") as fh:
                fh.write(line + "\n")
            self.events_written += 1
        return event

    def read(self) -> list[dict]:
        if not self.path.exists():
            return []
        out = []
        with self.path.open(encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    out.append(json.loads(line))
        return out
