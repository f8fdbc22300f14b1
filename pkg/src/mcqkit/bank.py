"""Append-only JSON-lines question bank with last-writer-wins reload.

One UTF-8 JSON object per LF-terminated line. Updates append a superseding
line for the same question id; loading keeps the latest. Records are
serialized canonically (sorted keys) so save -> load -> save is
byte-identical.
"""

from __future__ import annotations

import json
import logging
import threading
from dataclasses import dataclass, replace
from pathlib import Path

from .model import Question

log = logging.getLogger(__name__)

STATUSES = ("candidate", "approved", "rejected")


class BankError(ValueError):
    pass


class IllegalTransition(BankError):
    """Raised for any status change out of candidate -> approved|rejected."""


@dataclass(frozen=True)
class BankRecord:
    question: Question
    status: str = "candidate"
    reviewer_note: str = ""
    validation_report: dict | None = None
    prompt_metadata: dict | None = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise BankError(f"unknown status {self.status!r}")
        if self.status == "approved" and self.validation_report is not None:
            if self.validation_report.get("disposition") != "accept":
                raise BankError("approved records must carry an accepting report")

    @property
    def id(self) -> str:
        return self.question.id

    def decide(self, decision: str, note: str = "") -> "BankRecord":
        if decision not in ("approved", "rejected"):
            raise BankError(f"decision must be approved or rejected, got {decision!r}")
        if self.status != "candidate":
            raise IllegalTransition(
                f"record {self.id} is already {self.status}; only candidates move"
            )
        return replace(self, status=decision, reviewer_note=note)

    def to_dict(self) -> dict:
        return {
            "question": self.question.to_dict(),
            "status": self.status,
            "reviewer_note": self.reviewer_note,
            "validation_report": self.validation_report,
            "prompt_metadata": self.prompt_metadata,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BankRecord":
        return cls(
            question=Question.from_dict(data["question"]),
            status=data.get("status", "candidate"),
            reviewer_note=data.get("reviewer_note", ""),
            validation_report=data.get("validation_report"),
            prompt_metadata=data.get("prompt_metadata"),
        )


def _canonical_line(record: BankRecord) -> str:
    return json.dumps(record.to_dict(), sort_keys=True, ensure_ascii=False) + "\n"


class Bank:
    """In-memory view over the JSONL file; all mutations serialize on one
    writer lock and append before updating memory."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._records: dict[str, BankRecord] = {}
        self.skipped_lines = 0
        if self.path.exists():
            self._load()

    def _load(self) -> None:
        with self.path.open(encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    rec = BankRecord.from_dict(json.loads(line))
                    self._records[rec.id] = rec
                except (json.JSONDecodeError, KeyError, TypeError, BankError) as exc:
                    self.skipped_lines += 1
                    log.warning("%s:%d: skipping corrupted line (%s)", self.path, lineno, exc)

    def __len__(self) -> int:
        return len(self._records)

    def get(self, record_id: str) -> BankRecord | None:
        return self._records.get(record_id)

    def list(self, status: str | None = None) -> list[BankRecord]:
        records = self._records.values()
        if status is not None:
            if status not in STATUSES:
                raise BankError(f"unknown status {status!r}")
            records = [r for r in records if r.status == status]
        return sorted(records, key=lambda r: r.id)

    def append(self, record: BankRecord) -> str:
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8", newline="") as fh:
                fh.write(_canonical_line(record))
            self._records[record.id] = record
        return record.id

    def decide(self, record_id: str, decision: str, note: str = "") -> BankRecord:
        with self._lock:
            record = self._records.get(record_id)
            if record is None:
                raise KeyError(record_id)
            updated = record.decide(decision, note)
            with self.path.open("a", encoding="utf-8", newline="") as fh:
                fh.write(_canonical_line(updated))
            self._records[record_id] = updated
        return updated

    def save_as(self, path: str | Path) -> None:
        """Compacted canonical rewrite: one line per live record."""
        out = Path(path)
        out.parent.mkdir(parents=True, exist_ok=True)
        with out.open("w", encoding="utf-8", newline="") as fh:
            for record in self.list():
                fh.write(_canonical_line(record))
