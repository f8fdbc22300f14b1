"""Bank reporting: a summary CSV plus rendered figures.

Writes report.csv, status_distribution.png, and verdict_breakdown.png
into the output directory.
"""

from __future__ import annotations

import csv
from collections import Counter
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .bank import Bank, STATUSES

_CSV_FIELDS = (
    "id", "topic", "difficulty", "status", "disposition",
    "option_count", "uniqueness", "reviewer_note",
)


def _row(record) -> dict:
    report = record.validation_report or {}
    return {
        "id": record.id,
        "topic": record.question.topic,
        "difficulty": record.question.difficulty,
        "status": record.status,
        "disposition": report.get("disposition", ""),
        "option_count": len(record.question.options),
        "uniqueness": (report.get("uniqueness") or {}).get("kind", ""),
        "reviewer_note": record.reviewer_note,
    }


def write_report(bank: Bank, out_dir: str | Path) -> dict[str, Path]:
    """Render all artifacts; returns {artifact name: path}."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    records = bank.list()
    rows = [_row(r) for r in records]

    csv_path = out / "report.csv"
    with csv_path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=_CSV_FIELDS)
        writer.writeheader()
        writer.writerows(rows)

    status_counts = Counter(r["status"] for r in rows)
    fig, ax = plt.subplots(figsize=(5, 3.2))
    values = [status_counts.get(s, 0) for s in STATUSES]
    ax.bar(STATUSES, values, color=["#7aa6c2", "#6aa84f", "#cc4125"])
    ax.set_ylabel("records")
    ax.set_title("Bank status distribution")
    for i, v in enumerate(values):
        ax.text(i, v, str(v), ha="center", va="bottom")
    fig.tight_layout()
    status_path = out / "status_distribution.png"
    fig.savefig(status_path, dpi=120)
    plt.close(fig)

    verdict_counts = Counter(r["uniqueness"] or "unreported" for r in rows)
    fig, ax = plt.subplots(figsize=(5, 3.2))
    labels = sorted(verdict_counts)
    ax.bar(labels, [verdict_counts[k] for k in labels], color="#8e7cc3")
    ax.set_ylabel("records")
    ax.set_title("Key-uniqueness verdicts")
    ax.tick_params(axis="x", rotation=20)
    fig.tight_layout()
    verdict_path = out / "verdict_breakdown.png"
    fig.savefig(verdict_path, dpi=120)
    plt.close(fig)

    return {"csv": csv_path, "status_figure": status_path,
            "verdict_figure": verdict_path}
