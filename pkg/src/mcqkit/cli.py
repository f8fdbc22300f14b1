"""Command line interface.

Exit codes: 0 success, 1 validation rejections present, 2 usage error,
3 backend exhaustion.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .audit import AuditLog
from .bank import Bank, BankRecord
from .config import Config, ConfigError, load_config
from .gen.backends import HttpBackend, MockBackend, RetryPolicy
from .gen.errors import BackendError, BackendExhausted
from .gen.prompts import STRATEGIES, PromptSpec
from .gen.response import parse_response
from .model import QuestionTemplate, instantiate_template
from .validate import LoopPolicy, generate_validated, validate

EXIT_OK = 0
EXIT_REJECTIONS = 1
EXIT_USAGE = 2
EXIT_BACKEND = 3


def _split_csv(value: str | None) -> tuple[str, ...]:
    if not value:
        return ()
    return tuple(part.strip() for part in value.split(",") if part.strip())


@click.group()
def main():
    """Generate, validate, bank, and serve multiple-choice math items."""


@main.command()
@click.option("--topic", required=True, help="Subject area for the questions.")
@click.option("--count", default=3, show_default=True, type=click.IntRange(1, 10))
@click.option("--difficulty", default="medium", show_default=True,
              type=click.Choice(["low", "medium", "high"]))
@click.option("--functions", default="", help="Comma-separated trig functions to use.")
@click.option("--strategies", default="",
              help=f"Comma-separated distractor strategies ({', '.join(STRATEGIES)}).")
@click.option("--backend", "backend_name", default="mock", show_default=True,
              type=click.Choice(["mock", "http"]))
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--fault-script", default="ok",
              help="Comma-separated mock behaviors, applied call by call.")
@click.option("--out", "out_path", default=None, help="Bank file to append to.")
@click.option("--audit", "audit_path", default=None, help="Audit log path.")
@click.option("--max-attempts", default=3, show_default=True, type=click.IntRange(1))
def generate(topic, count, difficulty, functions, strategies, backend_name,
             seed, fault_script, out_path, audit_path, max_attempts):
    """Generate validated questions and append accepted ones to the bank."""
    config = load_config({"bank_path": out_path, "audit_path": audit_path})
    try:
        spec = PromptSpec(
            topic=topic,
            count=count,
            function_constraints=_split_csv(functions),
            difficulty=difficulty,
            distractor_strategies=_split_csv(strategies) or STRATEGIES[:3],
        )
    except ValueError as exc:
        raise click.UsageError(str(exc))
    if backend_name == "mock":
        try:
            backend = MockBackend(
                seed=seed, fault_script=_split_csv(fault_script) or ("ok",),
                topic=topic, count=count,
                function_constraints=spec.function_constraints,
            )
        except ValueError as exc:
            raise click.UsageError(str(exc))
    else:
        if not config.genai_endpoint:
            raise click.UsageError(
                "http backend needs GENAI_ENDPOINT (env or config file)")
        backend = HttpBackend(
            endpoint=config.genai_endpoint, token=config.genai_token,
            timeout_s=config.genai_timeout_s,
        )
    audit = AuditLog(config.audit_path)
    bank = Bank(config.bank_path)
    try:
        batch = generate_validated(
            spec, backend, LoopPolicy(max_attempts=max_attempts),
            audit=audit.emit, retry_policy=RetryPolicy(jitter_seed=seed),
        )
    except BackendExhausted as exc:
        click.echo(f"backend exhausted: {exc}", err=True)
        for err in exc.errors:
            click.echo(f"  attempt error: {err.kind}: {err.detail}", err=True)
        sys.exit(EXIT_BACKEND)
    except BackendError as exc:
        click.echo(f"backend error: {exc.kind}: {exc.detail}", err=True)
        sys.exit(EXIT_BACKEND)
    for question, report in batch.accepted:
        bank.append(BankRecord(
            question=question,
            validation_report=report.to_dict(),
            prompt_metadata=spec.metadata(),
        ))
    click.echo(
        f"accepted {len(batch.accepted)} of {count} "
        f"in {batch.attempts_used} attempt(s); bank: {bank.path}"
    )
    for item, reason in batch.rejected:
        qid = item.id if hasattr(item, "id") else "?"
        click.echo(f"rejected {qid}: {reason}", err=True)
    sys.exit(EXIT_OK if len(batch.accepted) == count else EXIT_REJECTIONS)


@main.command("validate")
@click.option("--in", "in_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="JSON payload in the generation response format.")
@click.option("--report", "report_path", default=None,
              help="Where to write the JSON validation reports.")
def validate_cmd(in_path, report_path):
    """Validate questions from a response-format JSON file."""
    raw = Path(in_path).read_text(encoding="utf-8")
    try:
        questions = parse_response(raw)
    except BackendError as exc:
        click.echo(f"{exc.kind}: {exc.detail}", err=True)
        sys.exit(EXIT_REJECTIONS)
    reports = [validate(q) for q in questions]
    payload = [r.to_dict() for r in reports]
    if report_path:
        Path(report_path).write_text(
            json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    rejected = [r for r in reports if not r.accepted]
    for r in reports:
        line = f"{r.question_id}: {r.disposition}"
        if r.reasons:
            line += " (" + "; ".join(r.reasons) + ")"
        click.echo(line)
    sys.exit(EXIT_REJECTIONS if rejected else EXIT_OK)


@main.group()
def template():
    """Parameterized template operations."""


@template.command("instantiate")
@click.option("--template", "template_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--count", default=1, show_default=True, type=click.IntRange(1))
@click.option("--out", "out_path", default=None, help="JSONL output path (default stdout).")
def template_instantiate(template_path, seed, count, out_path):
    """Draw COUNT instances using seeds SEED..SEED+COUNT-1."""
    try:
        data = json.loads(Path(template_path).read_text(encoding="utf-8"))
        tmpl = QuestionTemplate.from_dict(data)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise click.UsageError(f"bad template file: {exc}")
    lines = []
    for s in range(seed, seed + count):
        q = instantiate_template(tmpl, s)
        lines.append(json.dumps(q.to_dict(), sort_keys=True, ensure_ascii=False))
    text = "\n".join(lines) + "\n"
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


@main.group("bank")
def bank_group():
    """Question bank inspection and export."""


@bank_group.command("list")
@click.option("--bank", "bank_path", default=None)
@click.option("--status", default=None,
              type=click.Choice(["candidate", "approved", "rejected"]))
def bank_list(bank_path, status):
    config = load_config({"bank_path": bank_path})
    bank = Bank(config.bank_path)
    for record in bank.list(status):
        click.echo(f"{record.id}  {record.status:9s}  {record.question.topic}")
    if bank.skipped_lines:
        click.echo(f"warning: skipped {bank.skipped_lines} corrupted line(s)", err=True)


@bank_group.command("export")
@click.option("--bank", "bank_path", default=None)
@click.option("--format", "fmt", default="json", show_default=True,
              type=click.Choice(["json", "csv"]))
@click.option("--out", "out_path", default=None, help="Output path (default stdout).")
def bank_export(bank_path, fmt, out_path):
    import csv as _csv
    import io

    config = load_config({"bank_path": bank_path})
    bank = Bank(config.bank_path)
    records = bank.list()
    if fmt == "json":
        text = json.dumps([r.to_dict() for r in records], indent=2,
                          sort_keys=True, ensure_ascii=False) + "\n"
    else:
        from .report import _CSV_FIELDS, _row

        buf = io.StringIO()
        writer = _csv.DictWriter(buf, fieldnames=_CSV_FIELDS)
        writer.writeheader()
        writer.writerows(_row(r) for r in records)
        text = buf.getvalue()
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


@main.command()
@click.option("--bank", "bank_path", default=None)
@click.option("--out", "out_dir", default="report_out", show_default=True)
def report(bank_path, out_dir):
    """Write a summary CSV and rendered figures for the bank."""
    from .report import write_report

    config = load_config({"bank_path": bank_path})
    bank = Bank(config.bank_path)
    artifacts = write_report(bank, out_dir)
    for name, path in artifacts.items():
        click.echo(f"{name}: {path}")


@main.command()
@click.option("--port", default=None, type=int)
@click.option("--bank", "bank_path", default=None)
@click.option("--config", "config_path", default=None,
              type=click.Path(exists=True, dir_okay=False))
def serve(port, bank_path, config_path):
    """Run the HTTP service."""
    import uvicorn

    from .api import create_app

    try:
        config = load_config({"port": port, "bank_path": bank_path},
                             config_path=config_path)
    except ConfigError as exc:
        raise click.UsageError(str(exc))
    app = create_app(config)
    uvicorn.run(app, host="127.0.0.1", port=config.port)


if __name__ == "__main__":
    main()
