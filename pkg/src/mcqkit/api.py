"""HTTP service over the generation, validation, and bank layers.

All bodies are JSON. Errors use {"code", "message", "detail"} with the
backend error taxonomy mapped onto 400/404/409/429/502.
"""

from __future__ import annotations

import html
import time
from pathlib import Path

import httpx
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import __version__
from .audit import AuditLog
from .bank import Bank, BankError, BankRecord, IllegalTransition
from .config import Config
from .gen.backends import HttpBackend, MockBackend, RetryPolicy
from .gen.errors import BackendError, BackendExhausted
from .gen.prompts import PromptSpec
from .model import Question
from .validate import LoopPolicy, ValidatedBatch, generate_validated, validate

_STATUS_BY_KIND = {
    "RateLimited": 429,
    "Timeout": 502,
    "TransportError": 502,
    "ModelError": 502,
    "SchemaViolation": 400,
    "MissingField": 400,
    "AmbiguousCorrect": 400,
    "MathParseError": 400,
    "Truncated": 400,
}


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, detail: str = ""):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail


def _error_response(status: int, code: str, message: str, detail: str = "") -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "detail": detail},
    )


def _spec_from(body: dict) -> PromptSpec:
    spec = body.get("spec")
    if not isinstance(spec, dict) or not spec.get("topic"):
        raise ApiError(400, "SchemaViolation", "body must carry spec.topic")
    try:
        return PromptSpec(
            topic=spec["topic"],
            count=int(spec.get("count", 3)),
            function_constraints=tuple(spec.get("function_constraints", ())),
            difficulty=spec.get("difficulty", "medium"),
            distractor_strategies=tuple(
                spec.get("distractor_strategies")
                or PromptSpec.__dataclass_fields__["distractor_strategies"].default
            ),
            extra_clauses=tuple(spec.get("extra_clauses", ())),
        )
    except (ValueError, TypeError) as exc:
        raise ApiError(400, "SchemaViolation", "invalid prompt spec", str(exc)) from None


def create_app(
    config: Config | None = None,
    bank: Bank | None = None,
    audit: AuditLog | None = None,
    transport: httpx.BaseTransport | None = None,
    sleep=None,
) -> FastAPI:
    """Service factory; tests inject bank/audit paths and an httpx
    transport for the http backend."""
    config = config or Config()
    bank = bank or Bank(config.bank_path)
    audit = audit or AuditLog(config.audit_path)
    app = FastAPI(title="mcqkit", version=__version__)
    sleep_fn = sleep if sleep is not None else time.sleep

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError):
        return _error_response(exc.status, exc.code, exc.message, exc.detail)

    @app.exception_handler(BackendError)
    async def _backend_error(request: Request, exc: BackendError):
        return _error_response(
            _STATUS_BY_KIND.get(exc.kind, 502), exc.kind, "backend error", exc.detail
        )

    @app.exception_handler(BackendExhausted)
    async def _exhausted(request: Request, exc: BackendExhausted):
        last = exc.errors[-1].kind if exc.errors else "ModelError"
        return _error_response(502, "BackendExhausted", str(exc), f"last error: {last}")

    def _backend_for(body: dict, spec: PromptSpec):
        name = body.get("backend", "mock")
        if name == "mock":
            return MockBackend(
                seed=int(body.get("seed", 0)),
                fault_script=tuple(body.get("fault_script", ("ok",))),
                topic=spec.topic,
                count=spec.count,
                function_constraints=spec.function_constraints,
            )
        if name == "http":
            if not config.genai_endpoint:
                raise ApiError(400, "SchemaViolation", "no generation endpoint configured")
            return HttpBackend(
                endpoint=config.genai_endpoint,
                token=config.genai_token,
                timeout_s=config.genai_timeout_s,
                transport=transport,
            )
        raise ApiError(400, "SchemaViolation", f"unknown backend {name!r}")

    def _run_batch(body: dict, spec: PromptSpec) -> ValidatedBatch:
        backend = _backend_for(body, spec)
        retry = RetryPolicy(jitter_seed=int(body.get("seed", 0)))
        batch = generate_validated(
            spec, backend, LoopPolicy(), audit=audit.emit,
            retry_policy=retry, sleep=sleep_fn,
        )
        for question, report in batch.accepted:
            bank.append(BankRecord(
                question=question,
                validation_report=report.to_dict(),
                prompt_metadata=spec.metadata(),
            ))
        return batch

    @app.post("/api/generate")
    async def api_generate(body: dict):
        spec = _spec_from(body)
        return _run_batch(body, spec).to_dict()

    @app.post("/api/validate")
    async def api_validate(body: dict):
        q = body.get("question")
        if not isinstance(q, dict):
            raise ApiError(400, "SchemaViolation", "body must carry a question object")
        try:
            question = Question.from_dict(q)
        except (KeyError, TypeError, ValueError) as exc:
            raise ApiError(400, "SchemaViolation", "malformed question", str(exc)) from None
        report = validate(question)
        audit.emit({"kind": "validate", "question_id": question.id,
                    "disposition": report.disposition})
        return report.to_dict()

    @app.post("/api/regenerate")
    async def api_regenerate(body: dict):
        qid = body.get("question_id", "")
        record = bank.get(qid)
        if record is None:
            raise ApiError(404, "NotFound", f"no bank record {qid!r}")
        meta = dict(record.prompt_metadata or {})
        spec_dict = {
            "topic": meta.get("topic", record.question.topic or "trigonometry"),
            "count": 1,
            "function_constraints": meta.get("function_constraints", []),
            "difficulty": body.get("difficulty", meta.get("difficulty", "medium")),
            "distractor_strategies": meta.get("strategies") or None,
        }
        extra = [c for c in meta.get("clauses", []) if c not in _base_clauses(meta)]
        if body.get("extra_clause"):
            extra.append(body["extra_clause"])
        spec_dict["extra_clauses"] = extra
        spec = _spec_from({"spec": spec_dict})
        batch = _run_batch(body, spec)
        if not batch.accepted:
            raise ApiError(502, "BackendExhausted",
                           "no replacement converged within the attempt budget")
        question, report = batch.accepted[0]
        return {"question": question.to_dict(), "report": report.to_dict(),
                "replaces": qid}

    @app.get("/api/bank")
    async def api_bank(status: str | None = None):
        try:
            records = bank.list(status)
        except BankError as exc:
            raise ApiError(400, "SchemaViolation", str(exc)) from None
        return {"records": [r.to_dict() for r in records],
                "skipped_lines": bank.skipped_lines}

    @app.post("/api/bank/{record_id}/decision")
    async def api_decision(record_id: str, body: dict):
        decision = body.get("decision", "")
        note = body.get("note", "")
        try:
            record = bank.decide(record_id, decision, note)
        except KeyError:
            raise ApiError(404, "NotFound", f"no bank record {record_id!r}") from None
        except IllegalTransition as exc:
            raise ApiError(409, "Conflict", str(exc)) from None
        except BankError as exc:
            raise ApiError(400, "SchemaViolation", str(exc)) from None
        audit.emit({"kind": "decision", "question_id": record_id,
                    "decision": decision, "detail": note or None})
        return record.to_dict()

    @app.get("/api/questions/{record_id}/render")
    async def api_render(record_id: str):
        record = bank.get(record_id)
        if record is None:
            raise ApiError(404, "NotFound", f"no bank record {record_id!r}")
        q = record.question
        return {
            "id": q.id,
            "stem": html.escape(q.stem, quote=False),
            "options": [
                {"id": o.id, "latex": o.body_latex,
                 "feedback": html.escape(o.feedback, quote=False),
                 "is_correct": o.is_correct}
                for o in q.options
            ],
            "status": record.status,
            "validation_report": record.validation_report,
        }

    @app.get("/api/health")
    async def api_health():
        return {"status": "ok", "version": __version__,
                "bank_records": len(bank), "bank_path": str(bank.path)}

    ui_dir = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    if ui_dir.is_dir():
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def _base_clauses(meta: dict) -> set[str]:
    from .gen.prompts import DIFFICULTY_CLAUSES, UNIQUENESS_CLAUSE

    return set(DIFFICULTY_CLAUSES.values()) | {UNIQUENESS_CLAUSE}
