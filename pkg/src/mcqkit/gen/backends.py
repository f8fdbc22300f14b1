"""Generation backends: deterministic mock with fault injection, and an
HTTP client with exponential-backoff retry."""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field
from typing import Callable, Protocol

import httpx

from ..rng import SplitMix64
from .catalog import catalog_payload, equivalent_form_latex
from .errors import BackendError
from .prompts import PromptBundle

FAULT_BEHAVIORS = (
    "ok",
    "duplicate_key_option",
    "missing_feedback",
    "ambiguous_correct",
    "truncate",
    "rate_limit",
    "model_error",
)


class GenerationBackend(Protocol):
    def generate(self, bundle: PromptBundle) -> str:
        """Return raw response text or raise BackendError."""


@dataclass
class MockBackend:
    """Deterministic in (bundle, seed, fault_script); call k applies
    behavior k, with the last behavior repeating."""

    seed: int = 0
    fault_script: tuple[str, ...] = ("ok",)
    # parsed back out of the bundle's user prompt by the catalog
    topic: str = ""
    count: int = 3
    function_constraints: tuple[str, ...] = ()

    def __post_init__(self):
        for b in self.fault_script:
            if b not in FAULT_BEHAVIORS:
                raise ValueError(f"unknown fault behavior {b!r}")
        if not self.fault_script:
            self.fault_script = ("ok",)
        self._calls = 0
        self._lock = threading.Lock()

    @property
    def calls(self) -> int:
        return self._calls

    def generate(self, bundle: PromptBundle) -> str:
        with self._lock:
            k = self._calls
            self._calls += 1
        behavior = self.fault_script[min(k, len(self.fault_script) - 1)]
        if behavior == "rate_limit":
            raise BackendError("RateLimited", "simulated 429")
        if behavior == "model_error":
            raise BackendError("ModelError", "simulated model failure")
        payload = catalog_payload(
            topic=self.topic or _topic_from(bundle),
            count=self.count,
            function_constraints=self.function_constraints,
            # each call draws fresh items, reproducibly
            seed=SplitMix64(self.seed ^ (k * 0x9E3779B9)).next_u64(),
        )
        if behavior == "duplicate_key_option":
            _inject_duplicate_key(payload)
        elif behavior == "missing_feedback":
            del payload["questions"][0]["options"][1]["feedback"]
        elif behavior == "ambiguous_correct":
            for opt in payload["questions"][0]["options"]:
                if not opt["is_correct"]:
                    opt["is_correct"] = True
                    break
        raw = json.dumps(payload, ensure_ascii=False)
        if behavior == "truncate":
            return raw[: len(raw) // 2]
        return raw


def _topic_from(bundle: PromptBundle) -> str:
    first = bundle.user_prompt.splitlines()[0] if bundle.user_prompt else ""
    return first.rstrip(".").split(" on ")[-1] if " on " in first else "trigonometry"


def _inject_duplicate_key(payload: dict) -> None:
    from ..engine.exact import eval_exact
    from ..expr.latex import parse_latex

    q = payload["questions"][0]
    key = next(o for o in q["options"] if o["is_correct"])
    value = eval_exact(parse_latex(key["latex"]))
    for opt in q["options"]:
        if not opt["is_correct"]:
            opt["latex"] = equivalent_form_latex(value)
            break


@dataclass(frozen=True)
class RetryPolicy:
    base_delay_s: float = 0.5
    factor: float = 2.0
    max_attempts: int = 3
    jitter_seed: int = 0

    def delays(self):
        rng = SplitMix64(self.jitter_seed)
        for i in range(self.max_attempts - 1):
            yield rng.uniform(0.0, self.base_delay_s * self.factor**i)  # full jitter


def generate_with_retry(
    backend: GenerationBackend,
    bundle: PromptBundle,
    policy: RetryPolicy | None = None,
    sleep: Callable[[float], None] = time.sleep,
    on_error: Callable[[BackendError, int], None] | None = None,
    retry_kinds: frozenset[str] | None = None,
) -> str:
    """Call the backend, retrying retriable errors with backoff.

    Non-retriable errors surface immediately; after max_attempts the last
    retriable error surfaces.
    """
    from .errors import RETRIABLE_KINDS

    retry_kinds = retry_kinds if retry_kinds is not None else RETRIABLE_KINDS
    policy = policy or RetryPolicy()
    delays = policy.delays()
    last: BackendError | None = None
    for attempt in range(1, policy.max_attempts + 1):
        try:
            return backend.generate(bundle)
        except BackendError as err:
            if on_error is not None:
                on_error(err, attempt)
            if err.kind not in retry_kinds:
                raise
            last = err
            if attempt < policy.max_attempts:
                sleep(next(delays))
    assert last is not None
    raise last


DEFAULT_TIMEOUT_S = 30.0


@dataclass
class HttpBackend:
    """Single HTTPS POST per call; pair with generate_with_retry for the
    documented backoff behavior (see http_generate)."""

    endpoint: str
    token: str = ""
    timeout_s: float = DEFAULT_TIMEOUT_S
    transport: httpx.BaseTransport | None = None

    def generate(self, bundle: PromptBundle) -> str:
        headers = {"Content-Type": "application/json"}
        if self.token:
            headers["Authorization"] = f"Bearer {self.token}"
        try:
            with httpx.Client(transport=self.transport, timeout=self.timeout_s) as client:
                resp = client.post(self.endpoint, json=bundle.to_dict(), headers=headers)
        except httpx.TimeoutException as exc:
            raise BackendError("Timeout", str(exc)) from None
        except httpx.HTTPError as exc:
            raise BackendError("TransportError", str(exc)) from None
        if resp.status_code == 429:
            raise BackendError("RateLimited", "status 429")
        if resp.status_code >= 500:
            raise BackendError("ModelError", f"status {resp.status_code}")
        if resp.status_code >= 400:
            raise BackendError("SchemaViolation", f"status {resp.status_code}: {resp.text[:200]}")
        return resp.text


def http_generate(
    bundle: PromptBundle,
    backend: HttpBackend,
    policy: RetryPolicy | None = None,
    sleep: Callable[[float], None] = time.sleep,
    on_error: Callable[[BackendError, int], None] | None = None,
) -> str:
    from .errors import RETRIABLE_KINDS

    # 5xx is worth retrying over HTTP even though the surfaced kind is
    # ModelError (the server may recover)
    return generate_with_retry(
        backend, bundle, policy, sleep, on_error,
        retry_kinds=RETRIABLE_KINDS | {"ModelError"},
    )
