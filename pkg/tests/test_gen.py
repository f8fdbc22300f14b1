import json
import random

import httpx
import pytest

from mcqkit.engine.equivalence import equivalent
from mcqkit.engine.exact import eval_exact
from mcqkit.gen.backends import (
    HttpBackend,
    MockBackend,
    RetryPolicy,
    generate_with_retry,
    http_generate,
)
from mcqkit.gen.catalog import catalog_payload
from mcqkit.gen.errors import BackendError, RETRIABLE_KINDS
from mcqkit.gen.prompts import (
    DIFFICULTY_CLAUSES,
    FEEDBACK_CLAUSE,
    PromptSpec,
    UNIQUENESS_CLAUSE,
    build_prompt,
)
from mcqkit.gen.response import parse_response


def trig_spec(count=3) -> PromptSpec:
    return PromptSpec(
        topic="trigonometric identities",
        count=count,
        function_constraints=("sine", "cosine", "cotangent"),
    )


class TestBuildPrompt:
    def test_core_content_present(self):
        bundle = build_prompt(trig_spec())
        p = bundle.user_prompt
        assert "three multiple choice questions on trigonometric identities" in p
        assert "sine, cosine, cotangent" in p
        assert "sign inversion" in p and "incorrect identity use" in p
        assert FEEDBACK_CLAUSE in p
        assert UNIQUENESS_CLAUSE in p

    def test_difficulty_clause_mapping(self):
        import dataclasses

        low = build_prompt(dataclasses.replace(trig_spec(), difficulty="low"))
        high = build_prompt(dataclasses.replace(trig_spec(), difficulty="high"))
        assert DIFFICULTY_CLAUSES["low"] in low.user_prompt
        assert DIFFICULTY_CLAUSES["high"] not in low.user_prompt
        assert DIFFICULTY_CLAUSES["high"] in high.user_prompt

    def test_extra_clause_appears_last(self):
        clause = "Avoid the value 1/2 among options."
        bundle = build_prompt(trig_spec().with_clause(clause))
        assert bundle.user_prompt.rstrip().endswith(clause)

    def test_with_clause_idempotent(self):
        spec = trig_spec().with_clause("x").with_clause("x")
        assert spec.extra_clauses.count("x") == 1

    def test_schema_is_valid_json(self):
        bundle = build_prompt(trig_spec())
        schema = json.loads(bundle.response_schema)
        assert schema["required"] == ["questions"]

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            PromptSpec(topic="t", count=0)
        with pytest.raises(ValueError):
            PromptSpec(topic="t", difficulty="extreme")
        with pytest.raises(ValueError):
            PromptSpec(topic="t", distractor_strategies=("nope",))


class TestParseResponse:
    def _payload(self):
        return catalog_payload("trig", 1, ("sin",), seed=5)

    def test_well_formed_mock_payload(self):
        backend = MockBackend(seed=3, topic="trig", count=3,
                              function_constraints=("sin", "cos", "cot"))
        questions = parse_response(backend.generate(build_prompt(trig_spec())))
        assert len(questions) == 3
        for q in questions:
            assert q.structural_issues() == []

    def test_missing_feedback_names_option(self):
        payload = self._payload()
        del payload["questions"][0]["options"][1]["feedback"]
        with pytest.raises(BackendError) as info:
            parse_response(json.dumps(payload))
        assert info.value.kind == "MissingField"
        assert "question 0" in info.value.detail
        assert "feedback" in info.value.detail

    def test_two_correct_flags(self):
        payload = self._payload()
        for opt in payload["questions"][0]["options"]:
            opt["is_correct"] = True
        with pytest.raises(BackendError) as info:
            parse_response(json.dumps(payload))
        assert info.value.kind == "AmbiguousCorrect"

    def test_flag_id_mismatch(self):
        payload = self._payload()
        q = payload["questions"][0]
        others = [o["id"] for o in q["options"] if not o["is_correct"]]
        q["correct_option_id"] = others[0]
        with pytest.raises(BackendError) as info:
            parse_response(json.dumps(payload))
        assert info.value.kind == "AmbiguousCorrect"

    def test_empty_payload_truncated(self):
        with pytest.raises(BackendError) as info:
            parse_response("")
        assert info.value.kind == "Truncated"

    def test_cut_payload_truncated(self):
        raw = json.dumps(self._payload())
        with pytest.raises(BackendError) as info:
            parse_response(raw[: len(raw) // 2])
        assert info.value.kind == "Truncated"

    def test_bad_latex_reports_span(self):
        payload = self._payload()
        payload["questions"][0]["options"][0]["latex"] = r"\frac{1}"
        with pytest.raises(BackendError) as info:
            parse_response(json.dumps(payload))
        assert info.value.kind == "MathParseError"
        assert "span" in info.value.detail

    def test_schema_violations(self):
        for raw in ["{}", '{"questions": {}}', '{"questions": []}',
                    '{"questions": [5]}', "null", "[1,2]"]:
            with pytest.raises(BackendError) as info:
                parse_response(raw)
            assert info.value.kind == "SchemaViolation", raw

    def test_backslashes_survive_round_trip(self):
        payload = self._payload()
        latex = payload["questions"][0]["options"][0]["latex"]
        decoded = json.loads(json.dumps(payload))
        assert decoded["questions"][0]["options"][0]["latex"] == latex

    def test_fuzz_never_crashes(self):
        rng = random.Random(99)
        base = json.dumps(self._payload())
        for _ in range(2000):
            mode = rng.randrange(3)
            if mode == 0:
                raw = "".join(chr(rng.randrange(32, 127))
                              for _ in range(rng.randrange(0, 80)))
            elif mode == 1:
                raw = base[: rng.randrange(0, len(base))]
            else:
                chars = list(base)
                for _ in range(rng.randrange(1, 6)):
                    chars[rng.randrange(len(chars))] = chr(rng.randrange(32, 127))
                raw = "".join(chars)
            try:
                parse_response(raw)
            except BackendError:
                pass


class TestCatalog:
    def test_keys_match_exact_oracle(self):
        payload = catalog_payload("trig", 6, ("sin", "cos", "cot"), seed=1)
        for q in payload["questions"]:
            questions = parse_response(json.dumps({"questions": [q]}))
            key = questions[0].key
            assert eval_exact(key.body_ast) is not None

    def test_distractors_exactly_distinct(self):
        payload = catalog_payload("trig", 9, ("sin", "cos", "cot"), seed=2)
        for q in payload["questions"]:
            values = [eval_exact(o.body_ast)
                      for o in parse_response(json.dumps({"questions": [q]}))[0].options]
            assert len(set(values)) == len(values)

    def test_deterministic(self):
        a = catalog_payload("t", 4, ("sin",), seed=9)
        b = catalog_payload("t", 4, ("sin",), seed=9)
        assert json.dumps(a) == json.dumps(b)


class TestMockBackend:
    def test_identical_inputs_identical_bytes(self):
        bundle = build_prompt(trig_spec())
        a = MockBackend(seed=5, count=3).generate(bundle)
        b = MockBackend(seed=5, count=3).generate(bundle)
        assert a == b

    def test_script_advances_and_last_repeats(self):
        bundle = build_prompt(trig_spec())
        backend = MockBackend(seed=1, fault_script=("rate_limit", "ok"))
        with pytest.raises(BackendError):
            backend.generate(bundle)
        parse_response(backend.generate(bundle))
        parse_response(backend.generate(bundle))  # "ok" repeats

    def test_duplicate_key_fault_is_detectable(self):
        bundle = build_prompt(trig_spec())
        backend = MockBackend(seed=2, fault_script=("duplicate_key_option",))
        q = parse_response(backend.generate(bundle))[0]
        key = q.key
        dups = [o for o in q.options
                if not o.is_correct
                and equivalent(o.body_ast, key.body_ast).is_equivalent]
        assert dups

    def test_unknown_behavior_rejected(self):
        with pytest.raises(ValueError):
            MockBackend(fault_script=("explode",))


class TestRetry:
    def test_taxonomy_retriability(self):
        assert RETRIABLE_KINDS == {"RateLimited", "Timeout", "TransportError"}
        assert BackendError("RateLimited", "x").retriable
        assert not BackendError("SchemaViolation", "x").retriable

    def test_retries_then_succeeds(self):
        bundle = build_prompt(trig_spec())
        backend = MockBackend(seed=1, fault_script=("rate_limit", "rate_limit", "ok"))
        slept = []
        raw = generate_with_retry(backend, bundle, RetryPolicy(jitter_seed=4),
                                  sleep=slept.append)
        assert parse_response(raw)
        assert len(slept) == 2
        # full jitter within the exponential envelope
        assert 0 <= slept[0] <= 0.5 and 0 <= slept[1] <= 1.0

    def test_non_retriable_surfaces_immediately(self):
        bundle = build_prompt(trig_spec())
        backend = MockBackend(seed=1, fault_script=("model_error", "ok"))
        with pytest.raises(BackendError) as info:
            generate_with_retry(backend, bundle, sleep=lambda s: None)
        assert info.value.kind == "ModelError"
        assert backend.calls == 1

    def test_exhaustion_raises_last_error(self):
        bundle = build_prompt(trig_spec())
        backend = MockBackend(seed=1, fault_script=("rate_limit",))
        with pytest.raises(BackendError) as info:
            generate_with_retry(backend, bundle, sleep=lambda s: None)
        assert info.value.kind == "RateLimited"
        assert backend.calls == 3


class TestHttpBackend:
    def _transport(self, responses):
        calls = {"n": 0}

        def handler(request: httpx.Request) -> httpx.Response:
            status, body = responses[min(calls["n"], len(responses) - 1)]
            calls["n"] += 1
            return httpx.Response(status, text=body)

        return httpx.MockTransport(handler), calls

    def test_success_passthrough(self):
        payload = json.dumps(catalog_payload("t", 1, ("sin",), seed=1))
        transport, _ = self._transport([(200, payload)])
        backend = HttpBackend("https://gen.example/api", transport=transport)
        assert backend.generate(build_prompt(trig_spec())) == payload

    def test_429_429_200_succeeds_after_two_backoffs(self):
        payload = json.dumps(catalog_payload("t", 1, ("sin",), seed=1))
        transport, calls = self._transport([(429, ""), (429, ""), (200, payload)])
        backend = HttpBackend("https://gen.example/api", transport=transport)
        slept = []
        errors = []
        raw = http_generate(build_prompt(trig_spec()), backend,
                            RetryPolicy(jitter_seed=7), sleep=slept.append,
                            on_error=lambda e, k: errors.append(e))
        assert raw == payload
        assert calls["n"] == 3 and len(slept) == 2
        assert [e.kind for e in errors] == ["RateLimited", "RateLimited"]

    def test_persistent_500_is_model_error_after_three_attempts(self):
        transport, calls = self._transport([(500, "boom")])
        backend = HttpBackend("https://gen.example/api", transport=transport)
        attempts = []
        with pytest.raises(BackendError) as info:
            http_generate(build_prompt(trig_spec()), backend,
                          sleep=lambda s: None,
                          on_error=lambda e, k: attempts.append(k))
        assert info.value.kind == "ModelError"
        assert calls["n"] == 3 and attempts == [1, 2, 3]

    def test_timeout_classified(self):
        def handler(request):
            raise httpx.ConnectTimeout("slow")

        backend = HttpBackend("https://gen.example/api",
                              transport=httpx.MockTransport(handler))
        with pytest.raises(BackendError) as info:
            backend.generate(build_prompt(trig_spec()))
        assert info.value.kind == "Timeout"

    def test_auth_header_sent(self):
        seen = {}

        def handler(request):
            seen["auth"] = request.headers.get("Authorization")
            body = json.loads(request.content)
            seen["fields"] = sorted(body)
            return httpx.Response(200, text="{}")

        backend = HttpBackend("https://gen.example/api", token="sekrit",
                              transport=httpx.MockTransport(handler))
        backend.generate(build_prompt(trig_spec()))
        assert seen["auth"] == "Bearer sekrit"
        assert seen["fields"] == ["prompt", "response_schema", "system_instructions"]
