"""Gateway behavior: request invariants, mock determinism, retry policy."""

import pytest

from conftest import FIXTURE_DIR

from sous_chef.gateway import (
    GatewayTimeout,
    LiveLlmProvider,
    LlmGateway,
    LlmImage,
    LlmRequest,
    MockLlmProvider,
    ProviderRejection,
    RateLimitExhausted,
    _Transient,
)

PNG_STUB = b"\x89PNG\r\n\x1a\n" + b"\x00" * 8


def _image():
    return LlmImage(data=PNG_STUB, mime_type="image/png", width_px=96, height_px=72)


def _detect_request(tag="five_items"):
    return LlmRequest(
        template_id="detect_ingredients",
        system_instruction="sys",
        user_text="find ingredients",
        image=_image(),
        fixture_tag=tag,
    )


class TestRequestInvariants:
    def test_image_required_for_detect(self):
        with pytest.raises(ValueError):
            LlmRequest(template_id="detect_ingredients", system_instruction="s",
                       user_text="u")

    def test_image_forbidden_for_chat(self):
        with pytest.raises(ValueError):
            LlmRequest(template_id="assistant_chat", system_instruction="s",
                       user_text="u", image=_image())

    def test_bad_language(self):
        with pytest.raises(ValueError):
            LlmRequest(template_id="assistant_chat", system_instruction="s",
                       user_text="u", language="xx")

    def test_bad_token_budget(self):
        with pytest.raises(ValueError):
            LlmRequest(template_id="assistant_chat", system_instruction="s",
                       user_text="u", max_output_tokens=0)


class TestMockProvider:
    def test_fixture_returned_byte_for_byte(self):
        gateway = LlmGateway(MockLlmProvider(FIXTURE_DIR))
        response = gateway.complete(_detect_request())
        on_disk = (FIXTURE_DIR / "detect_ingredients__five_items").read_text("utf-8")
        assert response.raw_text == on_disk
        assert response.provider == "mock"
        assert response.latency_ms >= 0

    def test_deterministic_across_calls(self):
        gateway = LlmGateway(MockLlmProvider(FIXTURE_DIR))
        first = gateway.complete(_detect_request())
        second = gateway.complete(_detect_request())
        assert first.raw_text == second.raw_text

    def test_unknown_fixture_tag(self):
        gateway = LlmGateway(MockLlmProvider(FIXTURE_DIR))
        with pytest.raises(ProviderRejection):
            gateway.complete(_detect_request(tag="no_such_fixture"))

    def test_no_route_and_no_tag(self):
        gateway = LlmGateway(MockLlmProvider(FIXTURE_DIR))
        with pytest.raises(ProviderRejection):
            gateway.complete(_detect_request(tag=None))

    def test_routing_supplies_default_tag(self):
        provider = MockLlmProvider(FIXTURE_DIR)
        provider.route("detect_ingredients", "five_items")
        gateway = LlmGateway(provider)
        response = gateway.complete(_detect_request(tag=None))
        assert "Tomato" in response.raw_text


class _FlakyProvider:
    """Fails with a transient error a fixed number of times, then succeeds."""

    name = "live"

    def __init__(self, failures, kind="timeout"):
        self.failures = failures
        self.kind = kind
        self.calls = 0

    def complete(self, request):
        self.calls += 1
        if self.calls <= self.failures:
            raise _Transient(self.kind, "flaky")
        return "recovered"


class TestRetryPolicy:
    def test_transient_failures_retried_until_success(self):
        provider = _FlakyProvider(failures=2)
        slept = []
        gateway = LlmGateway(provider, sleep=slept.append)
        response = gateway.complete(_detect_request())
        assert response.raw_text == "recovered"
        assert provider.calls == 3
        assert slept == [0.5, 1.0]  # backoff schedule between the three attempts

    def test_timeout_after_three_attempts(self):
        provider = _FlakyProvider(failures=99, kind="timeout")
        gateway = LlmGateway(provider, sleep=lambda _s: None)
        with pytest.raises(GatewayTimeout) as excinfo:
            gateway.complete(_detect_request())
        assert excinfo.value.attempts == 3
        assert provider.calls == 3

    def test_rate_limit_exhaustion_is_distinct(self):
        provider = _FlakyProvider(failures=99, kind="rate_limit")
        gateway = LlmGateway(provider, sleep=lambda _s: None)
        with pytest.raises(RateLimitExhausted) as excinfo:
            gateway.complete(_detect_request())
        assert excinfo.value.attempts == 3

    def test_rejection_not_retried(self):
        class _Rejecting:
            name = "live"
            calls = 0

            def complete(self, request):
                self.calls += 1
                raise ProviderRejection("nope")

        provider = _Rejecting()
        gateway = LlmGateway(provider, sleep=lambda _s: None)
        with pytest.raises(ProviderRejection) as excinfo:
            gateway.complete(_detect_request())
        assert provider.calls == 1
        assert excinfo.value.attempts == 1


def test_live_unreachable_endpoint_times_out_after_three_attempts():
    provider = LiveLlmProvider("http://127.0.0.1:9/v1:generateContent", "test-key",
                               timeout_s=0.2)
    gateway = LlmGateway(provider, sleep=lambda _s: None)
    with pytest.raises(GatewayTimeout) as excinfo:
        gateway.complete(_detect_request())
    assert excinfo.value.attempts == 3
