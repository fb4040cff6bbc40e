"""Provider-agnostic multimodal completion client.

Two providers speak the same tiny interface: the live one POSTs to a
Gemini-style HTTPS endpoint, the mock one reads canned replies from a
fixture directory so every flow is testable offline and bit-deterministic.
The gateway wraps either with validation, retry, and timing.
"""

from __future__ import annotations

import base64
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import httpx

from .model import SUPPORTED_LANGUAGES
from .templates import TEMPLATE_IDS

API_KEY_ENV = "SOUS_CHEF_API_KEY"

# Templates that carry a snapshot with the prompt.
IMAGE_TEMPLATES = ("detect_ingredients", "step_feedback")

BACKOFF_SCHEDULE_S = (0.5, 1.0, 2.0)
MAX_ATTEMPTS = 3


class GatewayError(Exception):
    """Base for completion failures; ``attempts`` is how many calls were made."""

    def __init__(self, message: str, attempts: int = 1):
        super().__init__(message)
        self.attempts = attempts


class GatewayTimeout(GatewayError):
    pass


class RateLimitExhausted(GatewayError):
    pass


class ProviderRejection(GatewayError):
    pass


class _Transient(Exception):
    """Internal: a failure worth retrying. ``kind`` picks the final error type."""

    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind  # "timeout" | "rate_limit" | "server"


@dataclass
class LlmImage:
    data: bytes
    mime_type: str
    width_px: int
    height_px: int

    def __post_init__(self):
        if not self.data:
            raise ValueError("image bytes are empty")
        if self.width_px <= 0 or self.height_px <= 0:
            raise ValueError("image dimensions must be positive")


@dataclass
class LlmRequest:
    """One completion call.

    ``fixture_tag`` is mock-only plumbing: it names the canned reply to use
    and is ignored by the live provider.
    """

    template_id: str
    system_instruction: str
    user_text: str
    language: str = "en"
    image: Optional[LlmImage] = None
    max_output_tokens: int = 2048
    fixture_tag: Optional[str] = None

    def __post_init__(self):
        if self.template_id not in TEMPLATE_IDS:
            raise ValueError(f"unknown template {self.template_id!r}")
        if self.language not in SUPPORTED_LANGUAGES:
            raise ValueError(f"unsupported language tag {self.language!r}")
        if self.max_output_tokens <= 0:
            raise ValueError("max_output_tokens must be positive")
        needs_image = self.template_id in IMAGE_TEMPLATES
        if needs_image and self.image is None:
            raise ValueError(f"template {self.template_id!r} requires an image")
        if not needs_image and self.image is not None:
            raise ValueError(f"template {self.template_id!r} does not take an image")


@dataclass
class LlmResponse:
    raw_text: str  # may contain prose around the structured payload
    provider: str  # "live" | "mock"
    latency_ms: int


class MockLlmProvider:
    """Deterministic provider backed by a directory of fixture files.

    Files are named ``{template_id}__{tag}`` and returned byte-for-byte, so
    the mock's whole behavior is reviewable in a diff. A default tag can be
    routed per template for callers that cannot thread a tag through.
    """

    name = "mock"

    def __init__(self, fixture_dir):
        self.fixture_dir = Path(fixture_dir)
        self._routes: dict = {}

    def route(self, template_id: str, tag: str) -> None:
        """Set the fixture returned for ``template_id`` when no tag is on the request."""
        self._routes[template_id] = tag

    def fixture_path(self, template_id: str, tag: str) -> Path:
        return self.fixture_dir / f"{template_id}__{tag}"

    def has_fixture(self, template_id: str, tag: str) -> bool:
        return self.fixture_path(template_id, tag).is_file()

    def complete(self, request: LlmRequest) -> str:
        tag = request.fixture_tag or self._routes.get(request.template_id)
        if tag is None:
            raise ProviderRejection(
                f"mock provider has no fixture routed for {request.template_id!r}"
            )
        path = self.fixture_path(request.template_id, tag)
        if not path.is_file():
            raise ProviderRejection(f"unknown fixture {path.name!r}")
        return path.read_text(encoding="utf-8")


class LiveLlmProvider:
    """HTTPS provider speaking a Gemini-style multimodal completion format."""

    name = "live"

    def __init__(self, endpoint: str, api_key: str, timeout_s: float = 60.0):
        self.endpoint = endpoint
        self.api_key = api_key
        self.timeout_s = timeout_s

    def _payload(self, request: LlmRequest) -> dict:
        parts = [{"text": request.user_text}]
        if request.image is not None:
            parts.append(
                {
                    "inline_data": {
                        "mime_type": request.image.mime_type,
                        "data": base64.b64encode(request.image.data).decode("ascii"),
                    }
                }
            )
        return {
            "system_instruction": {"parts": [{"text": request.system_instruction}]},
            "contents": [{"role": "user", "parts": parts}],
            "generationConfig": {"maxOutputTokens": request.max_output_tokens},
        }

    def complete(self, request: LlmRequest) -> str:
        try:
            response = httpx.post(
                self.endpoint,
                json=self._payload(request),
                headers={"x-goog-api-key": self.api_key},
                timeout=self.timeout_s,
            )
        except (httpx.TimeoutException, httpx.ConnectError, httpx.NetworkError) as exc:
            raise _Transient("timeout", f"endpoint unreachable: {exc}") from exc
        if response.status_code == 429:
            raise _Transient("rate_limit", "provider rate-limited the request")
        if response.status_code >= 500:
            raise _Transient("server", f"provider returned {response.status_code}")
        if response.status_code != 200:
            raise ProviderRejection(
                f"provider rejected the request ({response.status_code}): "
                f"{response.text[:200]}"
            )
        try:
            body = response.json()
            parts = body["candidates"][0]["content"]["parts"]
            return "".join(part.get("text", "") for part in parts)
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise ProviderRejection(f"unparseable provider response: {exc}") from exc


_FINAL_ERROR = {
    "timeout": GatewayTimeout,
    "rate_limit": RateLimitExhausted,
    "server": ProviderRejection,
}


class LlmGateway:
    """Validated completions over one provider, with retry on transient failures.

    Shareable across sessions; per-request state is local. ``sleep`` is
    injectable so tests never actually wait out the backoff.
    """

    def __init__(self, provider, max_attempts: int = MAX_ATTEMPTS,
                 backoff_s=BACKOFF_SCHEDULE_S, sleep=time.sleep):
        self.provider = provider
        self.max_attempts = max_attempts
        self.backoff_s = tuple(backoff_s)
        self._sleep = sleep

    def complete(self, request: LlmRequest) -> LlmResponse:
        started = time.monotonic()
        last: Optional[_Transient] = None
        for attempt in range(1, self.max_attempts + 1):
            try:
                raw_text = self.provider.complete(request)
            except _Transient as exc:
                last = exc
                if attempt < self.max_attempts:
                    self._sleep(self.backoff_s[min(attempt - 1, len(self.backoff_s) - 1)])
                continue
            except ProviderRejection as exc:
                exc.attempts = attempt
                raise
            latency_ms = int((time.monotonic() - started) * 1000)
            return LlmResponse(raw_text=raw_text, provider=self.provider.name,
                               latency_ms=latency_ms)
        assert last is not None
        raise _FINAL_ERROR[last.kind](str(last), attempts=self.max_attempts)
