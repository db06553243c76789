"""Generation providers: deterministic mocks and HTTP-backed real ones.

The mock pair is the test oracle for the whole pipeline. Both mocks are
referentially transparent — output depends only on the request payload bytes
— and both make internal decisions observable: the text mock echoes the
request's focus text and source object names into the story, and the image
mock colors its pixels with a hash of the consolidated prompt so any prompt
change is pixel-visible.
"""

from __future__ import annotations

import hashlib
import os
import time
from dataclasses import dataclass, field
from typing import Any, Mapping, Protocol

from ..errors import (
    ProviderError,
    ProviderTimeout,
    RateLimited,
    ValidationFailure,
)
from ..model.cards import STORY_WORD_CAP, canonical_json
from ..instruments.imaging import solid_png
from ..instruments.requests import primary_text
from .replies import TextAgentReply

ENV_TEXT_URL = "TEXT_PROVIDER_URL"
ENV_IMAGE_URL = "IMAGE_PROVIDER_URL"
ENV_API_KEY = "PROVIDER_API_KEY"
ENV_MOCK = "MOCK_MODE"


@dataclass(frozen=True)
class ProviderConfig:
    text_endpoint: str = ""
    image_endpoint: str = ""
    api_key_env: str = ENV_API_KEY
    mock: bool = True
    timeout: float = 30.0
    retry_limit: int = 1
    # Optional per-instrument text routing; unlisted modes use text_endpoint.
    text_endpoint_overrides: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.timeout <= 0:
            raise ValidationFailure("provider timeout must be positive")
        if self.retry_limit < 0:
            raise ValidationFailure("retry limit must be non-negative")
        if not self.mock and not (self.text_endpoint and self.image_endpoint):
            raise ValidationFailure("non-mock config needs both endpoints")

    @classmethod
    def from_env(cls, environ: Mapping[str, str] | None = None) -> "ProviderConfig":
        env = os.environ if environ is None else environ
        text_url = env.get(ENV_TEXT_URL, "")
        image_url = env.get(ENV_IMAGE_URL, "")
        mock = env.get(ENV_MOCK) == "1" or not (text_url and image_url)
        return cls(text_endpoint=text_url, image_endpoint=image_url, mock=mock)

    def text_endpoint_for(self, mode: str) -> str:
        return self.text_endpoint_overrides.get(mode, self.text_endpoint)


class TextProvider(Protocol):
    def complete(self, prompt: str, payload: Mapping[str, Any]) -> str: ...


class ImageProvider(Protocol):
    def generate(self, consolidated_prompt: str, payload: Mapping[str, Any]) -> bytes: ...


def _echoed_object_names(payload: Mapping[str, Any]) -> list[str]:
    names: list[str] = []
    for source in payload.get("sources") or ():
        for obj in source.get("objects") or ():
            if obj["name"] not in names:
                names.append(obj["name"])
    return names


def mock_reply(payload: Mapping[str, Any]) -> TextAgentReply:
    """Deterministic echo reply for a serialized generation request.

    The story wraps the request's focus text and lists source object names;
    while that stays within the word cap it is preserved verbatim, so tests
    can assert substring containment.
    """
    focus = primary_text(payload)
    names = _echoed_object_names(payload)
    story = f"MOCK[{focus}] objects: {', '.join(names) if names else 'none'}"
    words = story.split()
    if len(words) > STORY_WORD_CAP:
        story = " ".join(words[:STORY_WORD_CAP])

    intent = payload.get("intent") or {}
    has_strokes = bool(intent.get("sketch_strokes"))
    if not has_strokes:
        has_strokes = any(
            p.get("source", {}).get("type") == "sketch"
            for p in payload.get("placements") or ()
        )
    stroke_count = len(intent.get("sketch_strokes") or ())
    return TextAgentReply(
        story=story,
        intention=f"visualize: {focus or payload.get('mode', '')}",
        sketch_information=(
            f"layout: {stroke_count} sketch stroke(s)" if has_strokes else "none"
        ),
    )


def mock_summary(payload: Mapping[str, Any]) -> dict[str, str]:
    """Echo summary: every section concatenates the contributing materials."""
    segments = [s["snapshot"] for s in payload.get("segments") or ()]
    comments = list(payload.get("comments") or ())
    base = "; ".join(segments) or "; ".join(comments) or "insufficient material"
    return {
        "settings": f"Settings: {base}",
        "description": f"Description: {base}",
        "plot": f"Plot: {base}",
    }


class MockTextProvider:
    """Returns raw JSON strings so the strict parse path stays exercised."""

    def complete(self, prompt: str, payload: Mapping[str, Any]) -> str:
        if payload.get("mode") == "summarize":
            return canonical_json(mock_summary(payload))
        return mock_reply(payload).to_json()


MOCK_IMAGE_SIZE = 64


class MockImageProvider:
    """Solid PNG whose RGB comes from the consolidated prompt's sha256.

    Small and memoized: prompt changes stay pixel-observable while bulk
    randomized suites stay cheap.
    """

    def __init__(self):
        self._cache: dict[str, bytes] = {}

    def generate(self, consolidated_prompt: str, payload: Mapping[str, Any]) -> bytes:
        cached = self._cache.get(consolidated_prompt)
        if cached is None:
            digest = hashlib.sha256(consolidated_prompt.encode("utf-8")).digest()
            cached = solid_png(
                (digest[0], digest[1], digest[2]), MOCK_IMAGE_SIZE, MOCK_IMAGE_SIZE
            )
            self._cache[consolidated_prompt] = cached
        return cached


def _auth_headers(config: ProviderConfig) -> dict[str, str]:
    key = os.environ.get(config.api_key_env, "")
    return {"Authorization": f"Bearer {key}"} if key else {}


class HttpTextProvider:
    """POSTs {prompt, request} JSON to the configured text endpoint."""

    def __init__(self, config: ProviderConfig):
        self._config = config

    def complete(self, prompt: str, payload: Mapping[str, Any]) -> str:
        import httpx

        url = self._config.text_endpoint_for(str(payload.get("mode", "")))
        started = time.monotonic()
        try:
            response = httpx.post(
                url,
                json={"prompt": prompt, "request": dict(payload)},
                headers=_auth_headers(self._config),
                timeout=self._config.timeout,
            )
        except httpx.TimeoutException as exc:
            raise ProviderTimeout(elapsed=time.monotonic() - started) from exc
        except httpx.HTTPError as exc:
            raise ProviderError(f"text provider request failed: {exc}") from exc
        if response.status_code == 429:
            raise RateLimited("text provider rate limited")
        if response.status_code >= 400:
            raise ProviderError(f"text provider returned {response.status_code}")
        return response.json()["reply"]


class HttpImageProvider:
    """POSTs {consolidated_prompt, ...} JSON; expects {image_b64} back."""

    def __init__(self, config: ProviderConfig):
        self._config = config

    def generate(self, consolidated_prompt: str, payload: Mapping[str, Any]) -> bytes:
        import base64

        import httpx

        started = time.monotonic()
        try:
            response = httpx.post(
                self._config.image_endpoint,
                json=dict(payload, consolidated_prompt=consolidated_prompt),
                headers=_auth_headers(self._config),
                timeout=self._config.timeout,
            )
        except httpx.TimeoutException as exc:
            raise ProviderTimeout(elapsed=time.monotonic() - started) from exc
        except httpx.HTTPError as exc:
            raise ProviderError(f"image provider request failed: {exc}") from exc
        if response.status_code == 429:
            raise RateLimited("image provider rate limited")
        if response.status_code >= 400:
            raise ProviderError(f"image provider returned {response.status_code}")
        return base64.b64decode(response.json()["image_b64"])


def make_text_provider(config: ProviderConfig) -> TextProvider:
    return MockTextProvider() if config.mock else HttpTextProvider(config)


def make_image_provider(config: ProviderConfig) -> ImageProvider:
    return MockImageProvider() if config.mock else HttpImageProvider(config)
