"""Agent pipeline: prompt assembly, provider calls, reply interpretation.

The text agent runs first and extracts intent; its reply is consolidated with
style controls into the image agent's prompt. Parse failures are retried with
an explicit JSON-only nudge appended to the prompt (so the prompt history
stays auditable) up to the configured retry limit.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum
from typing import Any, Mapping

from ..errors import ModeConstraintViolation, ProviderTimeout, SchemaError
from ..model.cards import ImageAssetRef
from ..instruments.requests import GenerationRequest, primary_text
from .assets import AssetStore
from ..instruments.imaging import rasterize_strokes
from .providers import (
    ImageProvider,
    ProviderConfig,
    TextProvider,
    make_image_provider,
    make_text_provider,
)
from .replies import TextAgentReply, parse_summary_reply, parse_text_reply
from .templates import TemplateLibrary

JSON_NUDGE = "\n\nRespond with valid JSON only."


class ImageMode(str, Enum):
    SKETCH_SCAFFOLD = "sketch_scaffold"
    REFERENCE_ANCHOR = "reference_anchor"
    FREE = "free"


@dataclass(frozen=True)
class ImageAgentRequest:
    consolidated_prompt: str
    mode: ImageMode
    scaffold: bytes | None = None
    references: tuple[bytes, ...] = ()
    style_controls: str = ""

    def validate(self) -> None:
        if self.mode is ImageMode.SKETCH_SCAFFOLD and self.scaffold is None:
            raise ModeConstraintViolation("sketch_scaffold mode requires a scaffold")
        if self.mode is ImageMode.REFERENCE_ANCHOR and not self.references:
            raise ModeConstraintViolation("reference_anchor mode requires references")


def slots_for(payload: Mapping[str, Any]) -> dict[str, str]:
    """Map a serialized generation request onto the prompt slot vocabulary."""
    sources = payload.get("sources") or ()
    previous = "\n".join(f"[{s['id']}] {s['story']}" for s in sources)
    context = payload.get("context") or {}
    return {
        "text": primary_text(payload) or "none",
        "previous_text": previous or "none",
        "full_text": context.get("prior_text") or "none",
        "global_theme": context.get("global_theme") or "none",
    }


class Orchestrator:
    """Stateless coordinator of text and image providers for one service."""

    def __init__(
        self,
        config: ProviderConfig,
        assets: AssetStore,
        library: TemplateLibrary | None = None,
        text_provider: TextProvider | None = None,
        image_provider: ImageProvider | None = None,
    ):
        self.config = config
        self.assets = assets
        self.library = library or TemplateLibrary.builtin()
        self.text_provider = text_provider or make_text_provider(config)
        self.image_provider = image_provider or make_image_provider(config)

    # --- text agent ---

    def _run_parse_loop(self, prompt: str, payload: Mapping[str, Any], parse):
        attempts = self.config.retry_limit + 1
        last_error: SchemaError | None = None
        for attempt in range(attempts):
            attempt_prompt = prompt if attempt == 0 else prompt + JSON_NUDGE
            started = time.monotonic()
            try:
                raw = self.text_provider.complete(attempt_prompt, payload)
            except TimeoutError as exc:
                raise ProviderTimeout(elapsed=time.monotonic() - started) from exc
            try:
                return parse(raw)
            except SchemaError as exc:
                last_error = exc
        assert last_error is not None
        raise last_error

    def run_text_agent(self, request: GenerationRequest) -> TextAgentReply:
        payload = request.to_dict()
        prompt = self.library.assemble("story_generation", slots_for(payload))
        return self._run_parse_loop(prompt, payload, parse_text_reply)

    def run_summary_agent(self, payload: Mapping[str, Any]) -> dict[str, str]:
        """Summary call over cluster materials; payload mode must be 'summarize'."""
        slots = {
            "text": str(payload.get("materials_text") or "none"),
            "global_theme": str(
                (payload.get("context") or {}).get("global_theme") or "none"
            ),
        }
        prompt = self.library.assemble("summarize", slots)
        return self._run_parse_loop(prompt, payload, parse_summary_reply)

    # --- image agent ---

    def build_image_request(
        self, request: GenerationRequest, reply: TextAgentReply
    ) -> ImageAgentRequest:
        """Consolidate the text agent's reading with style controls.

        Sketch strokes make the image a scaffolded composition; source images
        and crops anchor content without copying; otherwise generation is
        free, guided by the consolidated prompt alone.
        """
        style_parts = []
        if request.filter_delta is not None:
            style_parts.append(request.filter_delta.image_style)
        if request.voice_target is not None:
            style_parts.append(
                f"camera viewpoint matching {request.voice_target.value}-person narration"
            )
        style = "; ".join(style_parts)

        scaffold: bytes | None = None
        references: list[bytes] = []
        if request.intent.sketch_strokes:
            scaffold = rasterize_strokes(request.intent.sketch_strokes)
            mode = ImageMode.SKETCH_SCAFFOLD
        else:
            if request.crop is not None:
                references.append(self.assets.get(request.crop.asset_id))
            for source in request.sources:
                if self.assets.has(source.image.asset_id):
                    references.append(self.assets.get(source.image.asset_id))
            if request.intent.screenshot is not None and self.assets.has(
                request.intent.screenshot.asset_id
            ):
                references.append(self.assets.get(request.intent.screenshot.asset_id))
            mode = ImageMode.REFERENCE_ANCHOR if references else ImageMode.FREE

        consolidated = " | ".join(
            part
            for part in (reply.intention, reply.story, f"style: {style}" if style else "")
            if part
        )
        return ImageAgentRequest(
            consolidated_prompt=consolidated,
            mode=mode,
            scaffold=scaffold,
            references=tuple(references),
            style_controls=style,
        )

    def run_image_agent(self, image_request: ImageAgentRequest) -> ImageAssetRef:
        image_request.validate()
        data = self.image_provider.generate(
            image_request.consolidated_prompt,
            {
                "mode": image_request.mode.value,
                "style_controls": image_request.style_controls,
            },
        )
        return self.assets.put(data)

    # --- combined ---

    def generate_card_content(
        self, request: GenerationRequest
    ) -> tuple[TextAgentReply, ImageAssetRef]:
        reply = self.run_text_agent(request)
        asset = self.run_image_agent(self.build_image_request(request, reply))
        return reply, asset
