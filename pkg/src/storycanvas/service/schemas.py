"""Request body shapes for the HTTP API.

These models check structure and types only; domain rules (empty intents,
bad ranges, voice clashes, ...) are enforced by the engine so their error
codes match the instrument contracts.
"""

from __future__ import annotations

from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field


class ApiModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class IntentBody(ApiModel):
    typed_text: Optional[str] = None
    screenshot_png_b64: Optional[str] = None
    sketch_strokes: Optional[list[list[tuple[float, float]]]] = None
    reference_cards: Optional[list[str]] = None
    global_theme: Optional[str] = None
    prior_text: Optional[str] = None

    def to_payload(self) -> dict[str, Any]:
        return self.model_dump(exclude_none=True)


class SessionCreateBody(ApiModel):
    theme: str = ""
    outline: str = ""
    draft_text: str = ""


class GenerateBody(ApiModel):
    mode: Literal["exact_craft", "creative_spark"]
    intent: IntentBody


class TextRangeBody(ApiModel):
    start: int
    end: int


class LassoBody(ApiModel):
    text_range: Optional[TextRangeBody] = None
    polygon: Optional[list[tuple[float, float]]] = None


class PlacementPositionBody(ApiModel):
    x: float
    y: float


class PlacementSizeBody(ApiModel):
    w: float
    h: float


class PlacementSourceBody(ApiModel):
    model_config = ConfigDict(extra="allow")

    type: Literal["sketch", "crop", "note"]


class PlacementBody(ApiModel):
    source: PlacementSourceBody
    position: PlacementPositionBody
    size: PlacementSizeBody


class CollageFrameBody(ApiModel):
    placements: list[PlacementBody] = Field(default_factory=list)


class CollageBody(ApiModel):
    frame: CollageFrameBody
    intent_text: Optional[str] = None


class FilterBody(ApiModel):
    kind: Literal["warm", "calm", "dramatic", "dreamy", "monochrome"]


class PerspectiveBody(ApiModel):
    target: Literal["first", "second", "third"]


class StoryEditBody(ApiModel):
    position: int
    delete: int = 0
    insert: str = ""


class ObjectBody(ApiModel):
    name: str
    kind: Literal["character", "object", "scene"]


class HighlightBody(ApiModel):
    card_id: str
    start: int
    end: int
    object: Optional[ObjectBody] = None
    comment: Optional[str] = None


class LayoutBody(ApiModel):
    x: float
    y: float
    w: float
    h: float


class ContextBody(ApiModel):
    theme: Optional[str] = None
    outline: Optional[str] = None
    draft_text: Optional[str] = None
