"""Generation request wire format.

Every instrument reduces to one fully specified GenerationRequest per card to
produce. Serialization is canonical and total: identical inputs give
byte-identical JSON, optional sections appear only when the instrument uses
them, and collage placements are ordered by (y, x) so spatial layout reads as
stable machine intent.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from enum import Enum
from typing import Any, Mapping

from ..model.cards import Card, ImageAssetRef, NarrativeObject, Voice, canonical_json
from .collage import CropRect, Placement
from .filters import FilterDirectives
from .intents import MultimodalIntent


class VariationAxis(str, Enum):
    CHARACTER = "character"
    SETTING = "setting"
    OBJECT = "object"


# Fixed axis order for variation triples: makes the three outputs comparable
# across runs and directly testable.
SPARK_AXES: tuple[VariationAxis, ...] = (
    VariationAxis.CHARACTER,
    VariationAxis.SETTING,
    VariationAxis.OBJECT,
)


@dataclass(frozen=True)
class SourceCard:
    """Snapshot of a consumed card, embedded in the request."""

    id: str
    story: str
    objects: tuple[NarrativeObject, ...]
    voice: Voice
    image: ImageAssetRef

    @classmethod
    def of(cls, card: Card) -> "SourceCard":
        return cls(
            id=card.id,
            story=card.story,
            objects=card.objects,
            voice=card.voice,
            image=card.image,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "story": self.story,
            "objects": [o.to_dict() for o in self.objects],
            "voice": self.voice.value,
            "image": self.image.to_dict(),
        }


@dataclass(frozen=True)
class CropRef:
    """A masked-crop artifact: where it came from and where its bytes live."""

    source_card: str
    bbox: CropRect
    asset_id: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "source_card": self.source_card,
            "bbox": self.bbox.to_dict(),
            "asset_id": self.asset_id,
        }


@dataclass(frozen=True)
class GenerationRequest:
    mode: str
    intent: MultimodalIntent
    sources: tuple[SourceCard, ...] = ()
    focal_text: str | None = None
    crop: CropRef | None = None
    placements: tuple[Placement, ...] | None = None
    filter_delta: FilterDirectives | None = None
    filter_kind: str | None = None
    voice_target: Voice | None = None
    variation_axis: VariationAxis | None = None

    def to_dict(self) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "mode": self.mode,
            "intent": self.intent.to_dict(),
            "context": {
                "global_theme": self.intent.global_theme,
                "prior_text": self.intent.prior_text,
            },
            "sources": [s.to_dict() for s in self.sources],
        }
        if self.focal_text is not None:
            payload["focal_text"] = self.focal_text
        if self.crop is not None:
            payload["crop"] = self.crop.to_dict()
        if self.placements is not None:
            ordered = sorted(self.placements, key=lambda p: (p.y, p.x))
            payload["placements"] = [p.to_dict() for p in ordered]
        if self.filter_delta is not None:
            payload["filter_delta"] = {
                "kind": self.filter_kind,
                "image": self.filter_delta.image_style,
                "text": self.filter_delta.text_tone,
            }
        if self.voice_target is not None:
            payload["voice_target"] = self.voice_target.value
        if self.variation_axis is not None:
            payload["variation_axis"] = self.variation_axis.value
        return payload

    def canonical_json(self) -> str:
        return canonical_json(self.to_dict())

    def request_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()


def primary_text(payload: Mapping[str, Any]) -> str:
    """The request's consolidated text focus, from its serialized form.

    This single derivation feeds both prompt assembly and the mock text
    provider, so what gets asked for and what the mock echoes always agree.
    """
    intent = payload.get("intent") or {}
    base = payload.get("focal_text")
    if not base:
        base = (intent.get("typed_text") or "").strip()
    if not base:
        delta = payload.get("filter_delta")
        if delta:
            base = delta["text"]
        elif payload.get("voice_target"):
            base = f"Retell from the {payload['voice_target']}-person perspective"
        elif payload.get("crop"):
            base = "the lassoed image region"
    axis = payload.get("variation_axis")
    if axis:
        base = f"{base or ''} [vary the {axis}]".strip()
    return base or ""
