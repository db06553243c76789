"""Card data model.

A card is the atomic narrative unit: one image, one story fragment, the
narrative-object keywords extracted for it, a narration voice, an optional
style filter, and the instrument that produced it. Everything here is an
immutable value; serialization is canonical JSON (sorted keys, compact
separators) so equal values always produce identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, Iterable, Mapping


class Voice(str, Enum):
    FIRST = "first"
    SECOND = "second"
    THIRD = "third"


class ObjectKind(str, Enum):
    CHARACTER = "character"
    OBJECT = "object"
    SCENE = "scene"


class FilterKind(str, Enum):
    WARM = "warm"
    CALM = "calm"
    DRAMATIC = "dramatic"
    DREAMY = "dreamy"
    MONOCHROME = "monochrome"


class InstrumentKind(str, Enum):
    EXACT_CRAFT = "exact_craft"
    CREATIVE_SPARK = "creative_spark"
    LASSO = "lasso"
    COLLAGE = "collage"
    FILTER = "filter"
    PERSPECTIVE_SHIFT = "perspective_shift"


STORY_WORD_CAP = 100


def canonical_json(value: Any) -> str:
    """Deterministic JSON encoding used for wire formats and hashing."""
    return json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


@dataclass(frozen=True)
class NarrativeObject:
    """A keyword naming a character, object, or scene."""

    name: str
    kind: ObjectKind

    def identity(self) -> tuple[str, ObjectKind]:
        # Object identity is exact match after trim + case-fold.
        return (self.name.strip().casefold(), self.kind)

    def to_dict(self) -> dict[str, str]:
        return {"name": self.name, "kind": self.kind.value}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "NarrativeObject":
        return cls(name=str(data["name"]), kind=ObjectKind(data["kind"]))


@dataclass(frozen=True)
class ImageAssetRef:
    """Reference into the asset store; dimensions are pixel counts."""

    asset_id: str
    width: int
    height: int
    format: str = "png"

    def to_dict(self) -> dict[str, Any]:
        return {
            "asset_id": self.asset_id,
            "format": self.format,
            "width": self.width,
            "height": self.height,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ImageAssetRef":
        return cls(
            asset_id=str(data["asset_id"]),
            width=int(data["width"]),
            height=int(data["height"]),
            format=str(data.get("format", "png")),
        )


@dataclass(frozen=True)
class Card:
    id: str
    story: str
    image: ImageAssetRef
    objects: tuple[NarrativeObject, ...]
    voice: Voice
    origin: InstrumentKind
    created_at: float
    filter: FilterKind | None = None

    def word_count(self) -> int:
        return len(self.story.split())

    def with_story(self, story: str) -> "Card":
        return replace(self, story=story)

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "story": self.story,
            "image": self.image.to_dict(),
            "objects": [o.to_dict() for o in self.objects],
            "voice": self.voice.value,
            "filter": self.filter.value if self.filter else None,
            "created_at": self.created_at,
            "origin": self.origin.value,
        }

    def to_json(self) -> str:
        return canonical_json(self.to_dict())

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Card":
        return cls(
            id=str(data["id"]),
            story=str(data["story"]),
            image=ImageAssetRef.from_dict(data["image"]),
            objects=tuple(NarrativeObject.from_dict(o) for o in data["objects"]),
            voice=Voice(data["voice"]),
            origin=InstrumentKind(data["origin"]),
            created_at=float(data["created_at"]),
            filter=FilterKind(data["filter"]) if data.get("filter") else None,
        )


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a card check: hard errors plus advisory warnings."""

    errors: tuple[str, ...] = ()
    warnings: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.errors and not self.warnings


def merge_objects(groups: Iterable[Iterable[NarrativeObject]]) -> tuple[NarrativeObject, ...]:
    """Order-preserving union of object keyword lists, deduped by identity."""
    seen: set[tuple[str, ObjectKind]] = set()
    merged: list[NarrativeObject] = []
    for group in groups:
        for obj in group:
            key = obj.identity()
            if key not in seen:
                seen.add(key)
                merged.append(obj)
    return tuple(merged)


def validate_card(card: Card) -> ValidationReport:
    """Check a card against the model invariants.

    Violations of structural invariants are errors; exceeding the 100-word
    story cap is only a warning, because the cap constrains generation, not
    what the writer may edit a story into afterwards.
    """
    errors: list[str] = []
    warnings: list[str] = []

    if not card.story.strip():
        errors.append("empty story")
    if not card.image.asset_id.strip():
        errors.append("empty image reference")
    if card.image.width <= 0 or card.image.height <= 0:
        errors.append("non-positive image dimensions")

    seen: set[tuple[str, ObjectKind]] = set()
    for obj in card.objects:
        if not obj.name.strip():
            errors.append("empty object name")
            continue
        key = obj.identity()
        if key in seen:
            errors.append(f"duplicate object ({obj.name.strip()}, {obj.kind.value})")
        seen.add(key)

    if card.word_count() > STORY_WORD_CAP:
        warnings.append(f"exceeds {STORY_WORD_CAP}-word story cap")

    return ValidationReport(errors=tuple(errors), warnings=tuple(warnings))
