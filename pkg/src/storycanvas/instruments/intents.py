"""Writer intent bundles.

A MultimodalIntent is everything the writer put into a generation gesture:
typed text, a rasterized canvas screenshot, freehand sketch strokes, and
references to existing cards, plus the surrounding context (global theme and
prior draft text). Intents serialize canonically so identical gestures hash
identically — the hash is what groups variation siblings in provenance.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Any, Mapping, Sequence

from ..model.cards import ImageAssetRef, canonical_json

# One stroke is an ordered polyline of canvas-coordinate points.
SketchStroke = tuple[tuple[float, float], ...]


def _freeze_strokes(strokes: Sequence[Sequence[Sequence[float]]]) -> tuple[SketchStroke, ...]:
    return tuple(
        tuple((float(x), float(y)) for x, y in stroke) for stroke in strokes
    )


@dataclass(frozen=True)
class MultimodalIntent:
    typed_text: str | None = None
    screenshot: ImageAssetRef | None = None
    sketch_strokes: tuple[SketchStroke, ...] = ()
    reference_cards: tuple[str, ...] = ()
    global_theme: str = ""
    prior_text: str = ""

    def is_empty(self) -> bool:
        """True when no expressive channel is present (context alone is not intent)."""
        return not (
            (self.typed_text or "").strip()
            or self.screenshot is not None
            or self.sketch_strokes
            or self.reference_cards
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "typed_text": self.typed_text,
            "screenshot": self.screenshot.to_dict() if self.screenshot else None,
            "sketch_strokes": [
                [[x, y] for x, y in stroke] for stroke in self.sketch_strokes
            ],
            "reference_cards": list(self.reference_cards),
            "global_theme": self.global_theme,
            "prior_text": self.prior_text,
        }

    def canonical_json(self) -> str:
        return canonical_json(self.to_dict())

    def intent_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "MultimodalIntent":
        screenshot = data.get("screenshot")
        return cls(
            typed_text=data.get("typed_text"),
            screenshot=ImageAssetRef.from_dict(screenshot) if screenshot else None,
            sketch_strokes=_freeze_strokes(data.get("sketch_strokes") or ()),
            reference_cards=tuple(str(c) for c in data.get("reference_cards") or ()),
            global_theme=str(data.get("global_theme") or ""),
            prior_text=str(data.get("prior_text") or ""),
        )


@dataclass(frozen=True)
class StoryContext:
    """Session-level context threaded into card-scoped instrument gestures."""

    global_theme: str = ""
    prior_text: str = ""
