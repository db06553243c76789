"""Collage frames: spatial composition of crops, sketches, and notes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Union

from ..errors import BadCropRect, EmptyFrame, InvalidPlacement
from .intents import SketchStroke, _freeze_strokes


@dataclass(frozen=True)
class CropRect:
    """Pixel rectangle inside a source image."""

    left: int
    top: int
    width: int
    height: int

    def __post_init__(self):
        if self.left < 0 or self.top < 0 or self.width <= 0 or self.height <= 0:
            raise BadCropRect(
                f"bad crop rect ({self.left},{self.top},{self.width},{self.height})"
            )

    def to_dict(self) -> dict[str, int]:
        return {
            "left": self.left,
            "top": self.top,
            "width": self.width,
            "height": self.height,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "CropRect":
        return cls(
            left=int(data["left"]),
            top=int(data["top"]),
            width=int(data["width"]),
            height=int(data["height"]),
        )


@dataclass(frozen=True)
class SketchFragment:
    strokes: tuple[SketchStroke, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "type": "sketch",
            "strokes": [[[x, y] for x, y in s] for s in self.strokes],
        }


@dataclass(frozen=True)
class ImageCrop:
    card_id: str
    rect: CropRect

    def to_dict(self) -> dict[str, Any]:
        return {"type": "crop", "card_id": self.card_id, "rect": self.rect.to_dict()}


@dataclass(frozen=True)
class TextNote:
    text: str

    def to_dict(self) -> dict[str, Any]:
        return {"type": "note", "text": self.text}


PlacementSource = Union[SketchFragment, ImageCrop, TextNote]


@dataclass(frozen=True)
class Placement:
    """One composed piece: a source plus normalized frame geometry.

    Position and size are fractions of the collage frame; position is the
    piece's top-left corner.
    """

    source: PlacementSource
    x: float
    y: float
    width: float
    height: float

    def __post_init__(self):
        if not (0.0 <= self.x <= 1.0 and 0.0 <= self.y <= 1.0):
            raise InvalidPlacement(f"position ({self.x},{self.y}) outside [0,1]^2")
        if not (0.0 < self.width <= 1.0 and 0.0 < self.height <= 1.0):
            raise InvalidPlacement(f"size ({self.width},{self.height}) outside (0,1]")
        if isinstance(self.source, TextNote) and not self.source.text.strip():
            raise InvalidPlacement("empty text note")
        if isinstance(self.source, SketchFragment) and not self.source.strokes:
            raise InvalidPlacement("sketch fragment with no strokes")

    def to_dict(self) -> dict[str, Any]:
        return {
            "source": self.source.to_dict(),
            "position": {"x": self.x, "y": self.y},
            "size": {"w": self.width, "h": self.height},
        }


@dataclass(frozen=True)
class CollageFrame:
    placements: tuple[Placement, ...]

    def __post_init__(self):
        if not self.placements:
            raise EmptyFrame("collage frame has no placements")

    def crop_card_ids(self) -> tuple[str, ...]:
        """Contributing card ids, deduped, in first-appearance order."""
        seen: list[str] = []
        for p in self.placements:
            if isinstance(p.source, ImageCrop) and p.source.card_id not in seen:
                seen.append(p.source.card_id)
        return tuple(seen)

    def sketch_strokes(self) -> tuple[SketchStroke, ...]:
        strokes: list[SketchStroke] = []
        for p in self.placements:
            if isinstance(p.source, SketchFragment):
                strokes.extend(p.source.strokes)
        return tuple(strokes)

    def note_texts(self) -> tuple[str, ...]:
        return tuple(
            p.source.text for p in self.placements if isinstance(p.source, TextNote)
        )


def placement_source_from_dict(data: Mapping[str, Any]) -> PlacementSource:
    kind = data.get("type")
    if kind == "sketch":
        return SketchFragment(strokes=_freeze_strokes(data.get("strokes") or ()))
    if kind == "crop":
        return ImageCrop(card_id=str(data["card_id"]), rect=CropRect.from_dict(data["rect"]))
    if kind == "note":
        return TextNote(text=str(data.get("text", "")))
    raise InvalidPlacement(f"unknown placement source type: {kind!r}")


def placement_from_dict(data: Mapping[str, Any]) -> Placement:
    pos = data.get("position") or {}
    size = data.get("size") or {}
    return Placement(
        source=placement_source_from_dict(data.get("source") or {}),
        x=float(pos.get("x", 0.0)),
        y=float(pos.get("y", 0.0)),
        width=float(size.get("w", 0.0)),
        height=float(size.get("h", 0.0)),
    )


def frame_from_dict(data: Mapping[str, Any]) -> CollageFrame:
    placements = data.get("placements")
    if not placements:
        raise EmptyFrame("collage frame has no placements")
    return CollageFrame(placements=tuple(placement_from_dict(p) for p in placements))
