"""Text anchors, highlights, and anchor rebasing across story edits.

Offsets are Unicode scalar-value indices (plain Python string indices), so
anchors transfer unchanged across the API boundary. Rebasing is deliberately
conservative: an edit that touches the anchored span invalidates the anchor
instead of guessing how it stretched.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Any, Mapping

from ..errors import OutOfBounds
from .cards import NarrativeObject


@dataclass(frozen=True)
class TextAnchor:
    """Half-open character range [start, end) into one card's story."""

    card_id: str
    start: int
    end: int
    snapshot: str

    def __post_init__(self):
        if self.start < 0 or self.start >= self.end:
            raise OutOfBounds(f"bad anchor range [{self.start}, {self.end})")
        if len(self.snapshot) != self.end - self.start:
            raise OutOfBounds("snapshot length does not match anchor range")

    @classmethod
    def create(cls, card_id: str, story: str, start: int, end: int) -> "TextAnchor":
        if not (0 <= start < end <= len(story)):
            raise OutOfBounds(
                f"anchor [{start}, {end}) outside story of length {len(story)}"
            )
        return cls(card_id=card_id, start=start, end=end, snapshot=story[start:end])

    def to_dict(self) -> dict[str, Any]:
        return {
            "card_id": self.card_id,
            "start": self.start,
            "end": self.end,
            "snapshot": self.snapshot,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "TextAnchor":
        return cls(
            card_id=str(data["card_id"]),
            start=int(data["start"]),
            end=int(data["end"]),
            snapshot=str(data["snapshot"]),
        )


@dataclass(frozen=True)
class Highlight:
    """A writer mark on a story span: an object tag, a comment, or both."""

    id: str
    anchor: TextAnchor
    object: NarrativeObject | None = None
    comment: str | None = None

    def __post_init__(self):
        if self.object is None and not (self.comment or "").strip():
            raise ValueError("highlight needs an object or a comment")

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "anchor": self.anchor.to_dict(),
            "object": self.object.to_dict() if self.object else None,
            "comment": self.comment,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Highlight":
        obj = data.get("object")
        return cls(
            id=str(data["id"]),
            anchor=TextAnchor.from_dict(data["anchor"]),
            object=NarrativeObject.from_dict(obj) if obj else None,
            comment=data.get("comment"),
        )


@dataclass(frozen=True)
class TextEdit:
    """One splice: delete ``deleted_len`` chars at ``position``, insert ``inserted_len``."""

    position: int
    deleted_len: int
    inserted_len: int

    def __post_init__(self):
        if self.position < 0 or self.deleted_len < 0 or self.inserted_len < 0:
            raise OutOfBounds("edit fields must be non-negative")

    @property
    def delta(self) -> int:
        return self.inserted_len - self.deleted_len


def apply_edit(story: str, position: int, delete: int, insert: str) -> str:
    """Splice a story string; raises OutOfBounds for invalid positions."""
    if position < 0 or delete < 0 or position + delete > len(story):
        raise OutOfBounds(
            f"edit at {position} deleting {delete} exceeds story of length {len(story)}"
        )
    return story[:position] + insert + story[position + delete:]


def rebase_anchor(
    anchor: TextAnchor, edit: TextEdit, story_len: int | None = None
) -> TextAnchor | None:
    """Carry an anchor across an edit; ``None`` means the anchor is invalidated.

    Edits entirely before the span shift both offsets by the edit's length
    delta; edits entirely after leave it untouched; anything overlapping the
    span invalidates it. A zero-length zero-insert edit is a no-op wherever
    it lands.
    """
    if story_len is not None and edit.position + edit.deleted_len > story_len:
        raise OutOfBounds(
            f"edit at {edit.position} deleting {edit.deleted_len} exceeds story of length {story_len}"
        )
    if edit.deleted_len == 0 and edit.inserted_len == 0:
        return anchor
    if edit.position + edit.deleted_len <= anchor.start:
        return replace(anchor, start=anchor.start + edit.delta, end=anchor.end + edit.delta)
    if edit.position >= anchor.end:
        return anchor
    return None


def rebase_through(
    anchor: TextAnchor, edits: list[TextEdit] | tuple[TextEdit, ...]
) -> TextAnchor | None:
    """Fold an edit script over an anchor; stops at the first invalidation.

    Each edit's position is expressed in the text produced by the previous
    edits, so scripts compose the same way sequential rebasing does.
    """
    current: TextAnchor | None = anchor
    for edit in edits:
        if current is None:
            return None
        current = rebase_anchor(current, edit)
    return current
