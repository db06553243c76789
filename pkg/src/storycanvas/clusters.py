"""Object-centered aggregation of highlights into a cluster index.

Highlights tagged with a narrative object are grouped under that object's
identity (trimmed, case-folded name + kind); comment-only highlights stay
card-local and never enter the index. The index is an immutable value with
functional updates, so session code can hand out snapshots freely.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Mapping

from .errors import UnknownObject
from .model.anchors import Highlight
from .model.cards import ObjectKind

ObjectIdentity = tuple[str, ObjectKind]


@dataclass(frozen=True)
class Segment:
    card_id: str
    snapshot: str
    highlight_id: str

    def to_dict(self) -> dict[str, str]:
        return {
            "card_id": self.card_id,
            "snapshot": self.snapshot,
            "highlight_id": self.highlight_id,
        }


@dataclass(frozen=True)
class Comment:
    card_id: str
    text: str
    highlight_id: str

    def to_dict(self) -> dict[str, str]:
        return {
            "card_id": self.card_id,
            "text": self.text,
            "highlight_id": self.highlight_id,
        }


@dataclass(frozen=True)
class ClusterEntry:
    display_name: str
    kind: ObjectKind
    segments: tuple[Segment, ...]
    comments: tuple[Comment, ...]

    @property
    def card_refs(self) -> frozenset[str]:
        # Exactly the cards contributing segments, by construction.
        return frozenset(s.card_id for s in self.segments)

    @property
    def highlight_ids(self) -> frozenset[str]:
        return frozenset(s.highlight_id for s in self.segments) | frozenset(
            c.highlight_id for c in self.comments
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.display_name,
            "kind": self.kind.value,
            "card_refs": sorted(self.card_refs),
            "segments": [s.to_dict() for s in self.segments],
            "comments": [c.to_dict() for c in self.comments],
        }


@dataclass(frozen=True)
class StructuredSummary:
    """Three-section writing scaffold distilled from an entry's materials."""

    settings: str
    description: str
    plot: str
    object_name: str
    object_kind: ObjectKind
    source_highlight_ids: tuple[str, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "settings": self.settings,
            "description": self.description,
            "plot": self.plot,
            "object": {"name": self.object_name, "kind": self.object_kind.value},
            "source_highlight_ids": list(self.source_highlight_ids),
        }


class ClusterIndex:
    """Immutable map from object identity to its collected materials."""

    __slots__ = ("_entries", "_seen")

    def __init__(
        self,
        entries: Mapping[ObjectIdentity, ClusterEntry] | None = None,
        seen: frozenset[str] = frozenset(),
    ):
        self._entries: dict[ObjectIdentity, ClusterEntry] = dict(entries or {})
        self._seen = seen

    def __eq__(self, other: object) -> bool:
        # Equality is over the observable aggregation; the seen-id set is
        # idempotence bookkeeping and survives card deletion on purpose.
        if not isinstance(other, ClusterIndex):
            return NotImplemented
        return self._entries == other._entries

    def __repr__(self) -> str:
        return f"ClusterIndex(entries={len(self._entries)})"

    @property
    def entries(self) -> dict[ObjectIdentity, ClusterEntry]:
        return dict(self._entries)

    def has_seen(self, highlight_id: str) -> bool:
        return highlight_id in self._seen

    def identities(self) -> tuple[ObjectIdentity, ...]:
        return tuple(sorted(self._entries, key=lambda k: (k[1].value, k[0])))

    def register(self, highlight: Highlight) -> "ClusterIndex":
        """Fold one highlight in; idempotent on an already-seen highlight id.

        Comment-only highlights are recorded as seen but do not create or
        extend entries — the index partitions object-tagged highlights only.
        """
        if highlight.id in self._seen:
            return self
        seen = self._seen | {highlight.id}
        if highlight.object is None:
            return ClusterIndex(self._entries, seen)

        identity = highlight.object.identity()
        existing = self._entries.get(identity)
        segment = Segment(
            card_id=highlight.anchor.card_id,
            snapshot=highlight.anchor.snapshot,
            highlight_id=highlight.id,
        )
        comments = []
        if (highlight.comment or "").strip():
            comments.append(
                Comment(
                    card_id=highlight.anchor.card_id,
                    text=highlight.comment or "",
                    highlight_id=highlight.id,
                )
            )
        if existing is None:
            entry = ClusterEntry(
                display_name=highlight.object.name.strip(),
                kind=highlight.object.kind,
                segments=(segment,),
                comments=tuple(comments),
            )
        else:
            entry = ClusterEntry(
                display_name=existing.display_name,
                kind=existing.kind,
                segments=existing.segments + (segment,),
                comments=existing.comments + tuple(comments),
            )
        entries = dict(self._entries)
        entries[identity] = entry
        return ClusterIndex(entries, seen)

    def remove_card(self, card_id: str) -> "ClusterIndex":
        """Prune a deleted card's contributions; drop entries left empty."""
        entries: dict[ObjectIdentity, ClusterEntry] = {}
        for identity, entry in self._entries.items():
            segments = tuple(s for s in entry.segments if s.card_id != card_id)
            comments = tuple(c for c in entry.comments if c.card_id != card_id)
            if segments or comments:
                entries[identity] = ClusterEntry(
                    display_name=entry.display_name,
                    kind=entry.kind,
                    segments=segments,
                    comments=comments,
                )
        return ClusterIndex(entries, self._seen)

    def remove_highlights(self, highlight_ids: Iterable[str]) -> "ClusterIndex":
        """Prune highlights whose anchors were invalidated by story edits."""
        doomed = set(highlight_ids)
        if not doomed:
            return self
        entries: dict[ObjectIdentity, ClusterEntry] = {}
        for identity, entry in self._entries.items():
            segments = tuple(s for s in entry.segments if s.highlight_id not in doomed)
            comments = tuple(c for c in entry.comments if c.highlight_id not in doomed)
            if segments or comments:
                entries[identity] = ClusterEntry(
                    display_name=entry.display_name,
                    kind=entry.kind,
                    segments=segments,
                    comments=comments,
                )
        return ClusterIndex(entries, self._seen - doomed)

    def materials(self, name: str, kind: ObjectKind) -> ClusterEntry:
        identity = (name.strip().casefold(), kind)
        if identity not in self._entries:
            raise UnknownObject(f"no cluster entry for ({name}, {kind.value})")
        return self._entries[identity]

    def export(self) -> dict[str, dict[str, Any]]:
        """JSON view grouped by kind, then by display name."""
        grouped: dict[str, dict[str, Any]] = {k.value: {} for k in ObjectKind}
        for (_, kind), entry in sorted(
            self._entries.items(), key=lambda item: (item[0][1].value, item[0][0])
        ):
            grouped[kind.value][entry.display_name] = entry.to_dict()
        return grouped


def rebuild_index(highlights: Iterable[Highlight], live_cards: Iterable[str]) -> ClusterIndex:
    """Index as computed from scratch over the surviving highlight set."""
    live = set(live_cards)
    index = ClusterIndex()
    for highlight in highlights:
        if highlight.anchor.card_id in live:
            index = index.register(highlight)
    return index


def summarize_entry(
    index: ClusterIndex,
    name: str,
    kind: ObjectKind,
    orchestrator,
    global_theme: str = "",
) -> StructuredSummary:
    """Ask the text agent for a three-section summary of one entry's materials."""
    entry = index.materials(name, kind)
    materials_lines = [f"[{s.card_id}] {s.snapshot}" for s in entry.segments]
    materials_lines.extend(f"(comment) {c.text}" for c in entry.comments)
    payload = {
        "mode": "summarize",
        "object": {"name": entry.display_name, "kind": entry.kind.value},
        "segments": [s.to_dict() for s in entry.segments],
        "comments": [c.text for c in entry.comments],
        "materials_text": "\n".join(materials_lines) or "insufficient material",
        "context": {"global_theme": global_theme},
    }
    sections = orchestrator.run_summary_agent(payload)
    return StructuredSummary(
        settings=sections["settings"],
        description=sections["description"],
        plot=sections["plot"],
        object_name=entry.display_name,
        object_kind=entry.kind,
        source_highlight_ids=tuple(sorted(entry.highlight_ids)),
    )
