from .anchors import Highlight, TextAnchor, TextEdit, apply_edit, rebase_anchor, rebase_through
from .cards import (
    Card,
    FilterKind,
    ImageAssetRef,
    InstrumentKind,
    NarrativeObject,
    ObjectKind,
    STORY_WORD_CAP,
    ValidationReport,
    Voice,
    canonical_json,
    merge_objects,
    validate_card,
)
from .provenance import ProvenanceEdge, ProvenanceGraph

__all__ = [
    "Card",
    "FilterKind",
    "Highlight",
    "ImageAssetRef",
    "InstrumentKind",
    "NarrativeObject",
    "ObjectKind",
    "ProvenanceEdge",
    "ProvenanceGraph",
    "STORY_WORD_CAP",
    "TextAnchor",
    "TextEdit",
    "ValidationReport",
    "Voice",
    "apply_edit",
    "canonical_json",
    "merge_objects",
    "rebase_anchor",
    "rebase_through",
    "validate_card",
]
