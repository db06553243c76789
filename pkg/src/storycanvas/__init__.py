"""storycanvas: card-based story co-editing engine.

Writer gestures become persistent image-text cards; four coupled instruments
(lasso, collage, filter, perspective shift) and two generation modes keep the
two modalities structurally aligned, with provenance tracking, an
object-centered cluster panel, and an HTTP session service on top.
"""

from .model import (
    Card,
    FilterKind,
    Highlight,
    ImageAssetRef,
    InstrumentKind,
    NarrativeObject,
    ObjectKind,
    ProvenanceEdge,
    ProvenanceGraph,
    TextAnchor,
    TextEdit,
    Voice,
    rebase_anchor,
    validate_card,
)
from .service import compute_metrics, create_app

__version__ = "0.1.0"

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
    "TextAnchor",
    "TextEdit",
    "Voice",
    "__version__",
    "compute_metrics",
    "create_app",
    "rebase_anchor",
    "validate_card",
]
