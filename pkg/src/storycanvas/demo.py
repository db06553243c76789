"""Scripted mock session used by the demo CLI command and the report tests."""

from __future__ import annotations

from typing import Any

from .orchestrator.agent import Orchestrator
from .orchestrator.assets import AssetStore
from .orchestrator.providers import ProviderConfig
from .service.sessions import (
    EV_COLLAGE,
    EV_FILTER,
    EV_GENERATE,
    EV_HIGHLIGHT,
    EV_LASSO,
    EV_PERSPECTIVE,
    EV_SESSION_CREATED,
    Session,
    SessionEngine,
    export_session,
)


def build_demo_session() -> dict[str, Any]:
    """A small but instrument-complete session: every tool appears once."""
    assets = AssetStore()
    engine = SessionEngine(Orchestrator(ProviderConfig(mock=True), assets))
    session = Session("demo")

    def run(event_type: str, payload: dict[str, Any]) -> dict[str, Any]:
        return engine.apply(session, session.next_event(event_type, payload))

    run(
        EV_SESSION_CREATED,
        {
            "theme": "a sealed wooden box on a doorstep",
            "outline": "Claire finds a box crusted with sea salt.",
            "draft_text": "",
        },
    )
    run(
        EV_GENERATE,
        {
            "mode": "exact_craft",
            "intent": {"typed_text": "Claire lifts the box and hears something shift."},
        },
    )
    run(
        EV_GENERATE,
        {
            "mode": "creative_spark",
            "intent": {
                "typed_text": "what waits inside the box",
                "reference_cards": ["demo.c1"],
            },
        },
    )
    run(
        EV_LASSO,
        {"card_id": "demo.c1", "text_range": {"start": 5, "end": 25}},
    )
    run(EV_FILTER, {"card_id": "demo.c2", "kind": "dreamy"})
    run(EV_PERSPECTIVE, {"card_id": "demo.c5", "target": "first"})
    run(
        EV_COLLAGE,
        {
            "frame": {
                "placements": [
                    {
                        "source": {
                            "type": "crop",
                            "card_id": "demo.c1",
                            "rect": {"left": 0, "top": 0, "width": 32, "height": 32},
                        },
                        "position": {"x": 0.1, "y": 0.1},
                        "size": {"w": 0.4, "h": 0.4},
                    },
                    {
                        "source": {
                            "type": "crop",
                            "card_id": "demo.c3",
                            "rect": {"left": 16, "top": 16, "width": 32, "height": 32},
                        },
                        "position": {"x": 0.55, "y": 0.5},
                        "size": {"w": 0.4, "h": 0.4},
                    },
                    {"source": {"type": "note", "text": "the box opens near the sea"},
                     "position": {"x": 0.2, "y": 0.8}, "size": {"w": 0.5, "h": 0.1}},
                ]
            },
            "intent_text": "merge the box with the shoreline",
        },
    )
    run(
        EV_HIGHLIGHT,
        {
            "card_id": "demo.c1",
            "start": 0,
            "end": 10,
            "object": {"name": "Claire", "kind": "character"},
            "comment": "protagonist introduction",
        },
    )
    return export_session(session, assets)
