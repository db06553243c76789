"""Sessions: authoritative state, event log, apply engine, export/import.

Every mutation is an event. Live requests build an event, run it through the
same apply engine that replay uses, and append it only when the handler
succeeds — so a failed request leaves no trace, and replaying an exported
event log (with mock providers) reconstructs the session field for field.
Determinism rests on three choices: card/highlight ids come from per-session
counters, timestamps are read from the event being applied, and image assets
are content-addressed.
"""

from __future__ import annotations

import base64
import binascii
import threading
import time
import uuid
from dataclasses import dataclass, replace
from typing import Any, Callable, Mapping

from ..clusters import ClusterIndex
from ..errors import (
    CorruptAsset,
    SchemaVersionMismatch,
    UnknownCard,
    UnknownSession,
    ValidationFailure,
)
from ..instruments.collage import frame_from_dict
from ..instruments.engine import (
    InstrumentResult,
    plan_collage,
    plan_creative_spark,
    plan_exact_craft,
    plan_filter,
    plan_lasso_image,
    plan_lasso_text,
    plan_perspective_shift,
    realize,
)
from ..instruments.intents import MultimodalIntent, StoryContext
from ..model.anchors import Highlight, TextAnchor, TextEdit, apply_edit, rebase_anchor
from ..model.cards import (
    Card,
    FilterKind,
    NarrativeObject,
    ObjectKind,
    Voice,
    canonical_json,
)
from ..model.provenance import ProvenanceGraph
from ..orchestrator.agent import Orchestrator
from ..orchestrator.assets import content_id

EXPORT_SCHEMA_VERSION = 1

# Event types
EV_SESSION_CREATED = "session_created"
EV_GENERATE = "generate"
EV_LASSO = "lasso"
EV_COLLAGE = "collage"
EV_FILTER = "filter"
EV_PERSPECTIVE = "perspective"
EV_STORY_EDIT = "story_edit"
EV_HIGHLIGHT = "highlight"
EV_CARD_DELETE = "card_delete"
EV_LAYOUT = "layout"
EV_CONTEXT = "context"


@dataclass
class Layout:
    x: float
    y: float
    w: float
    h: float

    def to_dict(self) -> dict[str, float]:
        return {"x": self.x, "y": self.y, "w": self.w, "h": self.h}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Layout":
        return cls(
            x=float(data["x"]), y=float(data["y"]), w=float(data["w"]), h=float(data["h"])
        )


@dataclass
class GlobalContext:
    theme: str = ""
    outline: str = ""
    draft_text: str = ""

    def to_dict(self) -> dict[str, str]:
        return {"theme": self.theme, "outline": self.outline, "draft_text": self.draft_text}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "GlobalContext":
        return cls(
            theme=str(data.get("theme", "")),
            outline=str(data.get("outline", "")),
            draft_text=str(data.get("draft_text", "")),
        )

    def prior_text(self) -> str:
        return "\n\n".join(part for part in (self.outline, self.draft_text) if part)


@dataclass(frozen=True)
class Event:
    seq: int
    ts: float
    type: str
    payload: dict[str, Any]

    def to_dict(self) -> dict[str, Any]:
        return {"seq": self.seq, "ts": self.ts, "type": self.type, "payload": self.payload}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Event":
        return cls(
            seq=int(data["seq"]),
            ts=float(data["ts"]),
            type=str(data["type"]),
            payload=dict(data["payload"]),
        )


def _default_layout(position: int) -> Layout:
    column, row = position % 4, position // 4
    return Layout(x=40.0 + 260.0 * column, y=40.0 + 230.0 * row, w=240.0, h=200.0)


class Session:
    """Mutable per-writer state; mutated only by the apply engine."""

    def __init__(self, session_id: str):
        self.id = session_id
        self.global_context = GlobalContext()
        self.cards: dict[str, Card] = {}
        self.graph = ProvenanceGraph()
        self.canvas: dict[str, Layout] = {}
        self.highlights: dict[str, Highlight] = {}
        self.index = ClusterIndex()
        self.event_log: list[Event] = []
        self.card_seq = 0
        self.highlight_seq = 0
        self.last_touched = time.time()

    # --- deterministic id and timestamp generation ---

    def next_ts(self) -> float:
        ts = time.time()
        if self.event_log and ts < self.event_log[-1].ts:
            ts = self.event_log[-1].ts
        return ts

    def next_event(self, event_type: str, payload: dict[str, Any]) -> Event:
        return Event(seq=len(self.event_log), ts=self.next_ts(), type=event_type, payload=payload)

    def new_card_id(self) -> str:
        self.card_seq += 1
        return f"{self.id}.c{self.card_seq}"

    def new_highlight_id(self) -> str:
        self.highlight_seq += 1
        return f"{self.id}.h{self.highlight_seq}"

    def touch(self) -> None:
        self.last_touched = time.time()

    def get_card(self, card_id: str) -> Card:
        if card_id not in self.cards:
            raise UnknownCard(f"unknown card: {card_id}")
        return self.cards[card_id]

    def story_context(self) -> StoryContext:
        return StoryContext(
            global_theme=self.global_context.theme,
            prior_text=self.global_context.prior_text(),
        )

    def view(self) -> dict[str, Any]:
        """Read model served by GET /sessions/{id}."""
        return {
            "id": self.id,
            "global_context": self.global_context.to_dict(),
            "cards": {cid: card.to_dict() for cid, card in self.cards.items()},
            "graph": self.graph.to_dict(),
            "canvas": {cid: layout.to_dict() for cid, layout in self.canvas.items()},
            "highlights": [self.highlights[hid].to_dict() for hid in self.highlights],
            "event_count": len(self.event_log),
        }


class SessionEngine:
    """Applies events to sessions; shared by live mutations and replay."""

    def __init__(self, orchestrator: Orchestrator):
        self.orchestrator = orchestrator
        self.assets = orchestrator.assets
        self._handlers: dict[str, Callable[[Session, Event], dict[str, Any]]] = {
            EV_SESSION_CREATED: self._on_session_created,
            EV_GENERATE: self._on_generate,
            EV_LASSO: self._on_lasso,
            EV_COLLAGE: self._on_collage,
            EV_FILTER: self._on_filter,
            EV_PERSPECTIVE: self._on_perspective,
            EV_STORY_EDIT: self._on_story_edit,
            EV_HIGHLIGHT: self._on_highlight,
            EV_CARD_DELETE: self._on_card_delete,
            EV_LAYOUT: self._on_layout,
            EV_CONTEXT: self._on_context,
        }

    def apply(self, session: Session, event: Event) -> dict[str, Any]:
        """Run one event; the event is logged only if its handler succeeds."""
        handler = self._handlers.get(event.type)
        if handler is None:
            raise ValidationFailure(f"unknown event type: {event.type}")
        result = handler(session, event)
        session.event_log.append(event)
        session.touch()
        return result

    # --- intent ingestion ---

    def _ingest_intent(self, session: Session, data: Mapping[str, Any]) -> MultimodalIntent:
        screenshot_ref = None
        b64 = data.get("screenshot_png_b64")
        if b64:
            try:
                blob = base64.b64decode(b64, validate=True)
                screenshot_ref = self.assets.put(blob)
            except (binascii.Error, ValueError, OSError) as exc:
                raise ValidationFailure(f"bad screenshot payload: {exc}") from exc
        context = session.story_context()
        return MultimodalIntent(
            typed_text=data.get("typed_text"),
            screenshot=screenshot_ref,
            sketch_strokes=tuple(
                tuple((float(x), float(y)) for x, y in stroke)
                for stroke in data.get("sketch_strokes") or ()
            ),
            reference_cards=tuple(str(c) for c in data.get("reference_cards") or ()),
            global_theme=str(data.get("global_theme") or context.global_theme),
            prior_text=str(data.get("prior_text") or context.prior_text),
        )

    def _insert(self, session: Session, result: InstrumentResult) -> None:
        graph = session.graph
        for card in result.cards:
            session.cards[card.id] = card
            graph = graph.add_node(card.id, meta=result.node_meta.get(card.id))
            session.canvas[card.id] = _default_layout(len(session.canvas))
        for edge in result.edges:
            graph = graph.add_edge(edge)
        session.graph = graph

    # --- handlers ---

    def _on_session_created(self, session: Session, event: Event) -> dict[str, Any]:
        session.global_context = GlobalContext.from_dict(event.payload)
        return {"id": session.id}

    def _on_generate(self, session: Session, event: Event) -> dict[str, Any]:
        intent = self._ingest_intent(session, event.payload.get("intent") or {})
        mode = event.payload.get("mode")
        if mode == "exact_craft":
            plan = plan_exact_craft(intent, session.cards)
        elif mode == "creative_spark":
            plan = plan_creative_spark(intent, session.cards)
        else:
            raise ValidationFailure(f"unknown generation mode: {mode!r}")
        result = realize(
            plan, self.orchestrator.generate_card_content, session.new_card_id, event.ts
        )
        self._insert(session, result)
        return {"cards": [card.to_dict() for card in result.cards]}

    def _on_lasso(self, session: Session, event: Event) -> dict[str, Any]:
        source = session.get_card(str(event.payload["card_id"]))
        context = session.story_context()
        text_range = event.payload.get("text_range")
        polygon = event.payload.get("polygon")
        if (text_range is None) == (polygon is None):
            raise ValidationFailure("lasso needs exactly one of text_range or polygon")
        if text_range is not None:
            plan = plan_lasso_text(
                source, int(text_range["start"]), int(text_range["end"]), context
            )
        else:
            image_bytes = self.assets.get(source.image.asset_id)
            plan = plan_lasso_image(
                source,
                [(float(x), float(y)) for x, y in polygon],
                image_bytes,
                self.assets.put,
                context,
            )
        result = realize(
            plan, self.orchestrator.generate_card_content, session.new_card_id, event.ts
        )
        self._insert(session, result)
        return {"cards": [card.to_dict() for card in result.cards]}

    def _on_collage(self, session: Session, event: Event) -> dict[str, Any]:
        initiator = event.payload.get("initiator_card_id")
        if initiator is not None:
            session.get_card(str(initiator))
        frame = frame_from_dict(event.payload.get("frame") or {})
        plan = plan_collage(
            frame,
            event.payload.get("intent_text"),
            session.cards,
            session.story_context(),
        )
        result = realize(
            plan, self.orchestrator.generate_card_content, session.new_card_id, event.ts
        )
        self._insert(session, result)
        return {"cards": [card.to_dict() for card in result.cards]}

    def _on_filter(self, session: Session, event: Event) -> dict[str, Any]:
        source = session.get_card(str(event.payload["card_id"]))
        try:
            kind = FilterKind(event.payload["kind"])
        except ValueError as exc:
            raise ValidationFailure(f"unknown filter kind: {event.payload['kind']!r}") from exc
        plan = plan_filter(source, kind, session.story_context())
        result = realize(
            plan, self.orchestrator.generate_card_content, session.new_card_id, event.ts
        )
        self._insert(session, result)
        return {"cards": [card.to_dict() for card in result.cards]}

    def _on_perspective(self, session: Session, event: Event) -> dict[str, Any]:
        source = session.get_card(str(event.payload["card_id"]))
        try:
            target = Voice(event.payload["target"])
        except ValueError as exc:
            raise ValidationFailure(f"unknown voice: {event.payload['target']!r}") from exc
        plan = plan_perspective_shift(source, target, session.story_context())
        result = realize(
            plan, self.orchestrator.generate_card_content, session.new_card_id, event.ts
        )
        self._insert(session, result)
        return {"cards": [card.to_dict() for card in result.cards]}

    def _on_story_edit(self, session: Session, event: Event) -> dict[str, Any]:
        card = session.get_card(str(event.payload["card_id"]))
        position = int(event.payload["position"])
        delete = int(event.payload.get("delete", 0))
        insert = str(event.payload.get("insert", ""))
        new_story = apply_edit(card.story, position, delete, insert)
        if not new_story.strip():
            raise ValidationFailure("edit would leave an empty story")

        edit = TextEdit(position=position, deleted_len=delete, inserted_len=len(insert))
        rebased: list[str] = []
        invalidated: list[str] = []
        updated: dict[str, Highlight] = {}
        for hid, highlight in session.highlights.items():
            if highlight.anchor.card_id != card.id:
                continue
            moved = rebase_anchor(highlight.anchor, edit, story_len=len(card.story))
            if moved is None:
                invalidated.append(hid)
            elif moved is not highlight.anchor:
                updated[hid] = replace(highlight, anchor=moved)
                rebased.append(hid)

        session.cards[card.id] = card.with_story(new_story)
        for hid, highlight in updated.items():
            session.highlights[hid] = highlight
        for hid in invalidated:
            del session.highlights[hid]
        session.index = session.index.remove_highlights(invalidated)
        return {
            "card": session.cards[card.id].to_dict(),
            "rebased": rebased,
            "invalidated": invalidated,
        }

    def _on_highlight(self, session: Session, event: Event) -> dict[str, Any]:
        card = session.get_card(str(event.payload["card_id"]))
        anchor = TextAnchor.create(
            card.id, card.story, int(event.payload["start"]), int(event.payload["end"])
        )
        obj_data = event.payload.get("object")
        obj = None
        if obj_data:
            try:
                obj = NarrativeObject(
                    name=str(obj_data["name"]), kind=ObjectKind(obj_data["kind"])
                )
            except (KeyError, ValueError) as exc:
                raise ValidationFailure(f"bad narrative object: {exc}") from exc
            if not obj.name.strip():
                raise ValidationFailure("object name is empty")
        comment = event.payload.get("comment")
        if obj is None and not (comment or "").strip():
            raise ValidationFailure("highlight needs an object or a comment")

        highlight = Highlight(
            id=session.new_highlight_id(), anchor=anchor, object=obj, comment=comment
        )
        session.highlights[highlight.id] = highlight
        session.index = session.index.register(highlight)
        return {"highlight": highlight.to_dict()}

    def _on_card_delete(self, session: Session, event: Event) -> dict[str, Any]:
        card = session.get_card(str(event.payload["card_id"]))
        orphaned = [
            child
            for child in session.graph.children(card.id)
            if len(session.graph.parents(child)) == 1
        ]
        session.graph = session.graph.remove_node(card.id)
        del session.cards[card.id]
        session.canvas.pop(card.id, None)
        doomed = [
            hid
            for hid, highlight in session.highlights.items()
            if highlight.anchor.card_id == card.id
        ]
        for hid in doomed:
            del session.highlights[hid]
        session.index = session.index.remove_card(card.id)
        return {"deleted": card.id, "orphaned": sorted(orphaned)}

    def _on_layout(self, session: Session, event: Event) -> dict[str, Any]:
        card = session.get_card(str(event.payload["card_id"]))
        layout = Layout.from_dict(event.payload)
        session.canvas[card.id] = layout
        return {"card_id": card.id, "layout": layout.to_dict()}

    def _on_context(self, session: Session, event: Event) -> dict[str, Any]:
        current = session.global_context
        session.global_context = GlobalContext(
            theme=str(event.payload.get("theme", current.theme)),
            outline=str(event.payload.get("outline", current.outline)),
            draft_text=str(event.payload.get("draft_text", current.draft_text)),
        )
        return {"global_context": session.global_context.to_dict()}


# --- export / import / replay ---


def export_session(session: Session, assets) -> dict[str, Any]:
    """Versioned document: full state plus a content-addressed blob sidecar."""
    asset_blobs: dict[str, str] = {}
    for card in session.cards.values():
        asset_id = card.image.asset_id
        if asset_id not in asset_blobs and assets.has(asset_id):
            asset_blobs[asset_id] = base64.b64encode(assets.get(asset_id)).decode("ascii")
    return {
        "v": EXPORT_SCHEMA_VERSION,
        "session": {
            "id": session.id,
            "global_context": session.global_context.to_dict(),
            "cards": {cid: card.to_dict() for cid, card in session.cards.items()},
            "graph": session.graph.to_dict(),
            "canvas": {cid: layout.to_dict() for cid, layout in session.canvas.items()},
            "highlights": [h.to_dict() for h in session.highlights.values()],
            "card_seq": session.card_seq,
            "highlight_seq": session.highlight_seq,
            "event_log": [event.to_dict() for event in session.event_log],
        },
        "assets": asset_blobs,
    }


def import_session(document: Mapping[str, Any], assets) -> Session:
    """Inverse of export_session; verifies the schema version and blob hashes."""
    if not isinstance(document, Mapping) or "v" not in document or "session" not in document:
        raise SchemaVersionMismatch("not a session export document")
    if document["v"] != EXPORT_SCHEMA_VERSION:
        raise SchemaVersionMismatch(
            f"unsupported export version: {document['v']!r}"
        )
    for asset_id, b64 in (document.get("assets") or {}).items():
        try:
            blob = base64.b64decode(b64, validate=True)
        except (binascii.Error, ValueError) as exc:
            raise CorruptAsset(f"asset {asset_id} is not valid base64") from exc
        if content_id(blob) != asset_id:
            raise CorruptAsset(f"asset {asset_id} content hash mismatch")
        try:
            assets.put(blob)
        except Exception as exc:
            raise CorruptAsset(f"asset {asset_id} is not a decodable image") from exc

    data = document["session"]
    try:
        session = Session(str(data["id"]))
        session.global_context = GlobalContext.from_dict(data.get("global_context", {}))
        session.cards = {
            str(cid): Card.from_dict(card) for cid, card in (data.get("cards") or {}).items()
        }
        session.graph = ProvenanceGraph.from_dict(data.get("graph") or {})
        session.canvas = {
            str(cid): Layout.from_dict(layout)
            for cid, layout in (data.get("canvas") or {}).items()
        }
        highlights = [Highlight.from_dict(h) for h in data.get("highlights") or ()]
        session.highlights = {h.id: h for h in highlights}
        index = ClusterIndex()
        for highlight in highlights:
            index = index.register(highlight)
        session.index = index
        session.card_seq = int(data.get("card_seq", 0))
        session.highlight_seq = int(data.get("highlight_seq", 0))
        session.event_log = [Event.from_dict(e) for e in data.get("event_log") or ()]
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaVersionMismatch(f"malformed session document: {exc}") from exc
    return session


def replay_session(document: Mapping[str, Any], engine: SessionEngine) -> Session:
    """Rebuild a session by re-running its event log through the apply engine."""
    if not isinstance(document, Mapping) or document.get("v") != EXPORT_SCHEMA_VERSION:
        raise SchemaVersionMismatch("not a session export document")
    data = document["session"]
    events = [Event.from_dict(e) for e in data.get("event_log") or ()]
    if not events or events[0].type != EV_SESSION_CREATED:
        raise ValidationFailure("event log must start with session_created")
    session = Session(str(data["id"]))
    for event in events:
        engine.apply(session, event)
    return session


def sessions_equal(a: Session, b: Session, assets) -> bool:
    return canonical_json(export_session(a, assets)) == canonical_json(
        export_session(b, assets)
    )


class SessionStore:
    """Concurrent session registry with single-writer locks and idle TTL."""

    def __init__(self, ttl_seconds: float = 0.0):
        self.ttl_seconds = ttl_seconds
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.RLock] = {}
        self._registry_lock = threading.Lock()

    def _purge_expired(self) -> None:
        if self.ttl_seconds <= 0:
            return
        cutoff = time.time() - self.ttl_seconds
        for sid in [s for s, sess in self._sessions.items() if sess.last_touched < cutoff]:
            self._sessions.pop(sid, None)
            self._locks.pop(sid, None)

    def create(self) -> Session:
        with self._registry_lock:
            self._purge_expired()
            session = Session(uuid.uuid4().hex[:12])
            self._sessions[session.id] = session
            self._locks[session.id] = threading.RLock()
            return session

    def adopt(self, session: Session) -> Session:
        """Register an imported session, replacing any same-id predecessor."""
        with self._registry_lock:
            self._purge_expired()
            self._sessions[session.id] = session
            self._locks[session.id] = threading.RLock()
            return session

    def get(self, session_id: str) -> Session:
        with self._registry_lock:
            self._purge_expired()
            if session_id not in self._sessions:
                raise UnknownSession(f"unknown session: {session_id}")
            session = self._sessions[session_id]
            session.touch()
            return session

    def lock(self, session_id: str) -> threading.RLock:
        with self._registry_lock:
            if session_id not in self._locks:
                raise UnknownSession(f"unknown session: {session_id}")
            return self._locks[session_id]

    def delete(self, session_id: str) -> None:
        with self._registry_lock:
            if session_id not in self._sessions:
                raise UnknownSession(f"unknown session: {session_id}")
            del self._sessions[session_id]
            del self._locks[session_id]

    def find_card_session(self, card_id: str) -> Session:
        """Resolve /cards/{cid} routes; card ids embed their session id."""
        with self._registry_lock:
            self._purge_expired()
            sid = card_id.split(".", 1)[0]
            if sid in self._sessions:
                self._sessions[sid].touch()
                return self._sessions[sid]
            for session in self._sessions.values():
                if card_id in session.cards:
                    session.touch()
                    return session
        raise UnknownCard(f"unknown card: {card_id}")
