"""HTTP facade over the session engine.

Every endpoint is a thin, validated wrapper: bodies are checked by the
schemas module, domain rules by the engine, and every successful mutation
appends exactly one event (failures append nothing). Errors use a uniform
``{code, message, detail}`` body whose status class separates validation
(422), not-found (404), and provider trouble (429/502/504).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from fastapi import FastAPI, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from ..clusters import summarize_entry
from ..errors import StoryCanvasError, ValidationFailure
from ..model.cards import ObjectKind
from ..orchestrator.agent import Orchestrator
from ..orchestrator.assets import AssetStore
from ..orchestrator.providers import ProviderConfig
from ..orchestrator.templates import TemplateLibrary
from .metrics import compute_metrics
from .schemas import (
    CollageBody,
    ContextBody,
    GenerateBody,
    HighlightBody,
    LassoBody,
    LayoutBody,
    PerspectiveBody,
    FilterBody,
    SessionCreateBody,
    StoryEditBody,
)
from .sessions import (
    EV_CARD_DELETE,
    EV_COLLAGE,
    EV_CONTEXT,
    EV_FILTER,
    EV_GENERATE,
    EV_HIGHLIGHT,
    EV_LASSO,
    EV_LAYOUT,
    EV_PERSPECTIVE,
    EV_SESSION_CREATED,
    EV_STORY_EDIT,
    Session,
    SessionEngine,
    SessionStore,
    export_session,
    import_session,
)


@dataclass
class ServiceConfig:
    provider: ProviderConfig = field(default_factory=ProviderConfig)
    template_dir: str | None = None
    session_ttl: float = 3600.0


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    assets = AssetStore()
    library = (
        TemplateLibrary.load_dir(config.template_dir)
        if config.template_dir
        else TemplateLibrary.builtin()
    )
    orchestrator = Orchestrator(config.provider, assets, library=library)
    engine = SessionEngine(orchestrator)
    store = SessionStore(ttl_seconds=config.session_ttl)

    app = FastAPI(title="storycanvas", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.store = store
    app.state.engine = engine
    app.state.orchestrator = orchestrator
    app.state.assets = assets

    @app.exception_handler(StoryCanvasError)
    def on_domain_error(request: Request, exc: StoryCanvasError) -> JSONResponse:
        return JSONResponse(
            status_code=exc.http_status,
            content={"code": exc.code, "message": str(exc), "detail": exc.detail},
        )

    @app.exception_handler(RequestValidationError)
    def on_body_error(request: Request, exc: RequestValidationError) -> JSONResponse:
        detail = [
            {"loc": [str(part) for part in err.get("loc", ())], "msg": str(err.get("msg", ""))}
            for err in exc.errors()
        ]
        return JSONResponse(
            status_code=422,
            content={
                "code": "validation_error",
                "message": "request body failed validation",
                "detail": detail,
            },
        )

    def mutate(session: Session, event_type: str, payload: dict[str, Any]) -> dict[str, Any]:
        with store.lock(session.id):
            event = session.next_event(event_type, payload)
            return engine.apply(session, event)

    # --- session lifecycle ---

    @app.post("/sessions", status_code=201)
    def create_session(body: SessionCreateBody | None = None) -> dict[str, Any]:
        session = store.create()
        payload = (body or SessionCreateBody()).model_dump()
        mutate(session, EV_SESSION_CREATED, payload)
        return session.view()

    @app.get("/sessions/{sid}")
    def get_session(sid: str) -> dict[str, Any]:
        session = store.get(sid)
        with store.lock(sid):
            return session.view()

    @app.delete("/sessions/{sid}", status_code=204)
    def delete_session(sid: str) -> None:
        store.delete(sid)

    # --- generation and instruments ---

    @app.post("/sessions/{sid}/generate", status_code=201)
    def generate(sid: str, body: GenerateBody) -> dict[str, Any]:
        session = store.get(sid)
        payload = {"mode": body.mode, "intent": body.intent.to_payload()}
        return mutate(session, EV_GENERATE, payload)

    @app.post("/sessions/{sid}/cards/{cid}/lasso", status_code=201)
    def lasso(sid: str, cid: str, body: LassoBody) -> dict[str, Any]:
        session = store.get(sid)
        payload: dict[str, Any] = {"card_id": cid}
        if body.text_range is not None:
            payload["text_range"] = body.text_range.model_dump()
        if body.polygon is not None:
            payload["polygon"] = [list(point) for point in body.polygon]
        return mutate(session, EV_LASSO, payload)

    @app.post("/sessions/{sid}/cards/{cid}/collage", status_code=201)
    def collage_from_card(sid: str, cid: str, body: CollageBody) -> dict[str, Any]:
        session = store.get(sid)
        payload = {
            "initiator_card_id": cid,
            "frame": body.frame.model_dump(),
            "intent_text": body.intent_text,
        }
        return mutate(session, EV_COLLAGE, payload)

    @app.post("/sessions/{sid}/collage", status_code=201)
    def collage(sid: str, body: CollageBody) -> dict[str, Any]:
        session = store.get(sid)
        payload = {"frame": body.frame.model_dump(), "intent_text": body.intent_text}
        return mutate(session, EV_COLLAGE, payload)

    @app.post("/sessions/{sid}/cards/{cid}/filter", status_code=201)
    def apply_filter(sid: str, cid: str, body: FilterBody) -> dict[str, Any]:
        session = store.get(sid)
        return mutate(session, EV_FILTER, {"card_id": cid, "kind": body.kind})

    @app.post("/sessions/{sid}/cards/{cid}/perspective", status_code=201)
    def shift_perspective(sid: str, cid: str, body: PerspectiveBody) -> dict[str, Any]:
        session = store.get(sid)
        return mutate(session, EV_PERSPECTIVE, {"card_id": cid, "target": body.target})

    # --- story editing and highlights ---

    @app.patch("/cards/{cid}/story")
    def edit_story(cid: str, body: StoryEditBody) -> dict[str, Any]:
        session = store.find_card_session(cid)
        payload = {
            "card_id": cid,
            "position": body.position,
            "delete": body.delete,
            "insert": body.insert,
        }
        return mutate(session, EV_STORY_EDIT, payload)

    @app.post("/highlights", status_code=201)
    def add_highlight(body: HighlightBody) -> dict[str, Any]:
        session = store.find_card_session(body.card_id)
        return mutate(session, EV_HIGHLIGHT, body.model_dump(exclude_none=True))

    @app.delete("/sessions/{sid}/cards/{cid}")
    def delete_card(sid: str, cid: str) -> dict[str, Any]:
        session = store.get(sid)
        return mutate(session, EV_CARD_DELETE, {"card_id": cid})

    @app.patch("/sessions/{sid}/cards/{cid}/layout")
    def set_layout(sid: str, cid: str, body: LayoutBody) -> dict[str, Any]:
        session = store.get(sid)
        return mutate(session, EV_LAYOUT, {"card_id": cid, **body.model_dump()})

    @app.patch("/sessions/{sid}/context")
    def set_context(sid: str, body: ContextBody) -> dict[str, Any]:
        session = store.get(sid)
        return mutate(session, EV_CONTEXT, body.model_dump(exclude_none=True))

    # --- clusters ---

    @app.get("/sessions/{sid}/clusters")
    def clusters(sid: str) -> dict[str, Any]:
        session = store.get(sid)
        with store.lock(sid):
            return session.index.export()

    def _parse_object_key(obj: str) -> tuple[str, ObjectKind]:
        kind_text, sep, name = obj.partition(":")
        if not sep or not name:
            raise ValidationFailure("object key must look like kind:name")
        try:
            kind = ObjectKind(kind_text)
        except ValueError as exc:
            raise ValidationFailure(f"unknown object kind: {kind_text!r}") from exc
        return name, kind

    def _summarize(session: Session, obj: str) -> dict[str, Any]:
        name, kind = _parse_object_key(obj)
        summary = summarize_entry(
            session.index,
            name,
            kind,
            orchestrator,
            global_theme=session.global_context.theme,
        )
        return summary.to_dict()

    @app.post("/clusters/{obj}/summarize")
    def summarize(obj: str, session_id: str = Query(...)) -> dict[str, Any]:
        return _summarize(store.get(session_id), obj)

    @app.post("/sessions/{sid}/clusters/{obj}/summarize")
    def summarize_scoped(sid: str, obj: str) -> dict[str, Any]:
        return _summarize(store.get(sid), obj)

    # --- assets ---

    @app.get("/assets/{asset_id}")
    def get_asset(asset_id: str) -> Response:
        return Response(content=assets.get(asset_id), media_type="image/png")

    # --- metrics, export, import ---

    @app.get("/sessions/{sid}/metrics")
    def metrics(sid: str) -> dict[str, Any]:
        session = store.get(sid)
        with store.lock(sid):
            graph = session.graph
        return compute_metrics(graph).to_dict()

    @app.get("/sessions/{sid}/export")
    def export(sid: str) -> dict[str, Any]:
        session = store.get(sid)
        with store.lock(sid):
            return export_session(session, assets)

    @app.post("/import", status_code=201)
    async def import_(request: Request) -> dict[str, Any]:
        try:
            document = await request.json()
        except Exception as exc:
            raise ValidationFailure(f"import body is not JSON: {exc}") from exc
        session = import_session(document, assets)
        store.adopt(session)
        return session.view()

    return app
