import pytest
from fastapi.testclient import TestClient

from storycanvas.instruments.imaging import solid_png
from storycanvas.model.cards import (
    Card,
    ImageAssetRef,
    InstrumentKind,
    NarrativeObject,
    ObjectKind,
    Voice,
)
from storycanvas.orchestrator.agent import Orchestrator
from storycanvas.orchestrator.assets import AssetStore
from storycanvas.orchestrator.providers import ProviderConfig
from storycanvas.service.api import ServiceConfig, create_app
from storycanvas.service.sessions import EV_SESSION_CREATED, Session, SessionEngine


@pytest.fixture
def assets():
    return AssetStore()


@pytest.fixture
def orchestrator(assets):
    return Orchestrator(ProviderConfig(mock=True), assets)


@pytest.fixture
def engine(orchestrator):
    return SessionEngine(orchestrator)


@pytest.fixture
def session(engine):
    sess = Session("s1")
    engine.apply(
        sess,
        sess.next_event(
            EV_SESSION_CREATED,
            {"theme": "a box on a doorstep", "outline": "Claire finds a box.", "draft_text": ""},
        ),
    )
    return sess


@pytest.fixture
def client():
    app = create_app(ServiceConfig(provider=ProviderConfig(mock=True), session_ttl=0))
    with TestClient(app) as test_client:
        yield test_client


def make_card(
    assets,
    card_id="card-1",
    story="Claire steadies the box on her lap.",
    objects=(("Claire", "character"),),
    voice="third",
    size=(64, 64),
    color=(120, 10, 200),
):
    """Card backed by a real stored PNG so image instruments work on it."""
    ref = assets.put(solid_png(color, *size))
    return Card(
        id=card_id,
        story=story,
        image=ImageAssetRef(asset_id=ref.asset_id, width=size[0], height=size[1]),
        objects=tuple(NarrativeObject(name, ObjectKind(kind)) for name, kind in objects),
        voice=Voice(voice),
        origin=InstrumentKind.EXACT_CRAFT,
        created_at=1.0,
    )


@pytest.fixture
def card_factory(assets):
    def factory(**kwargs):
        return make_card(assets, **kwargs)

    return factory
