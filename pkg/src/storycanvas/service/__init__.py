from .api import ServiceConfig, create_app
from .metrics import ExplorationMetrics, compute_metrics
from .sessions import (
    Event,
    GlobalContext,
    Layout,
    Session,
    SessionEngine,
    SessionStore,
    export_session,
    import_session,
    replay_session,
    sessions_equal,
)

__all__ = [
    "Event",
    "ExplorationMetrics",
    "GlobalContext",
    "Layout",
    "ServiceConfig",
    "Session",
    "SessionEngine",
    "SessionStore",
    "compute_metrics",
    "create_app",
    "export_session",
    "import_session",
    "replay_session",
    "sessions_equal",
]
