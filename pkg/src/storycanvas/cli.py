"""Command line entry points: serve the API, report on exports, build a demo."""

from __future__ import annotations

import json
import os
from pathlib import Path

import click

from .orchestrator.providers import ENV_MOCK, ProviderConfig


@click.group()
def main() -> None:
    """Story co-editing engine: canvas service, session reports, demo data."""


def _resolve_mock(mock: bool | None) -> bool:
    if mock is not None:
        return mock
    if os.environ.get(ENV_MOCK) == "1":
        return True
    config = ProviderConfig.from_env()
    return config.mock


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
@click.option(
    "--mock/--no-mock",
    default=None,
    help="Use deterministic mock providers (default: MOCK_MODE env, else "
    "mock unless provider URLs are configured).",
)
@click.option("--template-dir", default=None, type=click.Path(exists=True, file_okay=False))
@click.option("--session-ttl", default=3600.0, show_default=True, type=float,
              help="Idle seconds before a session is dropped; 0 disables expiry.")
def serve(host: str, port: int, mock: bool | None, template_dir: str | None,
          session_ttl: float) -> None:
    """Run the HTTP session service."""
    import uvicorn

    from .service.api import ServiceConfig, create_app

    env_config = ProviderConfig.from_env()
    provider = ProviderConfig(
        text_endpoint=env_config.text_endpoint,
        image_endpoint=env_config.image_endpoint,
        mock=_resolve_mock(mock),
    )
    app = create_app(
        ServiceConfig(provider=provider, template_dir=template_dir, session_ttl=session_ttl)
    )
    uvicorn.run(app, host=host, port=port)


@main.command()
@click.argument("export_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--out-dir", default="reports", show_default=True, type=click.Path(file_okay=False))
def report(export_path: str, out_dir: str) -> None:
    """Render CSV tables and figures from a session export document."""
    from .report import load_document, write_report

    written = write_report(load_document(export_path), out_dir)
    for path in written:
        click.echo(str(path))


@main.command()
@click.option("--out", default="demo_session.json", show_default=True,
              type=click.Path(dir_okay=False))
def demo(out: str) -> None:
    """Run a scripted mock session and write its export document."""
    from .demo import build_demo_session

    document = build_demo_session()
    Path(out).write_text(json.dumps(document, indent=2), encoding="utf-8")
    session = document["session"]
    click.echo(
        f"wrote {out}: {len(session['cards'])} cards, "
        f"{len(session['event_log'])} events"
    )


if __name__ == "__main__":
    main()
