import csv
import json

import pytest
from click.testing import CliRunner

from storycanvas.cli import main
from storycanvas.demo import build_demo_session
from storycanvas.errors import SchemaVersionMismatch
from storycanvas.model.provenance import ProvenanceGraph
from storycanvas.report import load_document, write_report
from storycanvas.service.metrics import compute_metrics


@pytest.fixture(scope="module")
def demo_document():
    return build_demo_session()


def test_write_report_produces_all_artifacts(tmp_path, demo_document):
    written = write_report(demo_document, tmp_path / "out")
    names = {p.name for p in written}
    assert names == {"metrics.csv", "directions.csv", "cards.csv", "provenance.png", "metrics.png"}
    for path in written:
        assert path.exists() and path.stat().st_size > 0
    # figures really are PNGs
    for name in ("provenance.png", "metrics.png"):
        assert (tmp_path / "out" / name).read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_metrics_csv_matches_computed_metrics(tmp_path, demo_document):
    write_report(demo_document, tmp_path)
    with (tmp_path / "metrics.csv").open() as fh:
        rows = {row["metric"]: row["value"] for row in csv.DictReader(fh)}
    graph = ProvenanceGraph.from_dict(demo_document["session"]["graph"])
    metrics = compute_metrics(graph)
    assert int(rows["directions"]) == metrics.directions
    assert float(rows["mean_branches"]) == pytest.approx(metrics.mean_branches, abs=1e-6)
    assert float(rows["mean_depth"]) == pytest.approx(metrics.mean_depth, abs=1e-6)


def test_cards_csv_lists_every_card(tmp_path, demo_document):
    write_report(demo_document, tmp_path)
    with (tmp_path / "cards.csv").open() as fh:
        rows = list(csv.DictReader(fh))
    assert {r["id"] for r in rows} == set(demo_document["session"]["cards"])
    origins = {r["origin"] for r in rows}
    assert "creative_spark" in origins and "collage" in origins


def test_report_on_empty_session(tmp_path, client=None):
    document = {
        "v": 1,
        "session": {"id": "empty", "cards": {}, "graph": {}, "event_log": []},
        "assets": {},
    }
    written = write_report(document, tmp_path)
    assert all(p.exists() for p in written)


def test_load_document_rejects_bad_files(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(SchemaVersionMismatch):
        load_document(bad)
    wrong_version = tmp_path / "wrong.json"
    wrong_version.write_text(json.dumps({"v": 2, "session": {}}), encoding="utf-8")
    with pytest.raises(SchemaVersionMismatch):
        load_document(wrong_version)


def test_cli_demo_then_report(tmp_path):
    runner = CliRunner()
    export_path = tmp_path / "demo.json"
    result = runner.invoke(main, ["demo", "--out", str(export_path)])
    assert result.exit_code == 0, result.output
    assert export_path.exists()

    out_dir = tmp_path / "reports"
    result = runner.invoke(main, ["report", str(export_path), "--out-dir", str(out_dir)])
    assert result.exit_code == 0, result.output
    assert (out_dir / "provenance.png").exists()
    assert (out_dir / "metrics.csv").exists()
    assert len(result.output.strip().splitlines()) == 5


def test_cli_help_lists_subcommands():
    runner = CliRunner()
    result = runner.invoke(main, ["--help"])
    assert result.exit_code == 0
    for command in ("serve", "report", "demo"):
        assert command in result.output
