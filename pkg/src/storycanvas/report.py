"""Session report rendering: CSV tables plus matplotlib figures.

Consumes a session export document and writes, into an output directory:
``metrics.csv`` / ``directions.csv`` / ``cards.csv`` (delimited data) and
``provenance.png`` / ``metrics.png`` (figures). The provenance figure lays
cards out in depth layers with one color per producing instrument.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Any, Mapping

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import networkx as nx

from .errors import SchemaVersionMismatch
from .model.cards import InstrumentKind
from .model.provenance import ProvenanceGraph
from .service.metrics import compute_metrics, direction_stats
from .service.sessions import EXPORT_SCHEMA_VERSION

INSTRUMENT_COLORS = {
    InstrumentKind.EXACT_CRAFT.value: "#4878cf",
    InstrumentKind.CREATIVE_SPARK.value: "#e6a23c",
    InstrumentKind.LASSO.value: "#6bb36b",
    InstrumentKind.COLLAGE.value: "#b07cc6",
    InstrumentKind.FILTER.value: "#d66a6a",
    InstrumentKind.PERSPECTIVE_SHIFT.value: "#5bb8b0",
}


def load_document(path: str | Path) -> dict[str, Any]:
    try:
        document = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaVersionMismatch(f"cannot read export document: {exc}") from exc
    if not isinstance(document, dict) or document.get("v") != EXPORT_SCHEMA_VERSION:
        raise SchemaVersionMismatch("not a v1 session export document")
    return document


def _graph_from_document(document: Mapping[str, Any]) -> ProvenanceGraph:
    return ProvenanceGraph.from_dict(document["session"].get("graph") or {})


def _write_metrics_csv(path: Path, document: Mapping[str, Any]) -> None:
    metrics = compute_metrics(_graph_from_document(document))
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["metric", "value"])
        writer.writerow(["directions", metrics.directions])
        writer.writerow(["mean_branches", f"{metrics.mean_branches:.6f}"])
        writer.writerow(["mean_depth", f"{metrics.mean_depth:.6f}"])


def _write_directions_csv(path: Path, document: Mapping[str, Any]) -> None:
    stats = direction_stats(_graph_from_document(document))
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["root", "branches", "mean_depth", "reachable_cards"])
        for row in stats:
            writer.writerow(
                [row.root, row.branches, f"{row.mean_depth:.6f}", row.reachable]
            )


def _write_cards_csv(path: Path, document: Mapping[str, Any]) -> None:
    session = document["session"]
    graph = _graph_from_document(document)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(
            ["id", "origin", "voice", "filter", "words", "parents", "created_at"]
        )
        for cid in sorted(session.get("cards") or {}):
            card = session["cards"][cid]
            writer.writerow(
                [
                    cid,
                    card["origin"],
                    card["voice"],
                    card["filter"] or "",
                    len(str(card["story"]).split()),
                    "|".join(sorted(graph.parents(cid))) if graph.has_node(cid) else "",
                    card["created_at"],
                ]
            )


def _node_layers(graph: ProvenanceGraph) -> dict[str, int]:
    # Layer = longest edge distance from any root; gives a layered DAG layout.
    adjacency = graph.adjacency()
    layers = {node: 0 for node in graph.roots()}
    order = list(nx.topological_sort(nx.DiGraph(adjacency)))
    for node in order:
        for child in adjacency.get(node, ()):
            layers[child] = max(layers.get(child, 0), layers.get(node, 0) + 1)
    return layers


def _draw_provenance(path: Path, document: Mapping[str, Any]) -> None:
    graph = _graph_from_document(document)
    session = document["session"]
    figure, axis = plt.subplots(figsize=(10, 7))
    if graph.nodes:
        digraph = nx.DiGraph()
        digraph.add_nodes_from(graph.nodes)
        digraph.add_edges_from((e.parent, e.child) for e in graph.edges)
        layers = _node_layers(graph)
        nx.set_node_attributes(digraph, layers, "layer")
        positions = nx.multipartite_layout(digraph, subset_key="layer")
        colors = [
            INSTRUMENT_COLORS.get(
                (session["cards"].get(node) or {}).get("origin", ""), "#999999"
            )
            for node in digraph.nodes
        ]
        nx.draw_networkx_edges(digraph, positions, ax=axis, edge_color="#777777", arrows=True)
        nx.draw_networkx_nodes(digraph, positions, ax=axis, node_color=colors, node_size=600)
        labels = {node: node.rsplit(".", 1)[-1] for node in digraph.nodes}
        nx.draw_networkx_labels(digraph, positions, labels=labels, ax=axis, font_size=8)
        handles = [
            plt.Line2D([0], [0], marker="o", color="w", markerfacecolor=color,
                       markersize=9, label=kind)
            for kind, color in INSTRUMENT_COLORS.items()
        ]
        axis.legend(handles=handles, loc="upper left", fontsize=7, frameon=False)
    else:
        axis.text(0.5, 0.5, "empty session", ha="center", va="center")
    axis.set_title(f"provenance — session {session.get('id', '')}")
    axis.set_axis_off()
    figure.tight_layout()
    figure.savefig(path, dpi=120)
    plt.close(figure)


def _draw_metrics(path: Path, document: Mapping[str, Any]) -> None:
    metrics = compute_metrics(_graph_from_document(document))
    figure, axis = plt.subplots(figsize=(5, 4))
    names = ["directions", "mean branches", "mean depth"]
    values = [metrics.directions, metrics.mean_branches, metrics.mean_depth]
    bars = axis.bar(names, values, color=["#4878cf", "#e6a23c", "#6bb36b"])
    for bar, value in zip(bars, values):
        axis.text(
            bar.get_x() + bar.get_width() / 2,
            bar.get_height(),
            f"{value:.2f}",
            ha="center",
            va="bottom",
            fontsize=9,
        )
    axis.set_title("exploration metrics")
    figure.tight_layout()
    figure.savefig(path, dpi=120)
    plt.close(figure)


def write_report(document: Mapping[str, Any], out_dir: str | Path) -> list[Path]:
    """Render all report artifacts; returns the written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    outputs = {
        out / "metrics.csv": _write_metrics_csv,
        out / "directions.csv": _write_directions_csv,
        out / "cards.csv": _write_cards_csv,
        out / "provenance.png": _draw_provenance,
        out / "metrics.png": _draw_metrics,
    }
    for path, renderer in outputs.items():
        renderer(path, document)
    return list(outputs)
