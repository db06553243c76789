"""Independent oracles and randomized generators used across the suite.

Everything here is deliberately implemented with different machinery than the
code under test: anchor rebasing via character-identity simulation, metrics
via explicit path enumeration, the cluster index via a plain-dict fold.
"""

from __future__ import annotations

import random

from storycanvas.model.cards import InstrumentKind
from storycanvas.model.provenance import ProvenanceEdge, ProvenanceGraph

# --- anchor rebasing oracle -------------------------------------------------


def oracle_rebase(text_len, start, end, position, deleted, inserted):
    """Track each original character through the splice.

    The anchor survives iff all its characters survive, in order, contiguous,
    with nothing inserted between them; the new range is then their span.
    Returns (start, end) or None.
    """
    tags = list(range(text_len))
    new_tags = tags[:position] + [None] * inserted + tags[position + deleted:]
    wanted = list(range(start, end))
    positions = [i for i, tag in enumerate(new_tags) if tag is not None and start <= tag < end]
    if len(positions) != len(wanted):
        return None
    first = positions[0]
    if positions != list(range(first, first + len(wanted))):
        return None
    surviving = [new_tags[i] for i in positions]
    if surviving != wanted:
        return None
    return (first, first + len(wanted))


# --- exploration metrics oracle ----------------------------------------------


def oracle_metrics(graph: ProvenanceGraph):
    """Brute-force DFS enumeration of every root-to-leaf path."""
    if not graph.nodes:
        return (0, 0.0, 0.0)
    adjacency = graph.adjacency()
    roots = graph.roots()
    per_root_counts = []
    all_depths = []

    def walk(node, depth, sink):
        children = adjacency[node]
        if not children:
            sink.append(depth)
            return
        for child in children:
            walk(child, depth + 1, sink)

    for root in roots:
        depths = []
        walk(root, 0, depths)
        per_root_counts.append(len(depths))
        all_depths.extend(depths)

    mean_branches = sum(per_root_counts) / len(roots)
    mean_depth = sum(all_depths) / len(all_depths) if all_depths else 0.0
    return (len(roots), mean_branches, mean_depth)


NON_COLLAGE_KINDS = [
    InstrumentKind.EXACT_CRAFT,
    InstrumentKind.CREATIVE_SPARK,
    InstrumentKind.LASSO,
    InstrumentKind.FILTER,
    InstrumentKind.PERSPECTIVE_SHIFT,
]


def random_dag(rng: random.Random, max_nodes=50, max_merges=5) -> ProvenanceGraph:
    """Random accepted DAG: tree-ish with a bounded number of collage merges."""
    count = rng.randint(1, max_nodes)
    names = [f"n{i}" for i in range(count)]
    graph = ProvenanceGraph()
    for name in names:
        graph = graph.add_node(name)
    merges = 0
    for i in range(1, count):
        roll = rng.random()
        if roll < 0.15:
            continue  # another root
        if roll < 0.30 and i >= 2 and merges < max_merges:
            parent_count = rng.randint(2, min(3, i))
            for parent in rng.sample(names[:i], parent_count):
                graph = graph.add_edge(
                    ProvenanceEdge(parent, names[i], InstrumentKind.COLLAGE)
                )
            merges += 1
        else:
            parent = names[rng.randrange(i)]
            kind = rng.choice(NON_COLLAGE_KINDS)
            graph = graph.add_edge(ProvenanceEdge(parent, names[i], kind))
    return graph


# --- cluster index oracle -----------------------------------------------------


def oracle_cluster_entries(log):
    """Fold a highlight log with plain dicts.

    ``log`` is a list of ("add", highlight) / ("delete_card", card_id) items,
    where a highlight is the dict {id, card_id, snapshot, object?, comment?}.
    Returns {(norm_name, kind): {"display_name", "segments", "comments"}} with
    segments as (card_id, snapshot, highlight_id) tuples in registration order.
    """
    seen = set()
    entries = {}
    for action, value in log:
        if action == "add":
            h = value
            if h["id"] in seen:
                continue
            seen.add(h["id"])
            obj = h.get("object")
            if not obj:
                continue
            key = (obj["name"].strip().casefold(), obj["kind"])
            entry = entries.setdefault(
                key,
                {"display_name": obj["name"].strip(), "segments": [], "comments": []},
            )
            entry["segments"].append((h["card_id"], h["snapshot"], h["id"]))
            if (h.get("comment") or "").strip():
                entry["comments"].append((h["card_id"], h["comment"], h["id"]))
        elif action == "delete_card":
            dead = value
            for key in list(entries):
                entry = entries[key]
                entry["segments"] = [s for s in entry["segments"] if s[0] != dead]
                entry["comments"] = [c for c in entry["comments"] if c[0] != dead]
                if not entry["segments"] and not entry["comments"]:
                    del entries[key]
        else:
            raise AssertionError(f"unknown log action {action}")
    return entries


def index_as_plain(index):
    """Project a ClusterIndex into the oracle's plain-dict shape."""
    plain = {}
    for (norm, kind), entry in index.entries.items():
        plain[(norm, kind.value)] = {
            "display_name": entry.display_name,
            "segments": [(s.card_id, s.snapshot, s.highlight_id) for s in entry.segments],
            "comments": [(c.card_id, c.text, c.highlight_id) for c in entry.comments],
        }
    return plain
