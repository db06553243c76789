"""Provenance DAG over cards.

Edges record which instrument derived which card. The graph is an immutable
value: ``add_node`` / ``add_edge`` / ``remove_node`` return new graphs and
never mutate. Structural rules enforced on every accepted edge:

* the edge set stays acyclic,
* a child has at most one non-collage parent (collage is the only
  multi-source instrument, so only collage edges may fan in).

Per-node metadata carries the intent hash of the generation that produced a
card and, for variation triples, the variation axis — enough to group
sibling cards born from one intent.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Mapping

from ..errors import CycleError, MultiParentError, UnknownCard
from .cards import InstrumentKind


@dataclass(frozen=True)
class ProvenanceEdge:
    parent: str
    child: str
    kind: InstrumentKind

    def to_dict(self) -> dict[str, str]:
        return {"parent": self.parent, "child": self.child, "kind": self.kind.value}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ProvenanceEdge":
        return cls(
            parent=str(data["parent"]),
            child=str(data["child"]),
            kind=InstrumentKind(data["kind"]),
        )


class ProvenanceGraph:
    """Immutable DAG of card ids with typed, validated edges."""

    __slots__ = ("_nodes", "_edges", "_meta")

    def __init__(
        self,
        nodes: Iterable[str] = (),
        edges: Iterable[ProvenanceEdge] = (),
        meta: Mapping[str, Mapping[str, str]] | None = None,
    ):
        self._nodes: frozenset[str] = frozenset(nodes)
        self._edges: tuple[ProvenanceEdge, ...] = tuple(edges)
        self._meta: dict[str, dict[str, str]] = {
            k: dict(v) for k, v in (meta or {}).items()
        }

    # --- value semantics ---

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProvenanceGraph):
            return NotImplemented
        return (
            self._nodes == other._nodes
            and set(self._edges) == set(other._edges)
            and self._meta == other._meta
        )

    def __repr__(self) -> str:
        return f"ProvenanceGraph(nodes={len(self._nodes)}, edges={len(self._edges)})"

    # --- inspection ---

    @property
    def nodes(self) -> frozenset[str]:
        return self._nodes

    @property
    def edges(self) -> tuple[ProvenanceEdge, ...]:
        return self._edges

    def has_node(self, card_id: str) -> bool:
        return card_id in self._nodes

    def node_meta(self, card_id: str) -> dict[str, str]:
        return dict(self._meta.get(card_id, {}))

    def parents(self, card_id: str) -> tuple[str, ...]:
        return tuple(e.parent for e in self._edges if e.child == card_id)

    def children(self, card_id: str) -> tuple[str, ...]:
        return tuple(e.child for e in self._edges if e.parent == card_id)

    def in_edges(self, card_id: str) -> tuple[ProvenanceEdge, ...]:
        return tuple(e for e in self._edges if e.child == card_id)

    def roots(self) -> tuple[str, ...]:
        with_parents = {e.child for e in self._edges}
        return tuple(sorted(self._nodes - with_parents))

    def leaves(self) -> tuple[str, ...]:
        with_children = {e.parent for e in self._edges}
        return tuple(sorted(self._nodes - with_children))

    def adjacency(self) -> dict[str, list[str]]:
        adj: dict[str, list[str]] = {n: [] for n in self._nodes}
        for e in self._edges:
            adj[e.parent].append(e.child)
        for out in adj.values():
            out.sort()
        return adj

    def spark_siblings(self, card_id: str) -> tuple[str, ...]:
        """Cards generated by the same variation-triple intent, self included."""
        meta = self._meta.get(card_id, {})
        intent_hash = meta.get("intent_hash")
        if intent_hash is None or "variation_axis" not in meta:
            return ()
        return tuple(
            sorted(
                node
                for node, m in self._meta.items()
                if m.get("intent_hash") == intent_hash and "variation_axis" in m
            )
        )

    # --- construction ---

    def add_node(
        self, card_id: str, meta: Mapping[str, str] | None = None
    ) -> "ProvenanceGraph":
        new_meta = {k: dict(v) for k, v in self._meta.items()}
        if meta:
            new_meta[card_id] = dict(meta)
        return ProvenanceGraph(self._nodes | {card_id}, self._edges, new_meta)

    def add_edge(self, edge: ProvenanceEdge) -> "ProvenanceGraph":
        """Add one edge, or raise: UnknownCard, CycleError, MultiParentError."""
        if edge.parent not in self._nodes:
            raise UnknownCard(f"unknown parent card: {edge.parent}")
        if edge.child not in self._nodes:
            raise UnknownCard(f"unknown child card: {edge.child}")
        if edge.parent == edge.child:
            raise CycleError(f"self-edge on {edge.parent}")
        if edge in self._edges:
            return self
        if edge.kind is not InstrumentKind.COLLAGE:
            for existing in self._edges:
                if (
                    existing.child == edge.child
                    and existing.kind is not InstrumentKind.COLLAGE
                ):
                    raise MultiParentError(
                        f"{edge.child} already has a non-collage parent {existing.parent}"
                    )
        if self._reaches(edge.child, edge.parent):
            raise CycleError(f"edge {edge.parent}->{edge.child} would close a cycle")
        return ProvenanceGraph(self._nodes, self._edges + (edge,), self._meta)

    def remove_node(self, card_id: str) -> "ProvenanceGraph":
        """Drop a node and its incident edges: descendants become new roots."""
        if card_id not in self._nodes:
            raise UnknownCard(f"unknown card: {card_id}")
        edges = tuple(
            e for e in self._edges if e.parent != card_id and e.child != card_id
        )
        meta = {k: dict(v) for k, v in self._meta.items() if k != card_id}
        return ProvenanceGraph(self._nodes - {card_id}, edges, meta)

    def _reaches(self, start: str, target: str) -> bool:
        # DFS over child edges; used to reject cycle-closing edges.
        stack = [start]
        seen: set[str] = set()
        while stack:
            node = stack.pop()
            if node == target:
                return True
            if node in seen:
                continue
            seen.add(node)
            stack.extend(e.child for e in self._edges if e.parent == node)
        return False

    # --- serialization ---

    def to_dict(self) -> dict[str, Any]:
        return {
            "nodes": sorted(self._nodes),
            "edges": [
                e.to_dict()
                for e in sorted(self._edges, key=lambda e: (e.parent, e.child, e.kind.value))
            ],
            "meta": {k: dict(sorted(v.items())) for k, v in sorted(self._meta.items())},
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ProvenanceGraph":
        return cls(
            nodes=[str(n) for n in data.get("nodes", [])],
            edges=[ProvenanceEdge.from_dict(e) for e in data.get("edges", [])],
            meta={str(k): dict(v) for k, v in data.get("meta", {}).items()},
        )
