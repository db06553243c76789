"""Exploration metrics over the provenance DAG.

Directions are the provenance roots (in-degree zero). Within the subgraph
reachable from a root, every distinct root-to-leaf path is one branch, and a
branch's depth is its edge count — so a lone root contributes one branch of
depth zero, and a node merged into by collage counts once per path through
it. Mean branches averages per direction; mean depth averages over all
branches of all directions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from ..errors import CyclicGraph
from ..model.provenance import ProvenanceGraph


@dataclass(frozen=True)
class ExplorationMetrics:
    directions: int
    mean_branches: float
    mean_depth: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "directions": self.directions,
            "mean_branches": self.mean_branches,
            "mean_depth": self.mean_depth,
        }


@dataclass(frozen=True)
class DirectionStats:
    root: str
    branches: int
    depth_sum: int
    reachable: int

    @property
    def mean_depth(self) -> float:
        return self.depth_sum / self.branches if self.branches else 0.0


def _check_acyclic(adjacency: dict[str, list[str]]) -> None:
    # Kahn's algorithm; leftovers mean a cycle.
    in_degree = {node: 0 for node in adjacency}
    for children in adjacency.values():
        for child in children:
            in_degree[child] += 1
    queue = [n for n, d in in_degree.items() if d == 0]
    visited = 0
    while queue:
        node = queue.pop()
        visited += 1
        for child in adjacency[node]:
            in_degree[child] -= 1
            if in_degree[child] == 0:
                queue.append(child)
    if visited != len(adjacency):
        raise CyclicGraph("provenance graph contains a cycle")


def _path_tallies(adjacency: dict[str, list[str]], roots: tuple[str, ...]):
    # path_count[v]: distinct v-to-leaf paths; depth_sum[v]: total edge count
    # across those paths. Memoized over the shared DAG, iteratively so deep
    # chains cannot hit the recursion limit.
    path_count: dict[str, int] = {}
    depth_sum: dict[str, int] = {}
    for root in roots:
        stack: list[tuple[str, bool]] = [(root, False)]
        while stack:
            node, expanded = stack.pop()
            if node in path_count:
                continue
            children = adjacency[node]
            if expanded or not children:
                if not children:
                    path_count[node] = 1
                    depth_sum[node] = 0
                else:
                    path_count[node] = sum(path_count[c] for c in children)
                    depth_sum[node] = sum(depth_sum[c] + path_count[c] for c in children)
            else:
                stack.append((node, True))
                stack.extend((child, False) for child in children)
    return path_count, depth_sum


def _reachable_count(adjacency: dict[str, list[str]], root: str) -> int:
    seen = {root}
    stack = [root]
    while stack:
        node = stack.pop()
        for child in adjacency[node]:
            if child not in seen:
                seen.add(child)
                stack.append(child)
    return len(seen)


def direction_stats(graph: ProvenanceGraph) -> tuple[DirectionStats, ...]:
    """Per-root branch/depth tallies; also validates acyclicity."""
    if not graph.nodes:
        return ()
    adjacency = graph.adjacency()
    _check_acyclic(adjacency)
    roots = graph.roots()
    path_count, depth_sum = _path_tallies(adjacency, roots)
    return tuple(
        DirectionStats(
            root=root,
            branches=path_count[root],
            depth_sum=depth_sum[root],
            reachable=_reachable_count(adjacency, root),
        )
        for root in roots
    )


def compute_metrics(graph: ProvenanceGraph) -> ExplorationMetrics:
    """Directions / mean branches / mean depth for a provenance DAG."""
    stats = direction_stats(graph)
    if not stats:
        return ExplorationMetrics(directions=0, mean_branches=0.0, mean_depth=0.0)
    total_branches = sum(s.branches for s in stats)
    total_depth = sum(s.depth_sum for s in stats)
    return ExplorationMetrics(
        directions=len(stats),
        mean_branches=total_branches / len(stats),
        mean_depth=(total_depth / total_branches) if total_branches else 0.0,
    )
