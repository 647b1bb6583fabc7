"""Whole-graph statistics and shape-pattern classification.

Covers the descriptive battery reported per task: size, density, degree,
path lengths over reachable pairs, clustering and triangles on the undirected
projection, adjacency-matrix rank, weak connectivity, and the independent
star/cycle/path/complete shape flags.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from .centrality import build_adjacency
from .model import KnowledgeGraph

RANK_PIVOT_TOL = 1e-9
PATTERN_NAMES = ("star", "cycle", "path", "complete")


@dataclass(frozen=True)
class GraphStatistics:
    node_count: int
    edge_count: int
    is_weakly_connected: bool
    average_degree: float
    average_path_length: float
    clustering_coefficient: float
    diameter: int
    density: float
    triangle_count: int
    adjacency_rank: int
    pattern_flags: frozenset[str]

    def as_dict(self) -> dict:
        return {
            "node_count": self.node_count,
            "edge_count": self.edge_count,
            "is_weakly_connected": self.is_weakly_connected,
            "average_degree": self.average_degree,
            "average_path_length": self.average_path_length,
            "clustering_coefficient": self.clustering_coefficient,
            "diameter": self.diameter,
            "density": self.density,
            "triangle_count": self.triangle_count,
            "adjacency_rank": self.adjacency_rank,
            "pattern_flags": sorted(self.pattern_flags),
        }


def _undirected(
    ordered: list[Hashable], out: dict[Hashable, list[Hashable]]
) -> dict[Hashable, set[Hashable]]:
    und: dict[Hashable, set[Hashable]] = {v: set() for v in ordered}
    for v in ordered:
        for w in out[v]:
            und[v].add(w)
            und[w].add(v)
    return und


def _matrix_rank(ordered: list[Hashable], out: dict[Hashable, list[Hashable]]) -> int:
    """Rank of the 0/1 adjacency matrix by Gaussian elimination."""
    n = len(ordered)
    index = {v: i for i, v in enumerate(ordered)}
    rows = [[0.0] * n for _ in range(n)]
    for v in ordered:
        for w in out[v]:
            rows[index[v]][index[w]] = 1.0
    rank = 0
    col = 0
    while rank < n and col < n:
        pivot = max(range(rank, n), key=lambda r: abs(rows[r][col]))
        if abs(rows[pivot][col]) <= RANK_PIVOT_TOL:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        lead = rows[rank][col]
        for r in range(rank + 1, n):
            factor = rows[r][col] / lead
            if factor:
                for c in range(col, n):
                    rows[r][c] -= factor * rows[rank][c]
        rank += 1
        col += 1
    return rank


def classify_patterns(
    nodes: Sequence[Hashable], edges: Iterable[tuple[Hashable, Hashable]]
) -> set[str]:
    """Shape flags on the undirected simple projection; independent, may overlap.

    A triangle is both a cycle and complete; a 3-node star is also a path.
    Graphs with fewer than 2 nodes carry no flags.
    """
    ordered, out, _ = build_adjacency(nodes, edges)
    n = len(ordered)
    if n < 2:
        return set()
    und = _undirected(ordered, out)
    degrees = [len(und[v]) for v in ordered]
    connected = _weakly_connected(ordered, und)

    flags = set()
    if n >= 3 and any(len(und[v]) == n - 1 for v in ordered) and sorted(degrees)[: n - 1] == [1] * (n - 1):
        flags.add("star")
    if connected and n >= 3 and all(d == 2 for d in degrees):
        flags.add("cycle")
    if connected and degrees.count(1) == 2 and all(d in (1, 2) for d in degrees):
        flags.add("path")
    if n >= 3 and all(d == n - 1 for d in degrees):
        flags.add("complete")
    return flags


def _weakly_connected(ordered: list[Hashable], und: dict[Hashable, set[Hashable]]) -> bool:
    if len(ordered) <= 1:
        return True
    seen = {ordered[0]}
    queue = deque([ordered[0]])
    while queue:
        v = queue.popleft()
        for w in und[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(ordered)


def graph_statistics(
    nodes: Sequence[Hashable], edges: Iterable[tuple[Hashable, Hashable]]
) -> GraphStatistics:
    """Descriptive statistics of one directed graph.

    Path length and diameter are over ordered reachable pairs only (0 when no
    pair is reachable); clustering and triangles use the undirected simple
    projection.
    """
    ordered, out, _ = build_adjacency(nodes, edges)
    n = len(ordered)
    m = sum(len(out[v]) for v in ordered)
    density = m / (n * (n - 1)) if n > 1 else 0.0
    average_degree = 2 * m / n if n else 0.0

    total_dist = 0
    pair_count = 0
    diameter = 0
    for s in ordered:
        dist = {s: 0}
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in out[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    total_dist += dist[w]
                    pair_count += 1
                    if dist[w] > diameter:
                        diameter = dist[w]
                    queue.append(w)
    average_path_length = total_dist / pair_count if pair_count else 0.0

    und = _undirected(ordered, out)
    closed = 0
    local_sum = 0.0
    for v in ordered:
        neigh = list(und[v])
        k = len(neigh)
        links = 0
        for i in range(k):
            for j in range(i + 1, k):
                if neigh[j] in und[neigh[i]]:
                    links += 1
        closed += links
        if k >= 2:
            local_sum += 2 * links / (k * (k - 1))
    clustering = local_sum / n if n else 0.0
    triangles = closed // 3

    return GraphStatistics(
        node_count=n,
        edge_count=m,
        is_weakly_connected=_weakly_connected(ordered, und),
        average_degree=average_degree,
        average_path_length=average_path_length,
        clustering_coefficient=clustering,
        diameter=diameter,
        density=density,
        triangle_count=triangles,
        adjacency_rank=_matrix_rank(ordered, out),
        pattern_flags=frozenset(classify_patterns(ordered, [(v, w) for v in ordered for w in out[v]])),
    )


def graph_statistics_for(kg: KnowledgeGraph) -> GraphStatistics:
    return graph_statistics(kg.node_ids(), [(e.src, e.dst) for e in kg.edges])
