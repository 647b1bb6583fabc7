"""Centrality measures on directed graphs, implemented without dependencies.

All functions take an explicit node sequence plus an edge iterable so they
work both on extracted knowledge graphs and on plain test digraphs. Graphs
are treated as simple: repeated edges are collapsed and self-loops dropped.
Results are dicts keyed by node, deterministic for a given input order.
"""

from __future__ import annotations

import math
from collections import deque
from typing import Hashable, Iterable, Sequence

from .model import GazeGraphError, KnowledgeGraph

PAGERANK_DAMPING = 0.85
PAGERANK_TOL = 1e-10
PAGERANK_MAX_ITER = 1000


def build_adjacency(
    nodes: Sequence[Hashable], edges: Iterable[tuple[Hashable, Hashable]]
) -> tuple[list[Hashable], dict[Hashable, list[Hashable]], dict[Hashable, list[Hashable]]]:
    """Dedupe nodes/edges preserving first-seen order; returns (nodes, out, in)."""
    ordered: list[Hashable] = []
    seen = set()
    for v in nodes:
        if v not in seen:
            seen.add(v)
            ordered.append(v)
    out: dict[Hashable, list[Hashable]] = {v: [] for v in ordered}
    incoming: dict[Hashable, list[Hashable]] = {v: [] for v in ordered}
    edge_seen: set[tuple[Hashable, Hashable]] = set()
    for src, dst in edges:
        if src not in seen or dst not in seen:
            raise GazeGraphError(f"edge ({src!r}, {dst!r}) references an unknown node")
        if src == dst or (src, dst) in edge_seen:
            continue
        edge_seen.add((src, dst))
        out[src].append(dst)
        incoming[dst].append(src)
    return ordered, out, incoming


def pagerank(
    nodes: Sequence[Hashable],
    edges: Iterable[tuple[Hashable, Hashable]],
    damping: float = PAGERANK_DAMPING,
    tol: float = PAGERANK_TOL,
    max_iter: int = PAGERANK_MAX_ITER,
) -> dict[Hashable, float]:
    """Power-iteration PageRank on a directed graph.

    Starts from the uniform vector; a node with no out-edges spreads its mass
    uniformly over all nodes. Iterates until the L1 change drops below tol.
    """
    ordered, out, _ = build_adjacency(nodes, edges)
    n = len(ordered)
    if n == 0:
        return {}
    rank = {v: 1.0 / n for v in ordered}
    for _ in range(max_iter):
        dangling = sum(rank[v] for v in ordered if not out[v])
        nxt = {v: (1.0 - damping) / n + damping * dangling / n for v in ordered}
        for v in ordered:
            if out[v]:
                share = damping * rank[v] / len(out[v])
                for w in out[v]:
                    nxt[w] += share
        if sum(abs(nxt[v] - rank[v]) for v in ordered) < tol:
            return nxt
        rank = nxt
    return rank


def degree_centrality(
    nodes: Sequence[Hashable], edges: Iterable[tuple[Hashable, Hashable]]
) -> dict[Hashable, float]:
    """(in-degree + out-degree) / (n - 1); zero everywhere when n < 2."""
    ordered, out, incoming = build_adjacency(nodes, edges)
    n = len(ordered)
    if n < 2:
        return {v: 0.0 for v in ordered}
    return {v: (len(out[v]) + len(incoming[v])) / (n - 1) for v in ordered}


def betweenness_centrality(
    nodes: Sequence[Hashable], edges: Iterable[tuple[Hashable, Hashable]]
) -> dict[Hashable, float]:
    """Brandes betweenness for directed graphs, normalized by (n-1)(n-2).

    Counts the fraction of shortest paths between ordered pairs of distinct
    other nodes that pass through each node.
    """
    ordered, out, _ = build_adjacency(nodes, edges)
    n = len(ordered)
    score = {v: 0.0 for v in ordered}
    if n < 3:
        return score
    for s in ordered:
        stack: list[Hashable] = []
        preds: dict[Hashable, list[Hashable]] = {v: [] for v in ordered}
        sigma = {v: 0.0 for v in ordered}
        dist = {v: -1 for v in ordered}
        sigma[s] = 1.0
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            for w in out[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = {v: 0.0 for v in ordered}
        while stack:
            w = stack.pop()
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                score[w] += delta[w]
    scale = 1.0 / ((n - 1) * (n - 2))
    return {v: score[v] * scale for v in ordered}


def closeness_centrality(
    nodes: Sequence[Hashable], edges: Iterable[tuple[Hashable, Hashable]]
) -> dict[Hashable, float]:
    """Incoming closeness scaled by reachable-set size.

    For node v with r other nodes able to reach it at total distance D, the
    score is (r / (n-1)) * (r / D); nodes nothing reaches score 0.
    """
    ordered, _, incoming = build_adjacency(nodes, edges)
    n = len(ordered)
    score = {v: 0.0 for v in ordered}
    if n < 2:
        return score
    for v in ordered:
        dist = {v: 0}
        queue = deque([v])
        total = 0
        while queue:
            w = queue.popleft()
            for u in incoming[w]:
                if u not in dist:
                    dist[u] = dist[w] + 1
                    total += dist[u]
                    queue.append(u)
        reached = len(dist) - 1
        if reached > 0:
            score[v] = (reached / (n - 1)) * (reached / total)
    return score


def top_fraction_selection(scores: dict[Hashable, float], fraction: float) -> set[Hashable]:
    """The ceil(fraction * n) highest-scoring nodes; ties go to the smaller id."""
    if not 0 < fraction <= 1:
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    k = math.ceil(fraction * len(scores))
    ranked = sorted(scores, key=lambda v: (-scores[v], v))
    return set(ranked[:k])


MEASURES = {
    "pagerank": pagerank,
    "degree": degree_centrality,
    "betweenness": betweenness_centrality,
    "closeness": closeness_centrality,
}


def centrality_scores(kg: KnowledgeGraph) -> dict[str, dict[int, float]]:
    """All four measures for one knowledge graph, keyed by measure name."""
    nodes = kg.node_ids()
    edges = [(e.src, e.dst) for e in kg.edges]
    return {name: fn(nodes, edges) for name, fn in MEASURES.items()}
