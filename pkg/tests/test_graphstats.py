import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gazegraph.graphstats import (
    GraphStatistics,
    classify_patterns,
    graph_statistics,
    graph_statistics_for,
)
from gazegraph.model import Edge, KnowledgeGraph, Node


def simple_edges(nodes, edges):
    seen = set()
    out = []
    for s, t in edges:
        if s != t and (s, t) not in seen:
            seen.add((s, t))
            out.append((s, t))
    return out


def floyd_warshall_stats(nodes, edges):
    """Average path length, diameter over reachable ordered pairs (matrix oracle)."""
    edges = simple_edges(nodes, edges)
    n = len(nodes)
    idx = {v: i for i, v in enumerate(nodes)}
    inf = math.inf
    d = [[0 if i == j else inf for j in range(n)] for i in range(n)]
    for s, t in edges:
        d[idx[s]][idx[t]] = 1
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    finite = [d[i][j] for i in range(n) for j in range(n) if i != j and d[i][j] < inf]
    apl = sum(finite) / len(finite) if finite else 0.0
    diameter = max(finite) if finite else 0
    return apl, diameter


def undirected_matrix(nodes, edges):
    edges = simple_edges(nodes, edges)
    n = len(nodes)
    idx = {v: i for i, v in enumerate(nodes)}
    a = np.zeros((n, n), dtype=int)
    for s, t in edges:
        a[idx[s], idx[t]] = 1
        a[idx[t], idx[s]] = 1
    return a


def triangle_matrix_oracle(nodes, edges):
    a = undirected_matrix(nodes, edges)
    return int(np.trace(np.linalg.matrix_power(a, 3))) // 6


def clustering_matrix_oracle(nodes, edges):
    a = undirected_matrix(nodes, edges)
    n = len(nodes)
    if n == 0:
        return 0.0
    a3 = np.linalg.matrix_power(a, 3)
    total = 0.0
    for i in range(n):
        k = int(a[i].sum())
        if k >= 2:
            total += a3[i, i] / (k * (k - 1))
    return total / n


@st.composite
def digraphs(draw, max_n=7):
    n = draw(st.integers(min_value=1, max_value=max_n))
    nodes = list(range(n))
    possible = [(a, b) for a in nodes for b in nodes if a != b]
    if possible:
        edges = draw(st.lists(st.sampled_from(possible), unique=True, max_size=len(possible)))
    else:
        edges = []
    return nodes, edges


class TestSpecShapes:
    def test_single_directed_edge(self):
        stats = graph_statistics(["a", "b"], [("a", "b")])
        assert stats.node_count == 2
        assert stats.edge_count == 1
        assert stats.density == pytest.approx(0.5)
        assert stats.average_degree == pytest.approx(1.0)
        assert stats.diameter == 1
        assert stats.triangle_count == 0
        assert stats.is_weakly_connected

    def test_directed_three_cycle(self):
        nodes = [1, 2, 3]
        edges = [(1, 2), (2, 3), (3, 1)]
        stats = graph_statistics(nodes, edges)
        assert stats.average_path_length == pytest.approx(1.5)
        assert stats.diameter == 2
        assert stats.clustering_coefficient == pytest.approx(1.0)
        assert stats.triangle_count == 1
        assert stats.pattern_flags == frozenset({"cycle", "complete"})

    def test_two_disconnected_nodes(self):
        stats = graph_statistics([1, 2], [])
        assert not stats.is_weakly_connected
        assert stats.average_path_length == 0.0
        assert stats.diameter == 0
        assert stats.density == 0.0

    def test_single_node(self):
        stats = graph_statistics([1], [])
        assert stats.node_count == 1
        assert stats.average_degree == 0.0
        assert stats.is_weakly_connected
        assert stats.pattern_flags == frozenset()

    def test_as_dict_sorts_flags(self):
        stats = graph_statistics([1, 2, 3], [(1, 2), (2, 3), (3, 1)])
        d = stats.as_dict()
        assert d["pattern_flags"] == ["complete", "cycle"]
        assert set(d) == {
            "node_count",
            "edge_count",
            "is_weakly_connected",
            "average_degree",
            "average_path_length",
            "clustering_coefficient",
            "diameter",
            "density",
            "triangle_count",
            "adjacency_rank",
            "pattern_flags",
        }


class TestPatterns:
    def test_triangle_is_cycle_and_complete(self):
        assert classify_patterns([1, 2, 3], [(1, 2), (2, 3), (3, 1)]) == {"cycle", "complete"}

    def test_five_node_star(self):
        edges = [(1, i) for i in range(2, 6)]
        assert classify_patterns(list(range(1, 6)), edges) == {"star"}

    def test_three_node_star_is_also_path(self):
        assert classify_patterns([1, 2, 3], [(1, 2), (1, 3)]) == {"star", "path"}

    def test_four_node_path(self):
        assert classify_patterns([1, 2, 3, 4], [(1, 2), (2, 3), (3, 4)]) == {"path"}

    def test_two_nodes_one_edge_is_path(self):
        assert classify_patterns([1, 2], [(1, 2)]) == {"path"}

    def test_four_cycle_is_only_cycle(self):
        assert classify_patterns([1, 2, 3, 4], [(1, 2), (2, 3), (3, 4), (4, 1)]) == {"cycle"}

    def test_complete_four_is_only_complete(self):
        edges = [(a, b) for a in range(1, 5) for b in range(1, 5) if a < b]
        assert classify_patterns([1, 2, 3, 4], edges) == {"complete"}

    def test_fewer_than_two_nodes_no_flags(self):
        assert classify_patterns([1], []) == set()
        assert classify_patterns([], []) == set()

    def test_disconnected_graph_no_flags(self):
        assert classify_patterns([1, 2, 3, 4], [(1, 2), (3, 4)]) == set()

    def test_direction_is_ignored(self):
        forward = classify_patterns([1, 2, 3, 4], [(1, 2), (2, 3), (3, 4)])
        backward = classify_patterns([1, 2, 3, 4], [(2, 1), (3, 2), (4, 3)])
        assert forward == backward == {"path"}

    @given(digraphs(), st.randoms(use_true_random=False))
    @settings(max_examples=40)
    def test_invariant_under_relabeling(self, graph, rng):
        nodes, edges = graph
        base = classify_patterns(nodes, edges)
        for _ in range(20):
            perm = list(nodes)
            rng.shuffle(perm)
            mapping = dict(zip(nodes, perm))
            relabeled = [(mapping[s], mapping[t]) for s, t in edges]
            assert classify_patterns(sorted(perm), relabeled) == base


class TestAgainstMatrixOracles:
    @given(digraphs())
    @settings(max_examples=50, deadline=None)
    def test_path_length_and_diameter(self, graph):
        nodes, edges = graph
        stats = graph_statistics(nodes, edges)
        apl, diameter = floyd_warshall_stats(nodes, edges)
        assert stats.average_path_length == pytest.approx(apl, abs=1e-12)
        assert stats.diameter == diameter

    @given(digraphs())
    @settings(max_examples=50, deadline=None)
    def test_triangles_and_clustering(self, graph):
        nodes, edges = graph
        stats = graph_statistics(nodes, edges)
        assert stats.triangle_count == triangle_matrix_oracle(nodes, edges)
        assert stats.clustering_coefficient == pytest.approx(
            clustering_matrix_oracle(nodes, edges), abs=1e-12
        )

    @given(digraphs())
    @settings(max_examples=50, deadline=None)
    def test_adjacency_rank_matches_numpy(self, graph):
        nodes, edges = graph
        stats = graph_statistics(nodes, edges)
        a = np.zeros((len(nodes), len(nodes)))
        for s, t in simple_edges(nodes, edges):
            a[s, t] = 1.0
        assert stats.adjacency_rank == np.linalg.matrix_rank(a)

    def test_adjacency_rank_matches_numpy_seeded(self):
        rng = random.Random(424242)
        for _ in range(40):
            n = rng.randint(2, 12)
            nodes = list(range(n))
            edges = [(a, b) for a in nodes for b in nodes if a != b and rng.random() < 0.35]
            stats = graph_statistics(nodes, edges)
            a = np.zeros((n, n))
            for s, t in edges:
                a[s, t] = 1.0
            assert stats.adjacency_rank == np.linalg.matrix_rank(a)


class TestIsolatedNodeProperty:
    @given(digraphs())
    @settings(max_examples=40)
    def test_density_and_degree_strictly_decrease(self, graph):
        nodes, edges = graph
        if not edges:
            return
        before = graph_statistics(nodes, edges)
        after = graph_statistics(nodes + [max(nodes) + 1], edges)
        assert after.density < before.density
        assert after.average_degree < before.average_degree
        assert after.edge_count == before.edge_count
        assert not after.is_weakly_connected


class TestGraphStatisticsFor:
    def test_reads_knowledge_graph(self):
        kg = KnowledgeGraph(
            sentence_id="s",
            nodes=[Node(id=i, node_type="t", label=f"w{i}") for i in (1, 2, 3)],
            edges=[Edge(src=1, dst=2, relation="r"), Edge(src=2, dst=3, relation="")],
        )
        stats = graph_statistics_for(kg)
        assert isinstance(stats, GraphStatistics)
        assert stats.node_count == 3
        assert stats.edge_count == 2
        # A 3-node path and a 3-node star are the same undirected shape.
        assert stats.pattern_flags == frozenset({"path", "star"})
