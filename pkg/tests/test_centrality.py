import random
from collections import deque
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gazegraph.centrality import (
    PAGERANK_DAMPING,
    betweenness_centrality,
    build_adjacency,
    closeness_centrality,
    degree_centrality,
    pagerank,
    top_fraction_selection,
)
from gazegraph.model import GazeGraphError


def simple_edges(nodes, edges):
    seen = set()
    out = []
    for s, t in edges:
        if s != t and (s, t) not in seen:
            seen.add((s, t))
            out.append((s, t))
    return out


def pagerank_linear_oracle(nodes, edges, damping=PAGERANK_DAMPING):
    """Exact stationary vector by direct linear solve (no iteration)."""
    edges = simple_edges(nodes, edges)
    n = len(nodes)
    idx = {v: i for i, v in enumerate(nodes)}
    outdeg = {v: 0 for v in nodes}
    for s, _ in edges:
        outdeg[s] += 1
    M = np.zeros((n, n))
    for s, t in edges:
        M[idx[t], idx[s]] = 1.0 / outdeg[s]
    for v in nodes:
        if outdeg[v] == 0:
            M[:, idx[v]] = 1.0 / n
    A = np.eye(n) - damping * M
    b = np.full(n, (1.0 - damping) / n)
    x = np.linalg.solve(A, b)
    return {v: float(x[idx[v]]) for v in nodes}


def betweenness_bruteforce(nodes, edges):
    """Exact betweenness by enumerating every shortest path, in Fractions."""
    edges = simple_edges(nodes, edges)
    adj = {v: [] for v in nodes}
    for s, t in edges:
        adj[s].append(t)
    n = len(nodes)
    if n < 3:
        return {v: 0.0 for v in nodes}
    score = {v: Fraction(0) for v in nodes}
    for s in nodes:
        dist = {s: 0}
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        for t in nodes:
            if t == s or t not in dist:
                continue
            paths = []

            def walk(v, path):
                if v == t:
                    paths.append(list(path))
                    return
                for w in adj[v]:
                    if w in dist and dist[w] == dist[v] + 1 and dist[w] <= dist[t]:
                        path.append(w)
                        walk(w, path)
                        path.pop()

            walk(s, [s])
            through = {}
            for p in paths:
                for v in p[1:-1]:
                    through[v] = through.get(v, 0) + 1
            for v, count in through.items():
                score[v] += Fraction(count, len(paths))
    scale = Fraction(1, (n - 1) * (n - 2))
    return {v: float(score[v] * scale) for v in nodes}


def closeness_forward_oracle(nodes, edges):
    """Closeness recomputed from forward BFS distances of every source."""
    edges = simple_edges(nodes, edges)
    adj = {v: [] for v in nodes}
    for s, t in edges:
        adj[s].append(t)
    n = len(nodes)
    dists = {}
    for u in nodes:
        d = {u: 0}
        queue = deque([u])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w not in d:
                    d[w] = d[v] + 1
                    queue.append(w)
        dists[u] = d
    out = {}
    for v in nodes:
        incoming = [dists[u][v] for u in nodes if u != v and v in dists[u]]
        r, total = len(incoming), sum(incoming)
        out[v] = (r / (n - 1)) * (r / total) if total else 0.0
    return out


@st.composite
def digraphs(draw, max_n=8):
    n = draw(st.integers(min_value=1, max_value=max_n))
    nodes = list(range(n))
    possible = [(a, b) for a in nodes for b in nodes if a != b]
    if possible:
        edges = draw(st.lists(st.sampled_from(possible), unique=True, max_size=len(possible)))
    else:
        edges = []
    return nodes, edges


def random_digraph(rng, max_n):
    n = rng.randint(2, max_n)
    nodes = list(range(n))
    edges = [(a, b) for a in nodes for b in nodes if a != b and rng.random() < 0.3]
    return nodes, edges


class TestBuildAdjacency:
    def test_dedupes_and_drops_self_loops(self):
        ordered, out, incoming = build_adjacency([1, 2, 2, 3], [(1, 2), (1, 2), (2, 2), (2, 3)])
        assert ordered == [1, 2, 3]
        assert out == {1: [2], 2: [3], 3: []}
        assert incoming == {1: [], 2: [1], 3: [2]}

    def test_unknown_endpoint_rejected(self):
        with pytest.raises(GazeGraphError):
            build_adjacency([1, 2], [(1, 9)])


class TestPagerank:
    def test_two_node_chain(self):
        got = pagerank(["a", "b"], [("a", "b")])
        assert got["a"] == pytest.approx(0.35087719296865083, abs=1e-9)
        assert got["b"] == pytest.approx(0.6491228070313491, abs=1e-9)

    def test_cycle_is_uniform(self):
        for n in range(2, 9):
            nodes = list(range(n))
            edges = [(i, (i + 1) % n) for i in nodes]
            got = pagerank(nodes, edges)
            for v in nodes:
                assert got[v] == pytest.approx(1.0 / n, abs=1e-9)

    def test_no_edges_is_uniform(self):
        got = pagerank([1, 2, 3, 4], [])
        for v in got:
            assert got[v] == pytest.approx(0.25, abs=1e-12)

    def test_empty_graph(self):
        assert pagerank([], []) == {}

    @given(digraphs())
    @settings(max_examples=60)
    def test_sums_to_one(self, graph):
        nodes, edges = graph
        assert sum(pagerank(nodes, edges).values()) == pytest.approx(1.0, abs=1e-8)

    @given(digraphs())
    @settings(max_examples=60)
    def test_matches_linear_solve(self, graph):
        nodes, edges = graph
        got = pagerank(nodes, edges)
        want = pagerank_linear_oracle(nodes, edges)
        for v in nodes:
            assert got[v] == pytest.approx(want[v], abs=1e-8)

    def test_matches_linear_solve_on_larger_graphs(self):
        rng = random.Random(20250815)
        for _ in range(25):
            nodes, edges = random_digraph(rng, max_n=20)
            got = pagerank(nodes, edges)
            want = pagerank_linear_oracle(nodes, edges)
            for v in nodes:
                assert got[v] == pytest.approx(want[v], abs=1e-8)


class TestDegree:
    def test_path(self):
        got = degree_centrality(["a", "b", "c"], [("a", "b"), ("b", "c")])
        assert got == {"a": 0.5, "b": 1.0, "c": 0.5}

    def test_single_node_is_zero(self):
        assert degree_centrality(["a"], []) == {"a": 0.0}

    def test_counts_both_directions(self):
        got = degree_centrality([1, 2], [(1, 2), (2, 1)])
        assert got == {1: 2.0, 2: 2.0}

    @given(digraphs())
    @settings(max_examples=60)
    def test_matches_count_oracle(self, graph):
        nodes, edges = graph
        got = degree_centrality(nodes, edges)
        clean = simple_edges(nodes, edges)
        n = len(nodes)
        for v in nodes:
            expected = 0.0
            if n > 1:
                deg = sum(1 for s, t in clean if s == v) + sum(1 for s, t in clean if t == v)
                expected = deg / (n - 1)
            assert got[v] == pytest.approx(expected, abs=1e-15)


class TestBetweenness:
    def test_four_cycle(self):
        nodes = [0, 1, 2, 3]
        edges = [(0, 1), (1, 2), (2, 3), (3, 0)]
        got = betweenness_centrality(nodes, edges)
        for v in nodes:
            assert got[v] == pytest.approx(0.5, abs=1e-12)

    def test_directed_path_midpoint(self):
        got = betweenness_centrality([0, 1, 2], [(0, 1), (1, 2)])
        assert got == {0: 0.0, 1: pytest.approx(0.5), 2: 0.0}

    def test_under_three_nodes_all_zero(self):
        assert betweenness_centrality([0, 1], [(0, 1)]) == {0: 0.0, 1: 0.0}

    @given(digraphs(max_n=6))
    @settings(max_examples=50, deadline=None)
    def test_matches_bruteforce(self, graph):
        nodes, edges = graph
        got = betweenness_centrality(nodes, edges)
        want = betweenness_bruteforce(nodes, edges)
        for v in nodes:
            assert got[v] == pytest.approx(want[v], abs=1e-12)

    def test_matches_bruteforce_seeded(self):
        rng = random.Random(9090)
        for _ in range(50):
            nodes, edges = random_digraph(rng, max_n=6)
            got = betweenness_centrality(nodes, edges)
            want = betweenness_bruteforce(nodes, edges)
            for v in nodes:
                assert got[v] == pytest.approx(want[v], abs=1e-12)


class TestCloseness:
    def test_directed_path(self):
        got = closeness_centrality(["a", "b", "c"], [("a", "b"), ("b", "c")])
        assert got["a"] == 0.0
        assert got["b"] == pytest.approx(0.5)
        assert got["c"] == pytest.approx(2.0 / 3.0)

    def test_unreachable_node_scores_zero(self):
        got = closeness_centrality([1, 2, 3], [(2, 3)])
        assert got[1] == 0.0

    @given(digraphs())
    @settings(max_examples=60)
    def test_matches_forward_bfs_oracle(self, graph):
        nodes, edges = graph
        got = closeness_centrality(nodes, edges)
        want = closeness_forward_oracle(nodes, edges)
        for v in nodes:
            assert got[v] == pytest.approx(want[v], abs=1e-12)


class TestTopFraction:
    def test_half_of_four(self):
        scores = {1: 0.9, 2: 0.4, 3: 0.7, 4: 0.1}
        assert top_fraction_selection(scores, 0.5) == {1, 3}

    def test_k_is_ceiling(self):
        scores = {1: 0.9, 2: 0.4, 3: 0.7}
        assert top_fraction_selection(scores, 0.5) == {1, 3}

    def test_ties_go_to_smaller_id(self):
        scores = {1: 0.9, 3: 0.5, 2: 0.5}
        assert top_fraction_selection(scores, 2 / 3) == {1, 2}

    def test_fraction_one_selects_all(self):
        scores = {1: 0.0, 2: 0.0}
        assert top_fraction_selection(scores, 1.0) == {1, 2}

    def test_invalid_fraction_rejected(self):
        for bad in (0.0, -0.5, 1.5):
            with pytest.raises(ValueError):
                top_fraction_selection({1: 1.0}, bad)

    @given(
        st.dictionaries(
            st.integers(0, 20),
            st.integers(0, 1000).map(lambda k: k / 1000.0),
            min_size=1,
            max_size=10,
        ),
        st.floats(0.05, 1.0),
    )
    def test_monotone_transform_invariance(self, scores, fraction):
        # Quantized scores keep 2x+1 strictly monotone in float arithmetic.
        before = top_fraction_selection(scores, fraction)
        after = top_fraction_selection({v: 2.0 * s + 1.0 for v, s in scores.items()}, fraction)
        assert before == after

    @given(
        st.dictionaries(st.integers(0, 20), st.floats(0, 1, allow_nan=False), min_size=1, max_size=10),
        st.floats(0.05, 1.0),
    )
    def test_selected_scores_dominate_rest(self, scores, fraction):
        import math

        chosen = top_fraction_selection(scores, fraction)
        assert len(chosen) == math.ceil(fraction * len(scores))
        worst_in = min((scores[v], -v) for v in chosen) if chosen else None
        for v in set(scores) - chosen:
            assert (scores[v], -v) < worst_in
