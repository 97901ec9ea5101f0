import random

import numpy as np
import pytest

from cyclequiv import (
    DirectedGraph,
    EdgeMark,
    InvariantViolation,
    MixedGraph,
    build_cmag,
    compute_ancestry,
    connected_in_subgraph,
    uncovered_subpath,
)
from helpers import (
    bfs_closure,
    er_digraph,
    is_uncovered,
    squaring_closure,
    subgraph_connected_paths,
)

T, A = EdgeMark.TAIL, EdgeMark.ARROW


class TestComputeAncestry:
    def test_fig1(self, fig1):
        info = compute_ancestry(fig1)
        assert sorted(map(sorted, info.scc_members)) == [[0], [1], [2, 3]]
        assert (info.anc == squaring_closure(fig1)).all()
        assert {j for j in range(4) if info.anc[0, j]} == {0, 2, 3}
        assert {j for j in range(4) if info.anc[1, j]} == {1, 2, 3}

    def test_dag_all_singletons(self):
        g = DirectedGraph(5, [(0, 1), (1, 2), (0, 3), (3, 4)])
        info = compute_ancestry(g)
        assert all(len(s) == 1 for s in info.scc_members)

    def test_three_cycle(self):
        g = DirectedGraph(3, [(0, 1), (1, 2), (2, 0)])
        info = compute_ancestry(g)
        assert info.scc_members == (frozenset({0, 1, 2}),)
        assert info.anc.all()

    def test_reflexive_and_edge_implication(self):
        rand = random.Random(1)
        for _ in range(30):
            g = er_digraph(rand, rand.randint(1, 12), 0.3)
            info = compute_ancestry(g)
            assert all(info.anc[v, v] for v in range(g.n))
            assert all(info.anc[i, j] for i, j in g.edges)

    def test_matches_bfs_closure(self):
        rand = random.Random(2)
        for _ in range(60):
            g = er_digraph(rand, rand.randint(1, 50), rand.uniform(0.02, 0.2))
            assert (compute_ancestry(g).anc == bfs_closure(g)).all()

    def test_scc_equals_mutual_ancestry(self):
        rand = random.Random(3)
        for _ in range(40):
            g = er_digraph(rand, rand.randint(1, 20), 0.15)
            info = compute_ancestry(g)
            for i in range(g.n):
                for j in range(g.n):
                    mutual = info.anc[i, j] and info.anc[j, i]
                    assert (info.scc_id[i] == info.scc_id[j]) == mutual

    def test_emission_order_topological(self):
        # every component only reaches components emitted before it
        rand = random.Random(4)
        for _ in range(20):
            g = er_digraph(rand, rand.randint(2, 15), 0.2)
            info = compute_ancestry(g)
            for i, j in g.edges:
                assert info.scc_id[i] >= info.scc_id[j]

    def test_anc_is_readonly(self, fig1):
        info = compute_ancestry(fig1)
        with pytest.raises(ValueError):
            info.anc[0, 0] = False


class TestConnectedInSubgraph:
    def test_target_is_source(self):
        m = MixedGraph(2)
        assert connected_in_subgraph(m, {0}, 0, {0})

    def test_no_edges(self):
        m = MixedGraph(2)
        assert not connected_in_subgraph(m, {0, 1}, 0, {1})

    def test_source_not_allowed(self):
        m = MixedGraph(2, [(0, 1, T, T)])
        with pytest.raises(ValueError, match="source"):
            connected_in_subgraph(m, {1}, 0, {1})

    def test_target_not_allowed(self):
        m = MixedGraph(2, [(0, 1, T, T)])
        with pytest.raises(ValueError, match="targets"):
            connected_in_subgraph(m, {0}, 0, {1})

    def test_cycle3_u_structure_subgraph(self, cycle3):
        # src=X through the cycle to Y, avoiding X's other neighbours
        m = build_cmag(cycle3)
        info = m.info
        allowed = (info.scc_of(2) - set(m.graph.neighbors(0))) | {0, 2} | {1}
        assert connected_in_subgraph(m.graph, allowed, 0, {1})

    def test_matches_path_enumeration(self):
        rand = random.Random(5)
        for _ in range(60):
            n = rand.randint(2, 8)
            g = er_digraph(rand, n, 0.3)
            m = build_cmag(g).graph
            allowed = {v for v in range(n) if rand.random() < 0.8}
            if not allowed:
                continue
            src = rand.choice(sorted(allowed))
            targets = {v for v in allowed if rand.random() < 0.4} or {src}
            got = connected_in_subgraph(m, allowed, src, targets)
            want = subgraph_connected_paths(m, allowed, src, targets)
            assert got == want


class TestUncoveredSubpath:
    def test_already_uncovered_fixed_point(self):
        m = MixedGraph(3, [(0, 1, T, T), (1, 2, T, T)])
        assert uncovered_subpath(m, (0, 1, 2)) == (0, 1, 2)

    def test_chord_forces_shortcut(self):
        m = MixedGraph(3, [(0, 1, T, T), (1, 2, T, T), (0, 2, T, T)])
        assert uncovered_subpath(m, (0, 1, 2)) == (0, 2)

    def test_trivial_path(self):
        m = MixedGraph(1)
        assert uncovered_subpath(m, (0,)) == (0,)

    def test_not_a_path_rejected(self):
        m = MixedGraph(3, [(0, 1, T, T)])
        with pytest.raises(ValueError, match="not a path"):
            uncovered_subpath(m, (0, 2))

    def test_repeated_vertex_rejected(self):
        m = MixedGraph(2, [(0, 1, T, T)])
        with pytest.raises(ValueError, match="distinct"):
            uncovered_subpath(m, (0, 1, 0))

    def test_non_ancestral_input_rejected(self):
        m = MixedGraph(2, [(0, 1, A, T)])
        with pytest.raises(ValueError, match="ancestral"):
            uncovered_subpath(m, (0, 1), require_ancestral=True)

    def test_random_outputs_uncovered(self):
        rand = random.Random(6)
        checked = 0
        while checked < 80:
            g = er_digraph(rand, rand.randint(3, 9), 0.35)
            m = build_cmag(g).graph
            path = _random_simple_path(rand, m)
            if path is None:
                continue
            out = uncovered_subpath(m, path)
            assert out[0] == path[0] and out[-1] == path[-1]
            assert is_uncovered(m, out)
            assert set(out) <= set(path)
            checked += 1

    def test_ancestral_outputs_uncovered_and_ancestral(self):
        rand = random.Random(7)
        checked = 0
        while checked < 80:
            g = er_digraph(rand, rand.randint(3, 9), 0.35)
            m = build_cmag(g).graph
            path = _random_simple_path(rand, m, ancestral=True)
            if path is None:
                continue
            out = uncovered_subpath(m, path, require_ancestral=True)
            assert out[0] == path[0] and out[-1] == path[-1]
            assert is_uncovered(m, out)
            for a, b in zip(out, out[1:]):
                assert m.mark_at(a, b) is T
            checked += 1


def _random_simple_path(rand, m, ancestral=False, max_len=6):
    if m.n == 0:
        return None
    v = rand.randrange(m.n)
    path = [v]
    while len(path) < max_len:
        options = [
            w
            for w in m.neighbors(path[-1])
            if w not in path and (not ancestral or m.mark_at(path[-1], w) is T)
        ]
        if not options or rand.random() < 0.25:
            break
        path.append(rand.choice(options))
    return tuple(path) if len(path) >= 2 else None
