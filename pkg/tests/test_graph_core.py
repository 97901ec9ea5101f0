import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclequiv import (
    DirectedGraph,
    EdgeMark,
    GraphFormatError,
    MixedGraph,
    NodePermutation,
    apply_permutation,
    decode,
    decode_directed,
    decode_mixed,
    encode,
    pag_equal,
)

T, A, O = EdgeMark.TAIL, EdgeMark.ARROW, EdgeMark.CIRCLE


@st.composite
def directed_graphs(draw, max_n=8):
    n = draw(st.integers(min_value=0, max_value=max_n))
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return DirectedGraph(n, edges)


@st.composite
def mixed_graphs(draw, max_n=8):
    n = draw(st.integers(min_value=0, max_value=max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    marks = st.sampled_from([T, A, O])
    edges = [(i, j, draw(marks), draw(marks)) for i, j in chosen]
    return MixedGraph(n, edges)


class TestDirectedGraph:
    def test_rejects_self_loop(self):
        with pytest.raises(ValueError, match="self-loop"):
            DirectedGraph(3, [(1, 1)])

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError, match="out of range"):
            DirectedGraph(2, [(0, 5)])

    def test_two_cycle_allowed(self):
        g = DirectedGraph(2, [(0, 1), (1, 0)])
        assert g.has_edge(0, 1) and g.has_edge(1, 0)

    def test_parents_children_consistent(self):
        g = DirectedGraph(4, [(0, 2), (2, 3), (3, 2), (1, 3)])
        assert g.parents(2) == (0, 3)
        assert g.children(2) == (3,)
        assert g.parents(0) == ()
        assert g.adjacent(2, 3) and not g.adjacent(0, 1)


class TestMixedGraph:
    def test_duplicate_pair_conflicting_marks(self):
        with pytest.raises(ValueError, match="conflicting"):
            MixedGraph(2, [(0, 1, T, A), (1, 0, T, A)])

    def test_duplicate_pair_same_marks_collapses(self):
        m = MixedGraph(2, [(0, 1, T, A), (1, 0, A, T)])
        assert m.edge_count == 1

    def test_underline_requires_collider(self):
        with pytest.raises(ValueError, match="not a collider"):
            MixedGraph(3, [(0, 1, T, T), (1, 2, A, T)], [(0, 1, 2)])

    def test_underline_requires_unshielded(self):
        edges = [(0, 1, T, A), (2, 1, T, A), (0, 2, T, T)]
        with pytest.raises(ValueError, match="shielded"):
            MixedGraph(3, edges, [(0, 1, 2)])

    def test_underline_canonicalized(self):
        edges = [(0, 1, T, A), (2, 1, T, A)]
        m = MixedGraph(3, edges, [(2, 1, 0)])
        assert m.underline_triples == {(0, 1, 2)}

    def test_marks_orientation(self):
        m = MixedGraph(2, [(1, 0, A, T)])
        assert m.marks(0, 1) == (T, A)
        assert m.mark_at(1, 0) is A


class TestEncodeDecode:
    def test_empty_graph_header_only(self):
        g = DirectedGraph(0)
        text = encode(g)
        assert text == "cdg 1\nn 0\n"
        assert decode(text) == g

    def test_fig1_roundtrip(self, fig1):
        assert decode(encode(fig1)) == fig1

    def test_insertion_order_irrelevant(self):
        g1 = DirectedGraph(3, [(0, 1), (1, 2)])
        g2 = DirectedGraph(3, [(1, 2), (0, 1)])
        assert encode(g1) == encode(g2)

    def test_byte_equality_iff_graph_equality(self):
        g1 = DirectedGraph(3, [(0, 1)])
        g2 = DirectedGraph(3, [(1, 0)])
        assert encode(g1) != encode(g2)

    @settings(max_examples=150)
    @given(directed_graphs())
    def test_directed_roundtrip(self, g):
        assert decode(encode(g)) == g

    @settings(max_examples=150)
    @given(mixed_graphs())
    def test_mixed_roundtrip(self, m):
        assert decode(encode(m)) == m

    def test_mixed_roundtrip_with_underlines(self):
        m = MixedGraph(4, [(0, 1, T, A), (2, 1, T, A), (0, 3, O, O)], [(0, 1, 2)])
        assert decode(encode(m)) == m

    def test_comments_ignored(self, fig1):
        text = encode(fig1, comments=("hello", "world"))
        assert "# hello" in text
        assert decode(text) == fig1

    def test_bad_magic(self):
        with pytest.raises(GraphFormatError, match="magic"):
            decode("dgc 1\nn 2\n")

    def test_self_loop_rejected(self):
        with pytest.raises(GraphFormatError, match="line 3.*self-loop"):
            decode("cdg 1\nn 6\ne 5 5\n")

    def test_duplicate_edge_rejected(self):
        with pytest.raises(GraphFormatError, match="line 4.*duplicate"):
            decode("cdg 1\nn 2\ne 0 1\ne 0 1\n")

    def test_out_of_range_rejected(self):
        with pytest.raises(GraphFormatError, match="line 3.*out of range"):
            decode("cdg 1\nn 2\ne 0 2\n")

    def test_unknown_mark_rejected(self):
        with pytest.raises(GraphFormatError, match="mark"):
            decode("pag 1\nn 2\ne 0 x 1 t\n")

    def test_edge_before_n_rejected(self):
        with pytest.raises(GraphFormatError, match="before 'n'"):
            decode("cdg 1\ne 0 1\nn 2\n")

    def test_missing_n_rejected(self):
        with pytest.raises(GraphFormatError, match="missing 'n'"):
            decode("cdg 1\n")

    def test_duplicate_pag_edge_rejected(self):
        with pytest.raises(GraphFormatError, match="duplicate"):
            decode("pag 1\nn 2\ne 0 t 1 a\ne 1 a 0 t\n")

    def test_kind_specific_decoders(self, fig1):
        assert decode_directed(encode(fig1)) == fig1
        with pytest.raises(GraphFormatError):
            decode_mixed(encode(fig1))


class TestPermutation:
    def test_not_bijection(self):
        with pytest.raises(ValueError, match="bijection"):
            NodePermutation((0, 0, 1))

    def test_identity(self, fig1):
        assert apply_permutation(fig1, NodePermutation.identity(4)) == fig1

    def test_swap(self):
        g = DirectedGraph(2, [(0, 1)])
        assert apply_permutation(g, NodePermutation((1, 0))) == DirectedGraph(2, [(1, 0)])

    def test_size_mismatch(self, fig1):
        with pytest.raises(ValueError, match="permutation"):
            apply_permutation(fig1, NodePermutation((0, 1)))

    def test_mixed_graph_marks_follow_vertices(self):
        m = MixedGraph(3, [(0, 1, T, A), (2, 1, T, A)], [(0, 1, 2)])
        p = NodePermutation((2, 0, 1))
        q = apply_permutation(m, p)
        assert q.marks(2, 0) == (T, A)
        assert q.underline_triples == {(1, 0, 2)}

    @settings(max_examples=100)
    @given(directed_graphs())
    def test_inverse_roundtrip(self, g):
        rand = random.Random(g.n * 31 + len(g.edges))
        perm = list(range(g.n))
        rand.shuffle(perm)
        p = NodePermutation(tuple(perm))
        assert apply_permutation(apply_permutation(g, p), p.inverse()) == g


class TestPagEqual:
    def test_reflexive(self):
        m = MixedGraph(3, [(0, 1, T, A), (1, 2, O, O)])
        assert pag_equal(m, MixedGraph(3, [(0, 1, T, A), (1, 2, O, O)]))

    def test_single_mark_difference(self):
        m1 = MixedGraph(2, [(0, 1, O, A)])
        m2 = MixedGraph(2, [(0, 1, O, O)])
        assert not pag_equal(m1, m2)

    def test_labels_significant(self):
        m1 = MixedGraph(3, [(0, 1, T, A)])
        m2 = apply_permutation(m1, NodePermutation((1, 2, 0)))
        assert not pag_equal(m1, m2)

    def test_underline_difference(self):
        edges = [(0, 1, T, A), (2, 1, T, A)]
        assert not pag_equal(MixedGraph(3, edges, [(0, 1, 2)]), MixedGraph(3, edges))
