"""Construction of the maximal ancestral graph of a directed graph with
cycles.

Part 1 joins, per vertex, the parents inside its strongly connected
component to the vertex and to each other with undirected edges, and brings
all remaining parents in with arrows; this realizes exactly the adjacent and
virtually adjacent pairs.  Part 2 marks the dashed-underlined collider
triples (virtual v-structures) at colliders inside nontrivial components.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .graph_core import DirectedGraph, EdgeMark, InvariantViolation, MixedGraph
from .reachability import AncestryInfo, compute_ancestry

_TAIL = EdgeMark.TAIL
_ARROW = EdgeMark.ARROW

MarkDict = dict[tuple[int, int], tuple[EdgeMark, EdgeMark]]


@dataclass(frozen=True)
class Cmag:
    """Mixed graph with tail/arrow marks, the ancestry of its source graph,
    and the source graph itself.

    Undirected edges connect exactly same-component pairs; an arrow at x on
    the edge to y means x is not an ancestor of y.  The underline triples of
    ``graph`` are the virtual v-structures.
    """

    graph: MixedGraph
    info: AncestryInfo
    source: DirectedGraph

    @property
    def n(self) -> int:
        return self.graph.n

    def directed_edges(self) -> list[tuple[int, int]]:
        """All arcs (x, z) of the mixed graph: tail at x, arrow at z."""
        out = []
        for a, b, ma, mb in self.graph.edge_items():
            if ma is _TAIL and mb is _ARROW:
                out.append((a, b))
            elif ma is _ARROW and mb is _TAIL:
                out.append((b, a))
        return out

    def parents_in_m(self, v: int) -> list[int]:
        """Vertices u with an arc u -> v in the mixed graph."""
        return [
            u
            for u in self.graph.neighbors(v)
            if self.graph.mark_at(v, u) is _ARROW and self.graph.mark_at(u, v) is _TAIL
        ]


def _put(marks: MarkDict, u: int, v: int, mu: EdgeMark, mv: EdgeMark) -> None:
    key, val = ((u, v), (mu, mv)) if u < v else ((v, u), (mv, mu))
    old = marks.get(key)
    if old is not None and old != val:
        raise InvariantViolation(f"conflicting marks for edge {key}: {old} vs {val}")
    marks[key] = val


def cmag_part1(g: DirectedGraph, info: AncestryInfo) -> MarkDict:
    """Skeleton and tail/arrow marks: for each vertex, undirected edges among
    its same-component parents and itself, arrows from all other parents
    into that group."""
    marks: MarkDict = {}
    for x in range(g.n):
        z_cyc = [p for p in g.parents(x) if info.same_scc(p, x)]
        z_acy = [p for p in g.parents(x) if not info.same_scc(p, x)]
        group = z_cyc + [x]
        for w in z_acy:
            for v in group:
                _put(marks, w, v, _TAIL, _ARROW)
        for i, u in enumerate(z_cyc):
            for v in group[i + 1 :]:
                _put(marks, u, v, _TAIL, _TAIL)
    return marks


def cmag_part2(
    g: DirectedGraph, info: AncestryInfo, marks: MarkDict
) -> set[tuple[int, int, int]]:
    """Virtual v-structures: nonadjacent parent pairs of a collider in a
    nontrivial component, at least one of the two edges virtual, where the
    collider does not descend from a common child of the pair."""
    mparents: dict[int, list[int]] = {x: [] for x in range(g.n)}
    for (a, b), (ma, mb) in marks.items():
        if ma is _TAIL and mb is _ARROW:
            mparents[b].append(a)
        elif ma is _ARROW and mb is _TAIL:
            mparents[a].append(b)

    underlines: set[tuple[int, int, int]] = set()
    for x in range(g.n):
        if info.scc_size(x) < 2:
            continue
        par = sorted(mparents[x])
        for i, zi in enumerate(par):
            for zj in par[i + 1 :]:
                if (zi, zj) in marks:
                    continue  # adjacent pair in the result graph
                if g.adjacent(zi, x) and g.adjacent(zj, x):
                    continue  # both edges real, never underlined
                common = set(g.children(zi)) & set(g.children(zj))
                if any(info.anc[c, x] for c in common):
                    continue
                underlines.add((zi, x, zj))
    return underlines


def build_cmag(g: DirectedGraph, info: Optional[AncestryInfo] = None) -> Cmag:
    """Build the maximal ancestral graph of g.

    Adjacency in the result equals adjacency-or-virtual-adjacency in g, an
    arrow at x on the edge to y means x is not an ancestor of y, and the
    underline triples are exactly the virtual v-structures.
    """
    if info is None:
        info = compute_ancestry(g)
    marks = cmag_part1(g, info)
    underlines = cmag_part2(g, info, marks)
    edges = [(a, b, ma, mb) for (a, b), (ma, mb) in marks.items()]
    return Cmag(MixedGraph(g.n, edges, underlines), info, g)


def virtual_v_structures(m: Cmag) -> frozenset[tuple[int, int, int]]:
    """The dashed-underlined collider triples <x, z, y> of the graph, with
    the smaller outer vertex first."""
    return m.graph.underline_triples
