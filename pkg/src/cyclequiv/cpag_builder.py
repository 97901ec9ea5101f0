"""Construction of the Markov-complete partial ancestral graph of a directed
graph with cycles, and the direct equivalence test between two ancestral
graphs.

The pipeline copies invariant features out of the maximal ancestral graph in
two passes.  Pass one lays down the skeleton with circle marks, copies all
(virtual) v-structures, and orients the entry arcs of u-structures, located
through subgraph connectivity.  Pass two copies the remaining invariant edges
at virtual v-structures: edges to another virtual collider of the same outer
pair, and edges reached by an uncovered ancestral path from a virtual
collider that is not an ancestor of the v-structure's center.
"""

from __future__ import annotations

import time
from collections import defaultdict, deque
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Optional

from .cmag_builder import Cmag, cmag_part1, cmag_part2
from .graph_core import DirectedGraph, EdgeMark, MixedGraph
from .reachability import compute_ancestry, connected_in_subgraph

_TAIL = EdgeMark.TAIL
_ARROW = EdgeMark.ARROW
_CIRCLE = EdgeMark.CIRCLE

STAGES = (
    "ancestry",
    "cmag_part1",
    "cmag_part2",
    "cpag_init",
    "u_structures",
    "cpag_part2",
)


class MarkOrigin(Enum):
    SKELETON = "skeleton"
    V_STRUCTURE = "v_structure"
    VIRTUAL_V_STRUCTURE = "virtual_v_structure"
    U_STRUCTURE = "u_structure"
    RULE4_ADJACENT = "rule4_adjacent"
    RULE4_PATH = "rule4_path"


class VctKind(Enum):
    VIRTUAL_V_STRUCTURE = "virtual_v_structure"
    U_STRUCTURE = "u_structure"


@dataclass(frozen=True)
class Cpag:
    """Partial ancestral graph certifying the equivalence class of its
    source, plus a per-mark provenance tag for diagnostics.

    ``provenance[(u, v)]`` records why the mark at u on edge {u, v} has its
    value.  Provenance is diagnostic only and excluded from equality.
    """

    graph: MixedGraph
    provenance: Mapping[tuple[int, int], MarkOrigin]

    @property
    def n(self) -> int:
        return self.graph.n


@dataclass(frozen=True)
class VirtualColliderIndex:
    """For each unordered outer pair {x, y}, the colliders z making
    <x, z, y> a virtual collider triple, with how each is realized."""

    by_pair: Mapping[tuple[int, int], Mapping[int, VctKind]]

    def colliders(self, x: int, y: int) -> Mapping[int, VctKind]:
        return self.by_pair.get((min(x, y), max(x, y)), {})

    def contains(self, x: int, z: int, y: int) -> bool:
        return z in self.colliders(x, y)

    def triples(self) -> frozenset[tuple[int, int, int]]:
        return frozenset(
            (a, z, c) for (a, c), zs in self.by_pair.items() for z in zs
        )


def u_structure_candidates(m: Cmag, x: int, z: int) -> frozenset[int]:
    """Admissible far endpoints for a u-structure starting with x -> z:
    parents of z's component that are adjacent to neither x nor z."""
    mg = m.graph
    members = m.info.scc_of(z)
    parents: set[int] = set()
    for v in members:
        parents.update(m.parents_in_m(v))
    parents -= set(mg.neighbors(x))
    parents -= set(mg.neighbors(z))
    parents -= {x, z}
    return frozenset(parents)


def edge_in_u_structure(
    m: Cmag, x: int, z: int, candidates: Iterable[int]
) -> bool:
    """True iff the arc x -> z opens a u-structure <x, z, z', y> for some
    candidate y: x reaches a candidate inside the subgraph over z's
    component stripped of x's neighbours, plus x, z and the candidates."""
    mg = m.graph
    if not mg.has_edge(x, z) or mg.mark_at(z, x) is not _ARROW:
        raise ValueError(f"no arc {x} -> {z} in the graph")
    if m.info.scc_size(z) < 2:
        raise ValueError(f"vertex {z} is not in a nontrivial component")
    cand = frozenset(candidates)
    if not cand <= u_structure_candidates(m, x, z):
        raise ValueError("candidates must be nonadjacent parents of the component")
    if not cand:
        return False
    allowed = (m.info.scc_of(z) - set(mg.neighbors(x))) | {x, z} | cand
    return connected_in_subgraph(mg, allowed, x, cand)


def _scc_parent_map(m: Cmag) -> dict[int, frozenset[int]]:
    """Component id -> vertices with an arc into some member."""
    out: dict[int, set[int]] = defaultdict(set)
    for x, z in m.directed_edges():
        out[m.info.scc_id[z]].add(x)
    return {cid: frozenset(vs) for cid, vs in out.items()}


def _u_structure_hits(
    m: Cmag, x: int, z: int, cand: frozenset[int], nbrs: list[frozenset[int]]
) -> set[int]:
    """All candidates y for which <x, z, z', y> is a u-structure, in one
    sweep: BFS over z's component stripped of x's neighbours, with candidate
    vertices terminal.  Reaching y without passing through another candidate
    is equivalent to connectivity in the subgraph holding y alone."""
    allowed = (m.info.scc_of(z) - nbrs[x]) | {x, z}
    hits: set[int] = set()
    seen = {x}
    queue = deque([x])
    while queue:
        v = queue.popleft()
        for w in nbrs[v]:
            if w in seen:
                continue
            if w in cand:
                seen.add(w)
                hits.add(w)
            elif w in allowed:
                seen.add(w)
                queue.append(w)
    return hits


def _vct_index(
    m: Cmag, restrict_pairs: Optional[frozenset[tuple[int, int]]] = None
) -> VirtualColliderIndex:
    by_pair: dict[tuple[int, int], dict[int, VctKind]] = defaultdict(dict)
    for x, z, y in m.graph.underline_triples:
        pair = (x, y)  # underline triples are stored with x < y
        if restrict_pairs is None or pair in restrict_pairs:
            by_pair[pair][z] = VctKind.VIRTUAL_V_STRUCTURE
    nbrs = [frozenset(m.graph.neighbors(v)) for v in range(m.n)]
    scc_parents = _scc_parent_map(m)
    for x, z in m.directed_edges():
        if m.info.scc_size(z) < 2:
            continue
        cand = scc_parents[m.info.scc_id[z]] - nbrs[x] - nbrs[z] - {x, z}
        if restrict_pairs is not None:
            cand = frozenset(
                y for y in cand if (min(x, y), max(x, y)) in restrict_pairs
            )
        for y in _u_structure_hits(m, x, z, frozenset(cand), nbrs):
            by_pair[(min(x, y), max(x, y))].setdefault(z, VctKind.U_STRUCTURE)
    return VirtualColliderIndex({p: dict(zs) for p, zs in by_pair.items() if zs})


def virtual_collider_triples(m: Cmag) -> VirtualColliderIndex:
    """The full index of virtual collider triples: every virtual v-structure
    plus every triple <x, z, y> where z sits in a u-structure between x and
    y, resolved per pair in both directions."""
    return _vct_index(m)


def find_u_structures(m: Cmag, max_n: int = 12) -> frozenset[tuple[int, int, int, int]]:
    """Definitional enumeration of all u-structures <x, z, z', y>:
    uncovered paths x -> z - .. - z' <- y through one component.

    Exhaustive over uncovered paths; intended for small graphs.  Quadruples
    are canonicalized with the smaller outer endpoint first.
    """
    from .dsep_oracle import GraphTooLargeError

    if m.n > max_n:
        raise GraphTooLargeError(f"n={m.n} exceeds the enumeration cap of {max_n}")
    mg = m.graph
    found: set[tuple[int, int, int, int]] = set()

    def close_or_extend(x: int, path: list[int], members: frozenset[int]) -> None:
        head = path[-1]
        for v in mg.neighbors(head):
            if v in path:
                continue
            if any(mg.has_edge(v, p) for p in path[:-1]):
                continue  # chord: path would be covered
            marks = mg.marks(head, v)
            if marks == (_TAIL, _TAIL) and v in members:
                path.append(v)
                close_or_extend(x, path, members)
                path.pop()
            elif marks == (_ARROW, _TAIL) and len(path) >= 3:
                z, zp, y = path[1], head, v
                found.add((x, z, zp, y) if x < y else ((y, zp, z, x)))

    for x, z in m.directed_edges():
        if m.info.scc_size(z) >= 2:
            close_or_extend(x, [x, z], m.info.scc_of(z))
    return frozenset(found)


def _uncovered_tail_path_to(
    mg: MixedGraph, anc, z: int, w: int, targets: frozenset[int]
) -> bool:
    """True iff some uncovered path <b, .., w, z> exists with b in targets,
    every edge before w tail-marked at the vertex nearer b, and the final
    edge pointing from z into w.  Uncoveredness is global: each new vertex
    may be adjacent only to its predecessor among the path so far."""
    targets = frozenset(b for b in targets if anc[b, w])
    if not targets:
        return False
    path = [z, w]
    on_path = {z, w}

    def extend(head: int) -> bool:
        for v in mg.neighbors(head):
            if v in on_path:
                continue
            if mg.mark_at(v, head) is not _TAIL:
                continue
            if any(mg.has_edge(v, p) for p in path[:-1]):
                continue
            if v in targets:
                return True
            if not any(anc[b, v] for b in targets):
                continue  # no target could still reach the path through v
            path.append(v)
            on_path.add(v)
            if extend(v):
                return True
            path.pop()
            on_path.remove(v)
        return False

    return extend(w)


def build_cpag(g: DirectedGraph, scc_filter: bool = True) -> Cpag:
    """Construct the canonical partial ancestral graph of g.

    Two graphs are Markov equivalent exactly when their outputs here are
    equal.  ``scc_filter`` skips the pass-two path search at edges whose far
    endpoint sits in a trivial component; the restriction never changes the
    output and is on by default.
    """
    return build_cpag_timed(g, scc_filter=scc_filter)[0]


def build_cpag_timed(
    g: DirectedGraph, scc_filter: bool = True
) -> tuple[Cpag, dict[str, int]]:
    """As :func:`build_cpag`, also returning wall-clock nanoseconds spent in
    each construction stage (see ``STAGES``)."""
    times: dict[str, int] = {}
    tick = time.perf_counter_ns

    t0 = tick()
    info = compute_ancestry(g)
    times["ancestry"] = tick() - t0

    t0 = tick()
    cmarks = cmag_part1(g, info)
    times["cmag_part1"] = tick() - t0

    t0 = tick()
    underlines = cmag_part2(g, info, cmarks)
    edges = [(a, b, ma, mb) for (a, b), (ma, mb) in cmarks.items()]
    m = Cmag(MixedGraph(g.n, edges, underlines), info, g)
    times["cmag_part2"] = tick() - t0

    mg = m.graph
    anc = info.anc

    # Pass 1a: skeleton with all circles, then copy (virtual) v-structures.
    t0 = tick()
    pmarks: dict[tuple[int, int], tuple[EdgeMark, EdgeMark]] = {
        key: (_CIRCLE, _CIRCLE) for key in (k for k, _ in sorted(cmarks.items()))
    }
    provenance: dict[tuple[int, int], MarkOrigin] = {}
    for a, b in pmarks:
        provenance[(a, b)] = provenance[(b, a)] = MarkOrigin.SKELETON

    def copy_edge(u: int, v: int, origin: MarkOrigin) -> None:
        key = (min(u, v), max(u, v))
        pmarks[key] = cmarks[key]
        provenance[(u, v)] = provenance[(v, u)] = origin

    vstructs_by_pair: dict[tuple[int, int], list[int]] = defaultdict(list)
    for u in range(g.n):
        arrow_parents = m.parents_in_m(u)
        for i, a in enumerate(arrow_parents):
            for b in arrow_parents[i + 1 :]:
                if mg.has_edge(a, b):
                    continue
                pair = (min(a, b), max(a, b))
                if (pair[0], u, pair[1]) in underlines:
                    origin = MarkOrigin.VIRTUAL_V_STRUCTURE
                else:
                    origin = MarkOrigin.V_STRUCTURE
                    vstructs_by_pair[pair].append(u)
                copy_edge(a, u, origin)
                copy_edge(b, u, origin)
    times["cpag_init"] = tick() - t0

    # Pass 1b: invariant entry arcs of u-structures.
    t0 = tick()
    nbrs = [frozenset(mg.neighbors(v)) for v in range(g.n)]
    scc_parents = _scc_parent_map(m)
    for x, z in m.directed_edges():
        if info.scc_size(z) < 2:
            continue
        key = (min(x, z), max(x, z))
        if pmarks[key] != (_CIRCLE, _CIRCLE):
            continue
        cand = scc_parents[info.scc_id[z]] - nbrs[x] - nbrs[z] - {x, z}
        if cand and connected_in_subgraph(
            mg, (info.scc_of(z) - nbrs[x]) | {x, z} | cand, x, cand
        ):
            copy_edge(x, z, MarkOrigin.U_STRUCTURE)
    times["u_structures"] = tick() - t0

    # Pass 2: remaining invariant edges at virtual v-structures.
    t0 = tick()
    vvs_by_collider: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for x, z, y in underlines:
        vvs_by_collider[z].append((x, y))
    index = _vct_index(m, frozenset((x, y) for x, z, y in underlines))
    for z, outer_pairs in sorted(vvs_by_collider.items()):
        for w in mg.neighbors(z):
            key = (min(z, w), max(z, w))
            if pmarks[key] != (_CIRCLE, _CIRCLE):
                continue
            for x, y in outer_pairs:
                vcts = index.colliders(x, y)
                if w in vcts:
                    copy_edge(z, w, MarkOrigin.RULE4_ADJACENT)
                    break
                if scc_filter and info.scc_size(w) < 2:
                    continue
                if mg.mark_at(w, z) is not _ARROW:
                    continue  # pattern needs w <- z in the ancestral graph
                if any(anc[u, w] for u in vstructs_by_pair.get((x, y), ())):
                    continue
                targets = frozenset(
                    b for b in vcts if not anc[b, z] and b != w and b != z
                )
                if targets and _uncovered_tail_path_to(mg, anc, z, w, targets):
                    copy_edge(z, w, MarkOrigin.RULE4_PATH)
                    break
    times["cpag_part2"] = tick() - t0

    edges = [(a, b, ma, mb) for (a, b), (ma, mb) in pmarks.items()]
    cpag = Cpag(MixedGraph(g.n, edges, underlines), provenance)
    return cpag, times


def _v_structures(m: Cmag) -> frozenset[tuple[int, int, int]]:
    """Unshielded collider triples of m without underline, canonicalized."""
    out = set()
    for u in range(m.n):
        arrow_parents = m.parents_in_m(u)
        for i, a in enumerate(arrow_parents):
            for b in arrow_parents[i + 1 :]:
                if m.graph.has_edge(a, b):
                    continue
                triple = (min(a, b), u, max(a, b))
                if triple not in m.graph.underline_triples:
                    out.add(triple)
    return frozenset(out)


def cet_equivalent(m1: Cmag, m2: Cmag) -> bool:
    """Decide Markov equivalence directly between two ancestral graphs.

    Checks, in order: same skeleton; same v-structures and same virtual
    v-structures; same virtual collider triples; and for every virtual
    collider triple <a, b, c> and virtual v-structure <a, d, c> over the
    same outer pair, matching ancestry of b towards d in both graphs.
    """
    if m1.n != m2.n:
        raise ValueError(f"vertex counts differ: {m1.n} != {m2.n}")
    skel1 = {(a, b) for a, b, _, _ in m1.graph.edge_items()}
    skel2 = {(a, b) for a, b, _, _ in m2.graph.edge_items()}
    if skel1 != skel2:
        return False
    if _v_structures(m1) != _v_structures(m2):
        return False
    if m1.graph.underline_triples != m2.graph.underline_triples:
        return False
    index1 = virtual_collider_triples(m1)
    index2 = virtual_collider_triples(m2)
    if index1.triples() != index2.triples():
        return False
    vvs_colliders: dict[tuple[int, int], list[int]] = defaultdict(list)
    for x, z, y in m1.graph.underline_triples:
        vvs_colliders[(x, y)].append(z)
    for pair, ds in vvs_colliders.items():
        for b in index1.colliders(*pair):
            for d in ds:
                if bool(m1.info.anc[b, d]) != bool(m2.info.anc[b, d]):
                    return False
    return True
