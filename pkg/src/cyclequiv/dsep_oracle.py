"""Ground-truth d-separation machinery for directed graphs with cycles.

Provides connection tests (a fast edge-state reachability version and an
exhaustive simple-path version), brute-force Markov equivalence over all
conditioning sets, and definitional classifiers for triples and
mutually-exclusive-conductor patterns.  Everything here is verification
machinery for small graphs; nothing sits on the construction hot path.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple, Optional

import numpy as np

from .graph_core import DirectedGraph
from .reachability import AncestryInfo, compute_ancestry


class GraphTooLargeError(ValueError):
    """Raised when an exhaustive operation is asked to run above its cap."""


class TripleKind(Enum):
    NOT_ITINERARY = "not_itinerary"
    CONDUCTOR = "conductor"
    PERFECT_NONCONDUCTOR = "perfect_nonconductor"
    IMPERFECT_NONCONDUCTOR = "imperfect_nonconductor"


@dataclass(frozen=True)
class TripleClass:
    """Classification of an ordered triple; ``shielded`` is meaningful only
    when the triple is an itinerary (kind != NOT_ITINERARY)."""

    kind: TripleKind
    shielded: bool


class MeConductorPair(NamedTuple):
    """Two end triples of an uncovered itinerary whose interior vertices are
    mutual ancestors but not ancestors of the endpoints."""

    first: tuple[int, int, int]
    last: tuple[int, int, int]
    itinerary: tuple[int, ...]


def _validate_query(g: DirectedGraph, x: int, y: int, z: frozenset[int]) -> None:
    if x == y:
        raise ValueError("endpoints must be distinct")
    if x in z or y in z:
        raise ValueError("conditioning set must not contain the endpoints")
    for v in (x, y, *z):
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range for n={g.n}")


def _open_colliders(info: AncestryInfo, z: frozenset[int], n: int) -> np.ndarray:
    """Boolean vector: v may act as an open collider, i.e. v is an ancestor
    of some member of z (reflexive, so every v in z qualifies)."""
    if not z:
        return np.zeros(n, dtype=bool)
    return info.anc[:, sorted(z)].any(axis=1)


def _reach(g: DirectedGraph, z, open_arr, x: int, y: int) -> bool:
    """Walk-based d-connection: BFS over (vertex, arrival-orientation)
    states.  Arrival 'head' means the previous edge points into the vertex;
    leaving against an arrow is allowed at open colliders only."""
    seen_head = bytearray(g.n)
    seen_tail = bytearray(g.n)
    queue = deque()
    for w in g.children(x):
        seen_head[w] = 1
        queue.append((w, True))
    for u in g.parents(x):
        if not seen_tail[u]:
            seen_tail[u] = 1
            queue.append((u, False))
    while queue:
        v, head = queue.popleft()
        if v == y:
            return True
        if v not in z:
            # v is a noncollider for any continuation through a tail at v,
            # and for head-out arrivals continuing against an arrow.
            for w in g.children(v):
                if not seen_head[w]:
                    seen_head[w] = 1
                    queue.append((w, True))
            if not head:
                for u in g.parents(v):
                    if not seen_tail[u]:
                        seen_tail[u] = 1
                        queue.append((u, False))
        if head and open_arr[v]:
            for u in g.parents(v):
                if not seen_tail[u]:
                    seen_tail[u] = 1
                    queue.append((u, False))
    return False


def d_connected(
    g: DirectedGraph,
    x: int,
    y: int,
    z: Iterable[int] = (),
    info: Optional[AncestryInfo] = None,
) -> bool:
    """True iff x and y are d-connected given z.

    A connecting path needs every noncollider outside z and every collider
    an ancestor of z.  Computed by edge-state reachability (walk semantics);
    agreement with exhaustive simple-path evaluation is enforced by tests.
    """
    z_set = frozenset(z)
    _validate_query(g, x, y, z_set)
    if info is None:
        info = compute_ancestry(g)
    return _reach(g, z_set, _open_colliders(info, z_set, g.n), x, y)


def d_connected_paths(
    g: DirectedGraph,
    x: int,
    y: int,
    z: Iterable[int] = (),
    info: Optional[AncestryInfo] = None,
) -> bool:
    """d-connection by exhaustive enumeration of simple paths.

    Every vertex occurs at most once on a path; between adjacent vertices
    each available edge orientation (both, for a 2-cycle) is tried.  This is
    the literal path-based criterion and the oracle for ``d_connected``.
    Exponential; intended for small graphs only.
    """
    z_set = frozenset(z)
    _validate_query(g, x, y, z_set)
    if info is None:
        info = compute_ancestry(g)
    open_arr = _open_colliders(info, z_set, g.n)
    visited = bytearray(g.n)
    visited[x] = 1

    def extend(v: int, head: bool) -> bool:
        if v == y:
            return True
        if v not in z_set:
            for w in g.children(v):
                if not visited[w]:
                    visited[w] = 1
                    if extend(w, True):
                        return True
                    visited[w] = 0
        # Continue against an arrow into v: collider iff we arrived via one.
        if open_arr[v] if head else v not in z_set:
            for u in g.parents(v):
                if not visited[u]:
                    visited[u] = 1
                    if extend(u, False):
                        return True
                    visited[u] = 0
        return False

    for w in g.children(x):
        visited[w] = 1
        if extend(w, True):
            return True
        visited[w] = 0
    for u in g.parents(x):
        visited[u] = 1
        if extend(u, False):
            return True
        visited[u] = 0
    return False


def markov_equivalent_bruteforce(
    g1: DirectedGraph, g2: DirectedGraph, max_n: int = 12
) -> bool:
    """True iff g1 and g2 agree on d-connection for every vertex pair and
    every conditioning subset.

    Costs Theta(n^2 * 2^n) separation queries, so graphs above ``max_n``
    vertices are refused.  Subsets are visited in Gray-code order so the
    open-collider vector is updated incrementally.
    """
    if g1.n != g2.n:
        raise ValueError(f"vertex counts differ: {g1.n} != {g2.n}")
    n = g1.n
    if n > max_n:
        raise GraphTooLargeError(
            f"n={n} exceeds the brute-force cap of {max_n} vertices"
        )
    info1 = compute_ancestry(g1)
    info2 = compute_ancestry(g2)
    anc1 = info1.anc.astype(np.int32)
    anc2 = info2.anc.astype(np.int32)
    for x in range(n):
        for y in range(x + 1, n):
            rest = [v for v in range(n) if v != x and v != y]
            cnt1 = np.zeros(n, dtype=np.int32)
            cnt2 = np.zeros(n, dtype=np.int32)
            z: set[int] = set()
            for k in range(1 << len(rest)):
                if k:
                    bit = (k & -k).bit_length() - 1
                    v = rest[bit]
                    if v in z:
                        z.remove(v)
                        cnt1 -= anc1[:, v]
                        cnt2 -= anc2[:, v]
                    else:
                        z.add(v)
                        cnt1 += anc1[:, v]
                        cnt2 += anc2[:, v]
                if _reach(g1, z, cnt1 > 0, x, y) != _reach(g2, z, cnt2 > 0, x, y):
                    return False
    return True


def virtually_adjacent(
    g: DirectedGraph, a: int, b: int, info: Optional[AncestryInfo] = None
) -> bool:
    """True iff a and b are nonadjacent but share a child that is an
    ancestor of a or of b.  Such pairs cannot be d-separated by any set."""
    if a == b:
        raise ValueError("vertices must be distinct")
    if g.adjacent(a, b):
        return False
    if info is None:
        info = compute_ancestry(g)
    common = set(g.children(a)) & set(g.children(b))
    return any(info.anc[c, a] or info.anc[c, b] for c in common)


def adjacent_or_virtually(
    g: DirectedGraph, a: int, b: int, info: AncestryInfo
) -> bool:
    return g.adjacent(a, b) or virtually_adjacent(g, a, b, info)


def classify_triple(
    g: DirectedGraph, a: int, b: int, c: int, info: Optional[AncestryInfo] = None
) -> TripleClass:
    """Classify the ordered triple <a, b, c>.

    The triple is an itinerary when both (a, b) and (b, c) are adjacent or
    virtually adjacent; then b's ancestry decides conductor versus
    nonconductor, and descendance from a common child of a and c (reflexive,
    so b itself being a common child counts) decides perfect versus
    imperfect.  Shielding also treats virtual adjacency as adjacency.
    """
    if len({a, b, c}) != 3:
        raise ValueError("triple vertices must be distinct")
    if info is None:
        info = compute_ancestry(g)
    if not (
        adjacent_or_virtually(g, a, b, info) and adjacent_or_virtually(g, b, c, info)
    ):
        return TripleClass(TripleKind.NOT_ITINERARY, False)
    shielded = adjacent_or_virtually(g, a, c, info)
    if info.anc[b, a] or info.anc[b, c]:
        return TripleClass(TripleKind.CONDUCTOR, shielded)
    common = set(g.children(a)) & set(g.children(c))
    if any(info.anc[d, b] for d in common):
        return TripleClass(TripleKind.PERFECT_NONCONDUCTOR, shielded)
    return TripleClass(TripleKind.IMPERFECT_NONCONDUCTOR, shielded)


def find_me_conductor_pairs(
    g: DirectedGraph, info: Optional[AncestryInfo] = None, max_n: int = 12
) -> frozenset[MeConductorPair]:
    """Exhaustively find all pairs of mutually exclusive conductors.

    Searches every uncovered itinerary <X0, .., Xn+1> whose interior
    vertices lie in one strongly connected component (hence are mutual
    ancestors) and are ancestors of neither endpoint; the two end triples
    of each such itinerary form a pair.  Itineraries are canonicalized with
    the smaller endpoint first.
    """
    if g.n > max_n:
        raise GraphTooLargeError(
            f"n={g.n} exceeds the exhaustive-search cap of {max_n} vertices"
        )
    if info is None:
        info = compute_ancestry(g)
    n = g.n
    anc = info.anc
    link = np.zeros((n, n), dtype=bool)
    for a in range(n):
        for b in range(a + 1, n):
            if adjacent_or_virtually(g, a, b, info):
                link[a, b] = link[b, a] = True

    results: set[MeConductorPair] = set()

    def record(itin: tuple[int, ...]) -> None:
        if itin[0] > itin[-1]:
            itin = itin[::-1]
        results.add(
            MeConductorPair(first=itin[:3], last=itin[-3:], itinerary=itin)
        )

    def extend(seq: list[int]) -> None:
        cur = seq[-1]
        interior_scc = info.scc_id[seq[1]]
        for w in range(n):
            if not link[cur, w] or w in seq:
                continue
            if any(link[w, v] for v in seq[:-1]):
                continue  # chord: itinerary would be covered
            if len(seq) >= 3 and all(not anc[v, w] for v in seq[1:]):
                record(tuple(seq) + (w,))
            if info.scc_id[w] == interior_scc and not anc[w, seq[0]]:
                seq.append(w)
                extend(seq)
                seq.pop()

    for x0 in range(n):
        for x1 in range(n):
            if link[x0, x1] and not anc[x1, x0] and info.scc_size(x1) >= 2:
                extend([x0, x1])
    return frozenset(results)
