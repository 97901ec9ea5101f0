"""Strongly connected components with ancestry tracking, subgraph
connectivity, and uncovered-subpath extraction.

The ancestor relation is reflexive: every vertex is an ancestor (and
descendant) of itself.  Ancestry is stored as a dense boolean matrix so
descendant checks are constant time.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .graph_core import DirectedGraph, EdgeMark, InvariantViolation, MixedGraph


@dataclass(frozen=True)
class AncestryInfo:
    """SCC partition plus reflexive ancestor matrix of a directed graph.

    ``anc[i, j]`` is True iff i is an ancestor of j.  ``scc_id`` maps each
    vertex to its component index; ``scc_members`` maps component index to
    the member set.  Component indices follow Tarjan emission order, so
    every component precedes the components that can reach it.
    """

    scc_id: tuple[int, ...]
    scc_members: tuple[frozenset[int], ...]
    anc: np.ndarray

    def is_ancestor(self, a: int, b: int) -> bool:
        return bool(self.anc[a, b])

    def scc_of(self, v: int) -> frozenset[int]:
        return self.scc_members[self.scc_id[v]]

    def scc_size(self, v: int) -> int:
        return len(self.scc_members[self.scc_id[v]])

    def same_scc(self, a: int, b: int) -> bool:
        return self.scc_id[a] == self.scc_id[b]

    def nontrivial_sccs(self) -> list[frozenset[int]]:
        return [s for s in self.scc_members if len(s) >= 2]


def compute_ancestry(g: DirectedGraph) -> AncestryInfo:
    """Tarjan's algorithm with ancestry tracked in the same pass.

    The SCC partition costs O(n + |E|); the ancestor matrix is accumulated
    per component in emission order (all components reachable from a
    component are emitted before it), costing at most O(n * |E| + n^2).
    """
    n = g.n
    scc_id = [-1] * n
    components: list[list[int]] = []
    index = [-1] * n
    lowlink = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    counter = 0

    # Iterative Tarjan: each frame is (vertex, index of next child to visit).
    for root in range(n):
        if index[root] != -1:
            continue
        frames = [(root, 0)]
        while frames:
            v, child_pos = frames.pop()
            if child_pos == 0:
                index[v] = lowlink[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            children = g.children(v)
            advanced = False
            for pos in range(child_pos, len(children)):
                w = children[pos]
                if index[w] == -1:
                    frames.append((v, pos + 1))
                    frames.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    lowlink[v] = min(lowlink[v], index[w])
            if advanced:
                continue
            if lowlink[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    scc_id[w] = len(components)
                    comp.append(w)
                    if w == v:
                        break
                components.append(comp)
            if frames:
                parent = frames[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])

    # Cross-component edges, grouped by source component.
    cross: list[list[int]] = [[] for _ in components]
    for i, j in g.edges:
        if scc_id[i] != scc_id[j]:
            cross[scc_id[i]].append(j)

    anc = np.zeros((n, n), dtype=bool)
    for cid, comp in enumerate(components):
        row = np.zeros(n, dtype=bool)
        row[comp] = True
        for target in cross[cid]:
            row |= anc[target]
        anc[comp] = row
    anc.setflags(write=False)

    return AncestryInfo(
        scc_id=tuple(scc_id),
        scc_members=tuple(frozenset(c) for c in components),
        anc=anc,
    )


def connected_in_subgraph(
    m: MixedGraph, allowed: Iterable[int], src: int, targets: Iterable[int]
) -> bool:
    """True iff some target is reachable from src along edges of m (marks
    ignored) whose endpoints both lie in ``allowed``."""
    allowed_set = set(allowed)
    target_set = set(targets)
    if src not in allowed_set:
        raise ValueError(f"source {src} not in the allowed vertex set")
    if not target_set <= allowed_set:
        raise ValueError("targets must be a subset of the allowed vertex set")
    if src in target_set:
        return True
    seen = {src}
    queue = deque([src])
    while queue:
        v = queue.popleft()
        for w in m.neighbors(v):
            if w in seen or w not in allowed_set:
                continue
            if w in target_set:
                return True
            seen.add(w)
            queue.append(w)
    return False


def uncovered_subpath(
    m: MixedGraph, path: Sequence[int], require_ancestral: bool = False
) -> tuple[int, ...]:
    """Shrink a path of m to a subsequence with the same endpoints that is
    uncovered (no two nonconsecutive vertices adjacent in m).

    Greedy: from the current vertex, jump to the farthest-along adjacent
    vertex of the path.  With ``require_ancestral`` the input must be an
    ancestral path (tail mark at each predecessor) and only tail-marked
    jumps are taken, so the output is an uncovered ancestral path.
    """
    path = tuple(path)
    if len(set(path)) != len(path):
        raise ValueError("path vertices must be distinct")
    for a, b in zip(path, path[1:]):
        if not m.has_edge(a, b):
            raise ValueError(f"({a}, {b}) is not an edge; input is not a path")
        if require_ancestral and m.mark_at(a, b) is not EdgeMark.TAIL:
            raise ValueError(f"edge ({a}, {b}) has no tail at {a}; path not ancestral")

    out = [path[0]]
    pos = 0
    while pos < len(path) - 1:
        cur = path[pos]
        nxt = pos + 1
        for later in range(len(path) - 1, pos + 1, -1):
            if m.has_edge(cur, path[later]) and (
                not require_ancestral or m.mark_at(cur, path[later]) is EdgeMark.TAIL
            ):
                nxt = later
                break
        out.append(path[nxt])
        pos = nxt

    # Guaranteed for plain greed; tail-restricted greed can only be covered
    # by a non-tail chord, which cannot occur in a well-formed ancestral graph.
    for i, a in enumerate(out):
        for b in out[i + 2 :]:
            if m.has_edge(a, b):
                raise InvariantViolation(
                    f"greedy subpath {out} still covered by chord ({a}, {b})"
                )
    return tuple(out)
