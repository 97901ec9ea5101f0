"""Shared test helpers: independent oracles and small-graph samplers.

Everything here is deliberately written against the definitions rather than
reusing library code paths, so tests stay dual-route: the production
implementation on one side, a brute-force or textbook method on the other.
"""

from __future__ import annotations

import itertools
import random
from collections import deque

import numpy as np

from cyclequiv import DirectedGraph, EdgeMark, MixedGraph, d_connected
from cyclequiv.randgraph import GenParams, generate


def er_digraph(rand: random.Random, n: int, p: float) -> DirectedGraph:
    """Each ordered pair becomes an arc independently with probability p."""
    return DirectedGraph(
        n, [(i, j) for i in range(n) for j in range(n) if i != j and rand.random() < p]
    )


def random_dag(rand: random.Random, n: int, p: float) -> DirectedGraph:
    return DirectedGraph(
        n, [(i, j) for i in range(n) for j in range(i + 1, n) if rand.random() < p]
    )


def mutate(rand: random.Random, g: DirectedGraph) -> DirectedGraph:
    """Flip, delete, or insert one arc; used to breed near-equivalent pairs."""
    edges = set(g.edges)
    move = rand.randrange(3)
    if move < 2 and edges:
        i, j = rand.choice(sorted(edges))
        edges.discard((i, j))
        if move == 0:
            edges.add((j, i))
    else:
        free = [
            (i, j)
            for i in range(g.n)
            for j in range(g.n)
            if i != j and (i, j) not in edges
        ]
        if free:
            edges.add(rand.choice(free))
    return DirectedGraph(g.n, edges)


def generated_graph(rand: random.Random, n: int, d: float | None = None) -> DirectedGraph:
    """A graph from the production generator with randomized settings."""
    mixes = [(0.1, 0.82, 0.08), (0.3, 0.5, 0.2), (0.0, 1.0, 0.0), (0.2, 0.3, 0.5), (0.0, 0.0, 1.0)]
    if d is None:
        d = rand.uniform(1.0, min(3.0, n - 1))
    p_two, p_acy, p_cyc = rand.choice(mixes)
    params = GenParams(
        n=n,
        d=d,
        p_two=p_two,
        p_acy=p_acy,
        p_cyc=p_cyc,
        seed=rand.getrandbits(63),
        convention=rand.choice(("literal", "half")),
    )
    return generate(params)


def all_subsets(pool):
    for r in range(len(pool) + 1):
        yield from itertools.combinations(pool, r)


def separable(g: DirectedGraph, x: int, y: int, info=None) -> bool:
    """True iff some conditioning subset d-separates x from y."""
    rest = [v for v in range(g.n) if v not in (x, y)]
    return any(not d_connected(g, x, y, z, info) for z in all_subsets(rest))


def bfs_closure(g: DirectedGraph) -> np.ndarray:
    """Reflexive-transitive closure by one breadth-first search per vertex."""
    out = np.zeros((g.n, g.n), dtype=bool)
    for s in range(g.n):
        out[s, s] = True
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in g.children(v):
                if not out[s, w]:
                    out[s, w] = True
                    queue.append(w)
    return out


def squaring_closure(g: DirectedGraph) -> np.ndarray:
    """Reflexive-transitive closure by repeated boolean matrix squaring."""
    a = np.eye(g.n, dtype=bool)
    for i, j in g.edges:
        a[i, j] = True
    while True:
        b = a | (a @ a)
        if (b == a).all():
            return a
        a = b


def dag_d_separated_moral(g: DirectedGraph, x: int, y: int, z) -> bool:
    """Textbook d-separation for acyclic graphs: moralize the ancestral
    subgraph of {x, y} | z, drop z, and test undirected connectivity."""
    z = set(z)
    relevant = set()
    queue = deque({x, y} | z)
    while queue:
        v = queue.popleft()
        if v in relevant:
            continue
        relevant.add(v)
        queue.extend(g.parents(v))
    und: dict[int, set[int]] = {v: set() for v in relevant}
    for i, j in g.edges:
        if i in relevant and j in relevant:
            und[i].add(j)
            und[j].add(i)
    for v in relevant:
        for p1, p2 in itertools.combinations(g.parents(v), 2):
            und[p1].add(p2)
            und[p2].add(p1)
    seen = {x}
    queue = deque([x])
    while queue:
        v = queue.popleft()
        for w in und[v]:
            if w == y:
                return False
            if w not in seen and w not in z:
                seen.add(w)
                queue.append(w)
    return True


def is_uncovered(m: MixedGraph, seq) -> bool:
    """Definitional check: consecutive vertices adjacent, no other pair."""
    seq = list(seq)
    for a, b in zip(seq, seq[1:]):
        if not m.has_edge(a, b):
            return False
    for i, a in enumerate(seq):
        for b in seq[i + 2 :]:
            if m.has_edge(a, b):
                return False
    return True


def subgraph_connected_paths(m: MixedGraph, allowed, src, targets) -> bool:
    """Oracle for connected_in_subgraph: enumerate simple paths."""
    allowed = set(allowed)
    targets = set(targets)

    def dfs(v, seen) -> bool:
        if v in targets:
            return True
        for w in m.neighbors(v):
            if w in allowed and w not in seen:
                if dfs(w, seen | {w}):
                    return True
        return False

    return dfs(src, {src})


def cmag_tail_reachability(mixed: MixedGraph) -> np.ndarray:
    """Ancestral reachability inside a tail/arrow mixed graph: walks that
    leave every vertex through a tail mark."""
    n = mixed.n
    out = np.zeros((n, n), dtype=bool)
    for s in range(n):
        out[s, s] = True
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in mixed.neighbors(v):
                if mixed.mark_at(v, w) is EdgeMark.TAIL and not out[s, w]:
                    out[s, w] = True
                    queue.append(w)
    return out
