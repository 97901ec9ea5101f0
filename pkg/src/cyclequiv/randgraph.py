"""Seeded random generator for directed graphs with controllable cycle
structure.

Three stages split an edge budget E: a fraction p_two goes into two-cycles
(each consuming two arcs), p_acy into arcs from lower to higher vertex
numbers, and p_cyc into fully random arcs; a random relabeling of the
vertices is applied last.  With (p_two, p_acy, p_cyc) = (0, 1, 0) the output
is acyclic.

Reproducibility contract: the pseudorandom stream is numpy's Philox 4x64
counter-based generator keyed with the seed.  Draws happen in a fixed,
documented order so identical parameters give identical graphs:

* stage 1 repeats [i = integers(n), j = integers(n)], rejecting i == j and
  already-chosen unordered pairs, until the two-cycle count is reached;
* stage 2 draws [i = integers(n - 1), j = integers(i + 1, n)] and rejects
  arcs already present (the source is uniform, so arcs concentrate among
  high-numbered vertices; this reproduces the published component-size
  statistics, which uniform pair sampling does not);
* stage 3 draws [i, j] as in stage 1, rejecting self-loops and arcs already
  present, keeping the drawn orientation;
* the final relabeling is a Fisher-Yates shuffle of range(n) drawing
  j = integers(i + 1) for i = n-1 .. 1.

Counts are rounded as floor(x + 0.5).  Stage budgets never borrow from each
other; stage 3 receives the exact remainder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph_core import DirectedGraph, NodePermutation, apply_permutation

PRNG_NAME = "philox4x64"
_CONVENTIONS = ("literal", "half")


@dataclass(frozen=True)
class GenParams:
    """Parameters of the three-stage generator.

    ``d`` is the target density; the edge budget is round(n * d) under the
    default "literal" convention and round(n * d / 2) under "half".
    """

    n: int
    d: float
    p_two: float
    p_acy: float
    p_cyc: float
    seed: int
    convention: str = "literal"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if self.d < 0:
            raise ValueError(f"d must be nonnegative, got {self.d}")
        for name in ("p_two", "p_acy", "p_cyc"):
            frac = getattr(self, name)
            if not 0.0 <= frac <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {frac}")
        total = self.p_two + self.p_acy + self.p_cyc
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"stage fractions must sum to 1, got {total}")
        if self.convention not in _CONVENTIONS:
            raise ValueError(f"convention must be one of {_CONVENTIONS}")


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def edge_budget(params: GenParams) -> int:
    scale = params.n * params.d
    return _round_half_up(scale if params.convention == "literal" else scale / 2)


def stage_counts(params: GenParams) -> tuple[int, int, int]:
    """(two-cycle pairs, acyclic arcs, random arcs); arcs total the budget."""
    budget = edge_budget(params)
    k_two = min(_round_half_up(params.p_two * budget / 2), budget // 2)
    k_acy = min(_round_half_up(params.p_acy * budget), budget - 2 * k_two)
    k_cyc = budget - 2 * k_two - k_acy
    return k_two, k_acy, k_cyc


def generate(params: GenParams) -> DirectedGraph:
    """Generate a directed graph from the three-stage process above."""
    n = params.n
    k_two, k_acy, k_cyc = stage_counts(params)
    unordered_slots = n * (n - 1) // 2
    if k_two > unordered_slots:
        raise ValueError(
            f"two-cycle budget {k_two} exceeds {unordered_slots} vertex pairs"
        )
    if k_acy > unordered_slots - k_two:
        raise ValueError(
            f"acyclic budget {k_acy} exceeds {unordered_slots - k_two} free pairs"
        )
    if k_cyc > n * (n - 1) - 2 * k_two - k_acy:
        raise ValueError(f"random-arc budget {k_cyc} exceeds the free arc slots")

    rng = np.random.Generator(np.random.Philox(key=params.seed))

    def draw_pair() -> tuple[int, int]:
        return int(rng.integers(n)), int(rng.integers(n))

    edges: set[tuple[int, int]] = set()
    pairs: set[tuple[int, int]] = set()
    while len(pairs) < k_two:
        i, j = draw_pair()
        if i == j:
            continue
        pair = (min(i, j), max(i, j))
        if pair in pairs:
            continue
        pairs.add(pair)
        edges.add((pair[0], pair[1]))
        edges.add((pair[1], pair[0]))

    added = 0
    while added < k_acy:
        i = int(rng.integers(n - 1))
        j = int(rng.integers(i + 1, n))
        if (i, j) in edges:
            continue
        edges.add((i, j))
        added += 1

    added = 0
    while added < k_cyc:
        i, j = draw_pair()
        if i == j or (i, j) in edges:
            continue
        edges.add((i, j))
        added += 1

    perm = list(range(n))
    for i in range(n - 1, 0, -1):
        j = int(rng.integers(i + 1))
        perm[i], perm[j] = perm[j], perm[i]

    graph = DirectedGraph(n, edges)
    return apply_permutation(graph, NodePermutation(tuple(perm)))
