"""Markov equivalence for directed graphs with cycles.

Builds the maximal ancestral graph and a Markov-complete partial ancestral
graph of any directed graph, decides equivalence by comparing the results
(or directly via the ancestral equivalence test), and ships a brute-force
d-separation oracle, a seeded random cyclic graph generator, and a per-stage
benchmark harness.
"""

__version__ = "0.1.0"

from .bench_harness import (
    BenchRecord,
    derive_seed,
    emit_csv,
    fnv1a64,
    parse_csv,
    run_benchmark,
)
from .cmag_builder import Cmag, build_cmag, virtual_v_structures
from .cpag_builder import (
    Cpag,
    MarkOrigin,
    VctKind,
    VirtualColliderIndex,
    build_cpag,
    build_cpag_timed,
    cet_equivalent,
    edge_in_u_structure,
    find_u_structures,
    u_structure_candidates,
    virtual_collider_triples,
)
from .dsep_oracle import (
    GraphTooLargeError,
    MeConductorPair,
    TripleClass,
    TripleKind,
    classify_triple,
    d_connected,
    d_connected_paths,
    find_me_conductor_pairs,
    markov_equivalent_bruteforce,
    virtually_adjacent,
)
from .graph_core import (
    DirectedGraph,
    EdgeMark,
    GraphFormatError,
    InvariantViolation,
    MixedGraph,
    NodePermutation,
    apply_permutation,
    decode,
    decode_directed,
    decode_mixed,
    encode,
    pag_equal,
)
from .randgraph import GenParams, edge_budget, generate
from .reachability import (
    AncestryInfo,
    compute_ancestry,
    connected_in_subgraph,
    uncovered_subpath,
)

__all__ = [
    "AncestryInfo",
    "BenchRecord",
    "Cmag",
    "Cpag",
    "DirectedGraph",
    "EdgeMark",
    "GenParams",
    "GraphFormatError",
    "GraphTooLargeError",
    "InvariantViolation",
    "MarkOrigin",
    "MeConductorPair",
    "MixedGraph",
    "NodePermutation",
    "TripleClass",
    "TripleKind",
    "VctKind",
    "VirtualColliderIndex",
    "apply_permutation",
    "build_cmag",
    "build_cpag",
    "build_cpag_timed",
    "cet_equivalent",
    "classify_triple",
    "compute_ancestry",
    "connected_in_subgraph",
    "d_connected",
    "d_connected_paths",
    "decode",
    "decode_directed",
    "decode_mixed",
    "derive_seed",
    "edge_budget",
    "edge_in_u_structure",
    "emit_csv",
    "encode",
    "find_me_conductor_pairs",
    "find_u_structures",
    "fnv1a64",
    "generate",
    "markov_equivalent_bruteforce",
    "pag_equal",
    "parse_csv",
    "run_benchmark",
    "u_structure_candidates",
    "uncovered_subpath",
    "virtual_collider_triples",
    "virtual_v_structures",
    "virtually_adjacent",
]
