"""Core graph data model: directed graphs, mixed graphs with per-endpoint edge
marks, canonical text serialization, and node permutations.

Vertices are dense 0-based integers.  A mixed graph stores one mark per edge
endpoint, so one representation serves both ancestral-style graphs (tail and
arrow marks only) and partial ancestral graphs (circle marks allowed).  All
types are immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Union


class GraphFormatError(ValueError):
    """Raised when a graph file cannot be parsed."""


class InvariantViolation(RuntimeError):
    """Raised when an internal consistency check fails."""


class EdgeMark(Enum):
    """Mark at one endpoint of a mixed-graph edge.

    An undirected edge has TAIL at both ends, a directed arc i -> j has TAIL
    at i and ARROW at j, and CIRCLE means the mark is not determined.
    """

    TAIL = "t"
    ARROW = "a"
    CIRCLE = "o"

    def __repr__(self) -> str:
        return f"EdgeMark.{self.name}"


class DirectedGraph:
    """Immutable directed graph over vertices 0..n-1.

    Both (i, j) and (j, i) may be present simultaneously (a 2-cycle).
    Self-loops and duplicate arcs are rejected.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError(f"vertex count must be nonnegative, got {n}")
        edge_set = set()
        for i, j in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={n}")
            if i == j:
                raise ValueError(f"self-loop at vertex {i} not allowed")
            edge_set.add((int(i), int(j)))
        self.n = n
        self.edges = frozenset(edge_set)
        parents = [[] for _ in range(n)]
        children = [[] for _ in range(n)]
        for i, j in sorted(edge_set):
            children[i].append(j)
            parents[j].append(i)
        self._parents = tuple(tuple(p) for p in parents)
        self._children = tuple(tuple(c) for c in children)

    def parents(self, v: int) -> tuple[int, ...]:
        return self._parents[v]

    def children(self, v: int) -> tuple[int, ...]:
        return self._children[v]

    def has_edge(self, i: int, j: int) -> bool:
        return (i, j) in self.edges

    def adjacent(self, i: int, j: int) -> bool:
        """True if an edge runs between i and j in either direction."""
        return (i, j) in self.edges or (j, i) in self.edges

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"DirectedGraph(n={self.n}, edges={sorted(self.edges)})"


class MixedGraph:
    """Immutable graph with one mark per edge endpoint and optional
    dashed-underlined collider triples.

    Edges are given as (i, j, mark_at_i, mark_at_j) and stored canonically
    keyed by the unordered pair.  Underline triples <x, z, y> are stored with
    x < y; each must be a collider at z (arrow marks at z on both edges) with
    x and y nonadjacent.
    """

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[int, int, EdgeMark, EdgeMark]] = (),
        underline_triples: Iterable[tuple[int, int, int]] = (),
    ):
        if n < 0:
            raise ValueError(f"vertex count must be nonnegative, got {n}")
        self.n = n
        marks: dict[tuple[int, int], tuple[EdgeMark, EdgeMark]] = {}
        for i, j, mi, mj in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={n}")
            if i == j:
                raise ValueError(f"self-loop at vertex {i} not allowed")
            key, val = ((i, j), (mi, mj)) if i < j else ((j, i), (mj, mi))
            if key in marks and marks[key] != val:
                raise ValueError(f"conflicting marks for edge {key}")
            marks[key] = val
        self._marks = marks
        nbrs = [set() for _ in range(n)]
        for a, b in marks:
            nbrs[a].add(b)
            nbrs[b].add(a)
        self._nbrs = tuple(tuple(sorted(s)) for s in nbrs)
        triples = set()
        for x, z, y in underline_triples:
            if x > y:
                x, y = y, x
            if len({x, z, y}) != 3:
                raise ValueError(f"underline triple ({x}, {z}, {y}) not distinct")
            for outer in (x, y):
                if self.mark_at(z, outer) is not EdgeMark.ARROW:
                    raise ValueError(
                        f"underline triple ({x}, {z}, {y}) is not a collider at {z}"
                    )
            if self.has_edge(x, y):
                raise ValueError(f"underline triple ({x}, {z}, {y}) is shielded")
            triples.add((x, z, y))
        self.underline_triples = frozenset(triples)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._nbrs[v]

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self._marks

    def marks(self, u: int, v: int) -> tuple[EdgeMark, EdgeMark]:
        """Marks (at u, at v) of the edge between u and v."""
        key = (min(u, v), max(u, v))
        if key not in self._marks:
            raise ValueError(f"no edge between {u} and {v}")
        ma, mb = self._marks[key]
        return (ma, mb) if u < v else (mb, ma)

    def mark_at(self, u: int, v: int) -> EdgeMark:
        """Mark at u on the edge between u and v."""
        return self.marks(u, v)[0]

    def edge_items(self) -> list[tuple[int, int, EdgeMark, EdgeMark]]:
        """Edges as (i, j, mark_at_i, mark_at_j) with i < j, sorted."""
        return [(a, b, m[0], m[1]) for (a, b), m in sorted(self._marks.items())]

    @property
    def edge_count(self) -> int:
        return len(self._marks)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MixedGraph):
            return NotImplemented
        return (
            self.n == other.n
            and self._marks == other._marks
            and self.underline_triples == other.underline_triples
        )

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self._marks.items()), self.underline_triples))

    def __repr__(self) -> str:
        return f"MixedGraph(n={self.n}, edges={self.edge_items()})"


Graph = Union[DirectedGraph, MixedGraph]


@dataclass(frozen=True)
class NodePermutation:
    """Bijection on {0..n-1}; mapping[v] is the image of v."""

    mapping: tuple[int, ...]

    def __post_init__(self):
        n = len(self.mapping)
        if sorted(self.mapping) != list(range(n)):
            raise ValueError(f"not a bijection on 0..{n - 1}: {self.mapping}")

    @classmethod
    def identity(cls, n: int) -> "NodePermutation":
        return cls(tuple(range(n)))

    def __len__(self) -> int:
        return len(self.mapping)

    def __call__(self, v: int) -> int:
        return self.mapping[v]

    def inverse(self) -> "NodePermutation":
        inv = [0] * len(self.mapping)
        for v, w in enumerate(self.mapping):
            inv[w] = v
        return NodePermutation(tuple(inv))


def apply_permutation(g: Graph, p: NodePermutation) -> Graph:
    """Relabel the vertices of g through p, preserving marks and triples."""
    if len(p) != g.n:
        raise ValueError(f"permutation on {len(p)} vertices, graph has {g.n}")
    if isinstance(g, DirectedGraph):
        return DirectedGraph(g.n, ((p(i), p(j)) for i, j in g.edges))
    if isinstance(g, MixedGraph):
        edges = [(p(i), p(j), mi, mj) for i, j, mi, mj in g.edge_items()]
        triples = [(p(x), p(z), p(y)) for x, z, y in g.underline_triples]
        return MixedGraph(g.n, edges, triples)
    raise TypeError(f"cannot permute {type(g).__name__}")


def pag_equal(p1, p2) -> bool:
    """Structural equality of two mixed graphs: same vertex count, identical
    edge sets with identical endpoint marks, identical underline triples.

    Vertex labels are significant; no isomorphism search is performed.
    Accepts anything carrying a MixedGraph in a ``graph`` attribute.
    """
    return _as_mixed(p1) == _as_mixed(p2)


def _as_mixed(g) -> MixedGraph:
    if isinstance(g, MixedGraph):
        return g
    inner = getattr(g, "graph", None)
    if isinstance(inner, MixedGraph):
        return inner
    raise TypeError(f"expected a mixed graph, got {type(g).__name__}")


# --- canonical text serialization ---------------------------------------

_DIRECTED_MAGIC = "cdg 1"
_MIXED_MAGIC = "pag 1"
_MARK_BY_CHAR = {m.value: m for m in EdgeMark}


def encode(g: Graph, comments: Iterable[str] = ()) -> str:
    """Canonical text encoding of a graph.

    Edges and triples are emitted in sorted order, so byte equality of two
    encodings is equivalent to graph equality.  Optional comment lines are
    placed right after the magic line and are ignored by decode.
    """
    if isinstance(g, DirectedGraph):
        lines = [_DIRECTED_MAGIC]
        lines += [f"# {c}" for c in comments]
        lines.append(f"n {g.n}")
        lines += [f"e {i} {j}" for i, j in sorted(g.edges)]
    elif isinstance(g, MixedGraph):
        lines = [_MIXED_MAGIC]
        lines += [f"# {c}" for c in comments]
        lines.append(f"n {g.n}")
        lines += [
            f"e {i} {mi.value} {j} {mj.value}" for i, j, mi, mj in g.edge_items()
        ]
        lines += [f"u {x} {z} {y}" for x, z, y in sorted(g.underline_triples)]
    else:
        raise TypeError(f"cannot encode {type(g).__name__}")
    return "\n".join(lines) + "\n"


def decode(text: str) -> Graph:
    """Parse a graph from its text encoding, auto-detecting the kind.

    Rejects a bad magic line, out-of-range indices, duplicate edges and
    self-loops, each with an error naming the offending line.
    """
    kind = None
    n = None
    arcs: list[tuple[int, int]] = []
    arc_seen: set[tuple[int, int]] = set()
    medges: list[tuple[int, int, EdgeMark, EdgeMark]] = []
    medge_seen: set[tuple[int, int]] = set()
    triples: list[tuple[int, int, int]] = []
    triple_seen: set[tuple[int, int, int]] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if kind is None:
            if line == _DIRECTED_MAGIC:
                kind = "cdg"
            elif line == _MIXED_MAGIC:
                kind = "pag"
            else:
                raise GraphFormatError(
                    f"line {lineno}: expected magic '{_DIRECTED_MAGIC}' or "
                    f"'{_MIXED_MAGIC}', got {line!r}"
                )
            continue
        fields = line.split()
        tag = fields[0]
        if tag == "n":
            if n is not None:
                raise GraphFormatError(f"line {lineno}: duplicate 'n' line")
            n = _parse_int(fields, 1, lineno, line, minimum=0)
            continue
        if n is None:
            raise GraphFormatError(f"line {lineno}: '{tag}' line before 'n' line")
        if tag == "e" and kind == "cdg":
            if len(fields) != 3:
                raise GraphFormatError(f"line {lineno}: malformed edge line {line!r}")
            i = _parse_vertex(fields, 1, n, lineno, line)
            j = _parse_vertex(fields, 2, n, lineno, line)
            if i == j:
                raise GraphFormatError(f"line {lineno}: self-loop in {line!r}")
            if (i, j) in arc_seen:
                raise GraphFormatError(f"line {lineno}: duplicate edge in {line!r}")
            arc_seen.add((i, j))
            arcs.append((i, j))
        elif tag == "e" and kind == "pag":
            if len(fields) != 5:
                raise GraphFormatError(f"line {lineno}: malformed edge line {line!r}")
            i = _parse_vertex(fields, 1, n, lineno, line)
            j = _parse_vertex(fields, 3, n, lineno, line)
            mi = _parse_mark(fields, 2, lineno, line)
            mj = _parse_mark(fields, 4, lineno, line)
            if i == j:
                raise GraphFormatError(f"line {lineno}: self-loop in {line!r}")
            key = (min(i, j), max(i, j))
            if key in medge_seen:
                raise GraphFormatError(f"line {lineno}: duplicate edge in {line!r}")
            medge_seen.add(key)
            medges.append((i, j, mi, mj))
        elif tag == "u" and kind == "pag":
            if len(fields) != 4:
                raise GraphFormatError(f"line {lineno}: malformed triple line {line!r}")
            x = _parse_vertex(fields, 1, n, lineno, line)
            z = _parse_vertex(fields, 2, n, lineno, line)
            y = _parse_vertex(fields, 3, n, lineno, line)
            key = (min(x, y), z, max(x, y))
            if key in triple_seen:
                raise GraphFormatError(f"line {lineno}: duplicate triple in {line!r}")
            triple_seen.add(key)
            triples.append((x, z, y))
        else:
            raise GraphFormatError(f"line {lineno}: unknown directive {line!r}")

    if kind is None:
        raise GraphFormatError("empty input: missing magic line")
    if n is None:
        raise GraphFormatError("missing 'n' line")
    if kind == "cdg":
        return DirectedGraph(n, arcs)
    try:
        return MixedGraph(n, medges, triples)
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from exc


def decode_directed(text: str) -> DirectedGraph:
    g = decode(text)
    if not isinstance(g, DirectedGraph):
        raise GraphFormatError("expected a directed graph ('cdg 1') file")
    return g


def decode_mixed(text: str) -> MixedGraph:
    g = decode(text)
    if not isinstance(g, MixedGraph):
        raise GraphFormatError("expected a mixed graph ('pag 1') file")
    return g


def _parse_int(fields, idx, lineno, line, minimum=None):
    try:
        value = int(fields[idx])
    except (IndexError, ValueError):
        raise GraphFormatError(f"line {lineno}: malformed line {line!r}") from None
    if minimum is not None and value < minimum:
        raise GraphFormatError(f"line {lineno}: value out of range in {line!r}")
    return value

def _parse_vertex(fields, idx, n, lineno, line):
    v = _parse_int(fields, idx, lineno, line)
    if not 0 <= v < n:
        raise GraphFormatError(
            f"line {lineno}: vertex {v} out of range for n={n} in {line!r}"
        )
    return v

def _parse_mark(fields, idx, lineno, line):
    mark = _MARK_BY_CHAR.get(fields[idx])
    if mark is None:
        raise GraphFormatError(f"line {lineno}: unknown mark {fields[idx]!r} in {line!r}")
    return mark
