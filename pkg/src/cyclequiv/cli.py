"""Command-line interface.

Exit codes: 0 success (or "equivalent" for the comparison commands),
1 not equivalent, 2 usage or input error, 3 internal invariant violation.
Primary results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import __version__
from .bench_harness import emit_csv, max_workers_from_env, run_benchmark
from .cmag_builder import build_cmag
from .cpag_builder import build_cpag, cet_equivalent, find_u_structures
from .dsep_oracle import (
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
    GraphFormatError,
    InvariantViolation,
    decode_directed,
    encode,
    pag_equal,
)
from .randgraph import PRNG_NAME, GenParams, generate
from .reachability import compute_ancestry

EXIT_OK = 0
EXIT_NOT_EQUIVALENT = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclequiv",
        description="Markov equivalence tools for directed graphs with cycles",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a random cyclic graph")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--d", type=float, required=True)
    gen.add_argument("--ptwo", type=float, required=True)
    gen.add_argument("--pacy", type=float, required=True)
    gen.add_argument("--pcyc", type=float, required=True)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--convention", choices=("literal", "half"), default="literal")
    gen.add_argument("--out", required=True)

    for name, help_text in (
        ("cmag", "write the maximal ancestral graph of a directed graph"),
        ("cpag", "write the partial ancestral graph of a directed graph"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--in", dest="in_file", required=True)
        p.add_argument("--out", required=True)

    for name, help_text in (
        ("equiv", "decide equivalence by comparing constructed PAGs"),
        ("cet", "decide equivalence by the direct ancestral-graph test"),
        ("oracle", "decide equivalence by brute-force separation checks"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--g1", required=True)
        p.add_argument("--g2", required=True)
        if name == "oracle":
            p.add_argument("--max-n", type=int, default=12)

    classify = sub.add_parser(
        "classify", help="dump virtual adjacencies, triple classes and patterns"
    )
    classify.add_argument("--in", dest="in_file", required=True)
    classify.add_argument("--max-n", type=int, default=12)

    bench = sub.add_parser("bench", help="run the per-stage scaling benchmark")
    bench.add_argument("--sizes", required=True, help="comma-separated vertex counts")
    bench.add_argument("--densities", required=True, help="comma-separated densities")
    bench.add_argument("--reps", type=int, required=True)
    bench.add_argument("--seed", type=int, required=True)
    bench.add_argument("--csv", required=True)
    bench.add_argument("--ptwo", type=float, default=0.1)
    bench.add_argument("--pacy", type=float, default=0.82)
    bench.add_argument("--pcyc", type=float, default=0.08)
    bench.add_argument("--convention", choices=("literal", "half"), default="literal")
    bench.add_argument("--workers", type=int, default=None)

    selftest = sub.add_parser(
        "selftest", help="cross-check equiv, cet and oracle on small random graphs"
    )
    selftest.add_argument("--cases", type=int, default=60)
    selftest.add_argument("--seed", type=int, default=0)

    return parser


def _read_directed(path: str) -> DirectedGraph:
    return decode_directed(Path(path).read_text(encoding="utf-8"))


def _cmd_gen(args) -> int:
    params = GenParams(
        n=args.n, d=args.d, p_two=args.ptwo, p_acy=args.pacy, p_cyc=args.pcyc,
        seed=args.seed, convention=args.convention,
    )
    g = generate(params)
    comments = (
        f"generator: prng={PRNG_NAME} seed={params.seed}",
        f"params: n={params.n} d={params.d} p_two={params.p_two}"
        f" p_acy={params.p_acy} p_cyc={params.p_cyc} convention={params.convention}",
    )
    Path(args.out).write_text(encode(g, comments), encoding="utf-8")
    return EXIT_OK


def _cmd_cmag(args) -> int:
    m = build_cmag(_read_directed(args.in_file))
    Path(args.out).write_text(encode(m.graph), encoding="utf-8")
    return EXIT_OK


def _cmd_cpag(args) -> int:
    p = build_cpag(_read_directed(args.in_file))
    Path(args.out).write_text(encode(p.graph), encoding="utf-8")
    return EXIT_OK


def _verdict(equivalent: bool) -> int:
    print("EQUIVALENT" if equivalent else "NOT EQUIVALENT")
    return EXIT_OK if equivalent else EXIT_NOT_EQUIVALENT


def _cmd_equiv(args) -> int:
    g1, g2 = _read_directed(args.g1), _read_directed(args.g2)
    if g1.n != g2.n:
        raise ValueError(f"vertex counts differ: {g1.n} != {g2.n}")
    return _verdict(pag_equal(build_cpag(g1), build_cpag(g2)))


def _cmd_cet(args) -> int:
    g1, g2 = _read_directed(args.g1), _read_directed(args.g2)
    return _verdict(cet_equivalent(build_cmag(g1), build_cmag(g2)))


def _cmd_oracle(args) -> int:
    g1, g2 = _read_directed(args.g1), _read_directed(args.g2)
    return _verdict(markov_equivalent_bruteforce(g1, g2, max_n=args.max_n))


def _cmd_classify(args) -> int:
    g = _read_directed(args.in_file)
    info = compute_ancestry(g)
    m = build_cmag(g, info)

    print(f"graph: n={g.n} edges={len(g.edges)}")
    sccs = sorted(
        (sorted(s) for s in info.nontrivial_sccs()), key=lambda s: (len(s), s)
    )
    print(f"nontrivial sccs: {len(sccs)}")
    for members in sccs:
        print("  {" + " ".join(map(str, members)) + "}")

    print("virtual adjacencies:")
    for a in range(g.n):
        for b in range(a + 1, g.n):
            if virtually_adjacent(g, a, b, info):
                print(f"  {a} ~ {b}")

    print("triple classes:")
    for b in range(g.n):
        for a in range(g.n):
            for c in range(a + 1, g.n):
                if b in (a, c):
                    continue
                t = classify_triple(g, a, b, c, info)
                if t.kind is TripleKind.NOT_ITINERARY:
                    continue
                shield = "shielded" if t.shielded else "unshielded"
                print(f"  <{a},{b},{c}> {t.kind.value} {shield}")

    print("u-structures:")
    for x, z, zp, y in sorted(find_u_structures(m, max_n=args.max_n)):
        print(f"  <{x},{z},{zp},{y}>")

    print("m.e. conductor pairs:")
    for pair in sorted(find_me_conductor_pairs(g, info, max_n=args.max_n)):
        itin = ",".join(map(str, pair.itinerary))
        print(
            f"  <{pair.first[0]},{pair.first[1]},{pair.first[2]}>"
            f" <{pair.last[0]},{pair.last[1]},{pair.last[2]}>"
            f" on <{itin}>"
        )
    return EXIT_OK


def _cmd_bench(args) -> int:
    sizes = [int(v) for v in args.sizes.split(",") if v]
    densities = [float(v) for v in args.densities.split(",") if v]
    workers = args.workers if args.workers is not None else max_workers_from_env()
    records = run_benchmark(
        sizes,
        densities,
        reps=args.reps,
        base_seed=args.seed,
        mix=(args.ptwo, args.pacy, args.pcyc),
        convention=args.convention,
        workers=workers,
    )
    Path(args.csv).write_text(emit_csv(records), encoding="utf-8")
    print(f"wrote {len(records)} records to {args.csv}")
    return EXIT_OK


def _cmd_selftest(args) -> int:
    rand = random.Random(args.seed)
    mismatches = 0
    for case in range(args.cases):
        n = rand.randint(3, 6)
        g1 = _random_digraph(rand, n)
        g2 = _random_digraph(rand, n) if case % 2 else _shuffled_copy(rand, g1)
        want = markov_equivalent_bruteforce(g1, g2)
        got_pag = pag_equal(build_cpag(g1), build_cpag(g2))
        got_cet = cet_equivalent(build_cmag(g1), build_cmag(g2))
        ok = want == got_pag == got_cet
        queries = 0
        for x in range(n):
            for y in range(x + 1, n):
                z = frozenset(v for v in range(n) if v not in (x, y) and rand.random() < 0.4)
                if d_connected(g1, x, y, z) != d_connected_paths(g1, x, y, z):
                    ok = False
                queries += 1
        if not ok:
            mismatches += 1
            print(f"MISMATCH case={case} g1={sorted(g1.edges)} g2={sorted(g2.edges)}")
    print(
        f"selftest: {args.cases} cases, {mismatches} mismatches "
        f"({'ok' if mismatches == 0 else 'FAILED'})"
    )
    return EXIT_OK if mismatches == 0 else EXIT_INTERNAL


def _random_digraph(rand: random.Random, n: int) -> DirectedGraph:
    p = rand.uniform(0.15, 0.5)
    edges = [
        (i, j) for i in range(n) for j in range(n) if i != j and rand.random() < p
    ]
    return DirectedGraph(n, edges)


def _shuffled_copy(rand: random.Random, g: DirectedGraph) -> DirectedGraph:
    # A candidate equivalence-class member: flip one random edge of g.
    edges = set(g.edges)
    if edges:
        i, j = rand.choice(sorted(edges))
        edges.discard((i, j))
        edges.add((j, i))
    return DirectedGraph(g.n, edges)


_COMMANDS = {
    "gen": _cmd_gen,
    "cmag": _cmd_cmag,
    "cpag": _cmd_cpag,
    "equiv": _cmd_equiv,
    "cet": _cmd_cet,
    "oracle": _cmd_oracle,
    "classify": _cmd_classify,
    "bench": _cmd_bench,
    "selftest": _cmd_selftest,
}


def run(argv) -> int:
    """Parse argv (without the program name) and execute one subcommand."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse handles --help and usage errors
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (GraphFormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvariantViolation, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
