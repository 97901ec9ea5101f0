"""Per-stage scaling benchmark for the graph-to-PAG pipeline.

For each (size, density, repetition) cell a graph is generated from a seed
derived deterministically from the base seed, so repeated runs rebuild the
same graphs (and digests) while timings vary.  One warm-up repetition per
(size, density) cell is excluded from the records.
"""

from __future__ import annotations

import io
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .cpag_builder import STAGES, build_cpag_timed
from .graph_core import encode
from .randgraph import GenParams, generate

THREADS_ENV_VAR = "CYCLEQUIV_THREADS"

CSV_COLUMNS = ("n", "d", "seed", "convention") + STAGES + ("total", "digest")

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def fnv1a64(data: bytes) -> int:
    """64-bit FNV-1a hash."""
    h = _FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


def derive_seed(base_seed: int, n: int, d: float, rep: int) -> int:
    """Deterministic per-cell seed: FNV-1a of the formatted cell key."""
    return fnv1a64(f"{base_seed}:{n}:{d!r}:{rep}".encode())


@dataclass(frozen=True)
class BenchRecord:
    """One timed pipeline run; stage times are wall-clock microseconds."""

    n: int
    d: float
    seed: int
    convention: str
    stage_us: tuple[int, ...]
    total_us: int
    digest: str

    def stage(self, name: str) -> int:
        return self.stage_us[STAGES.index(name)]


def _run_cell(
    n: int,
    d: float,
    reps: int,
    base_seed: int,
    mix: tuple[float, float, float],
    convention: str,
) -> list[BenchRecord]:
    records = []
    for rep in range(-1, reps):  # rep -1 is the warm-up, not recorded
        seed = derive_seed(base_seed, n, d, max(rep, 0))
        params = GenParams(
            n=n, d=d, p_two=mix[0], p_acy=mix[1], p_cyc=mix[2],
            seed=seed, convention=convention,
        )
        g = generate(params)
        t0 = time.perf_counter_ns()
        cpag, stage_ns = build_cpag_timed(g)
        total_ns = time.perf_counter_ns() - t0
        if rep < 0:
            continue
        records.append(
            BenchRecord(
                n=n,
                d=d,
                seed=seed,
                convention=convention,
                stage_us=tuple(stage_ns[s] // 1000 for s in STAGES),
                total_us=total_ns // 1000,
                digest=f"{fnv1a64(encode(cpag.graph).encode()):016x}",
            )
        )
    return records


def max_workers_from_env() -> int:
    value = os.environ.get(THREADS_ENV_VAR)
    if value:
        try:
            return max(1, int(value))
        except ValueError:
            pass
    return os.cpu_count() or 1


def run_benchmark(
    sizes: Sequence[int],
    densities: Sequence[float],
    reps: int,
    base_seed: int,
    mix: tuple[float, float, float] = (0.1, 0.82, 0.08),
    convention: str = "literal",
    workers: Optional[int] = None,
) -> list[BenchRecord]:
    """Time the full pipeline over every (size, density) cell.

    Cells may run in parallel worker processes (never threads inside a timed
    run); ``workers`` defaults to 1 and is capped by the CYCLEQUIV_THREADS
    environment variable.  Records come back sorted by (n, d, seed).
    """
    if reps < 1:
        raise ValueError(f"reps must be positive, got {reps}")
    cells = [(n, d) for n in sizes for d in densities]
    workers = min(workers or 1, max_workers_from_env(), len(cells) or 1)
    records: list[BenchRecord] = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_run_cell, n, d, reps, base_seed, mix, convention)
                for n, d in cells
            ]
            for future in futures:
                records.extend(future.result())
    else:
        for n, d in cells:
            records.extend(_run_cell(n, d, reps, base_seed, mix, convention))
    records.sort(key=lambda r: (r.n, r.d, r.seed))
    return records


def emit_csv(records: Iterable[BenchRecord]) -> str:
    """Render records as CSV with a fixed column order and plain base-10
    numbers."""
    out = io.StringIO()
    out.write(",".join(CSV_COLUMNS) + "\n")
    for r in records:
        fields = [str(r.n), repr(r.d), str(r.seed), r.convention]
        fields += [str(us) for us in r.stage_us]
        fields += [str(r.total_us), r.digest]
        out.write(",".join(fields) + "\n")
    return out.getvalue()


def parse_csv(text: str) -> list[BenchRecord]:
    """Inverse of :func:`emit_csv`."""
    lines = [line for line in text.splitlines() if line]
    if not lines or lines[0] != ",".join(CSV_COLUMNS):
        raise ValueError("unrecognized CSV header")
    records = []
    for line in lines[1:]:
        fields = line.split(",")
        if len(fields) != len(CSV_COLUMNS):
            raise ValueError(f"malformed CSV row: {line!r}")
        records.append(
            BenchRecord(
                n=int(fields[0]),
                d=float(fields[1]),
                seed=int(fields[2]),
                convention=fields[3],
                stage_us=tuple(int(v) for v in fields[4:10]),
                total_us=int(fields[10]),
                digest=fields[11],
            )
        )
    return records
