"""Wall-clock and consumption benchmark over algorithms and kernels.

Reports nanoseconds per call and mean consumed outputs for each
(algorithm, n) pair, driving the requested kernel's batch loop. Timing is
machine-dependent; the invocation counts are the portable measure.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from . import _backend, hashers

BENCH_CSV_HEADER = "algo,n,ns_per_op,mean_invocations"


@dataclass(frozen=True)
class BenchRow:
    algo: str
    n: int
    ns_per_op: float
    mean_invocations: float


def default_n_list(limit: int = 10 ** 6) -> list[int]:
    """Powers of two, their successors, and quarter points up to limit.

    Contains both the best case (2^i) and the worst case (2^i + 1) of the
    jump-back consumption curve in every octave.
    """
    values = {1}
    i = 0
    while (1 << i) <= limit:
        base = 1 << i
        for scaled in (base, base + 1, base + base // 4 if i >= 2 else None,
                       base + base // 2 if i >= 1 else None,
                       base + 3 * base // 4 if i >= 2 else None):
            if scaled is not None and scaled <= limit:
                values.add(scaled)
        i += 1
    return sorted(values)


def run(algos, n_list, keys: int, kernel=None, seed: int = 0) -> list[BenchRow]:
    """Benchmark each (algo, n): one timed batch of ``keys`` evaluations."""
    if keys < 1:
        raise ValueError("keys must be >= 1")
    kernel = kernel if kernel is not None else _backend.kernel
    rows = []
    for algo in algos:
        aid = hashers.algo_id(algo)
        for n in n_list:
            start = time.perf_counter_ns()
            mean, _ = kernel.consumption_stats(aid, n, keys, seed)
            elapsed = time.perf_counter_ns() - start
            rows.append(BenchRow(algo, n, elapsed / keys, mean))
    return rows


def csv_lines(rows) -> list[str]:
    lines = [BENCH_CSV_HEADER]
    for row in rows:
        lines.append(f"{row.algo},{row.n},{row.ns_per_op:.9g},"
                     f"{row.mean_invocations:.9g}")
    return lines
