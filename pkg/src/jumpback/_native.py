"""Pure-Python kernel: the fallback twin of the compiled extension.

Exposes the same call surface as ``jumpback._speedups`` and produces
bit-identical results; it is selected automatically when the extension is
not built. Expect it to be orders of magnitude slower for the batch
loops, which is fine for tests and small experiments.
"""

from __future__ import annotations

import numpy as np

from . import hashers, prg

BACKEND = "pure"
ALGO_NAMES = hashers.ALGORITHMS

_MASK64 = prg.MASK64


def _core(algo: int):
    if not 0 <= algo < len(ALGO_NAMES):
        raise ValueError(f"algorithm id out of range: {algo}")
    return hashers._CORES[ALGO_NAMES[algo]]


def _check_key(key: int) -> None:
    if not 0 <= key <= _MASK64:
        raise ValueError("key must be an unsigned 64-bit integer")


def _check_n(n: int) -> None:
    if not 1 <= n <= hashers.MAX_BUCKETS:
        raise ValueError(f"bucket count must be in [1, {hashers.MAX_BUCKETS}]")


def eval_bucket(algo: int, key: int, n: int) -> int:
    core = _core(algo)
    _check_key(key)
    _check_n(n)
    return core(key, n, prg.SplitMix64(key), None)


def eval_counted(algo: int, key: int, n: int) -> tuple[int, int]:
    core = _core(algo)
    _check_key(key)
    _check_n(n)
    gen = prg.CountingGenerator.from_seed(key)
    bucket = core(key, n, gen, None)
    return bucket, gen.invocations


def trajectory(algo: int, key: int, n_max: int) -> np.ndarray:
    """f(key, n) for n = 1..n_max as an int64 array (index n - 1)."""
    core = _core(algo)
    _check_key(key)
    _check_n(n_max)
    out = np.empty(n_max, dtype=np.int64)
    for n in range(1, n_max + 1):
        out[n - 1] = core(key, n, prg.SplitMix64(key), None)
    return out


def consumption_stats(algo: int, n: int, num_keys: int, seed: int) -> tuple[float, float]:
    """Welford mean and sample variance of consumed outputs over keys."""
    core = _core(algo)
    _check_n(n)
    if num_keys < 1:
        raise ValueError("num_keys must be >= 1")
    key_stream = prg.SplitMix64(seed)
    mean = 0.0
    m2 = 0.0
    for i in range(num_keys):
        key = key_stream.next_u64()
        gen = prg.CountingGenerator.from_seed(key)
        core(key, n, gen, None)
        delta = gen.invocations - mean
        mean += delta / (i + 1)
        m2 += delta * (gen.invocations - mean)
    variance = m2 / (num_keys - 1) if num_keys > 1 else 0.0
    return mean, variance


def bucket_counts(algo: int, n: int, num_keys: int, seed: int) -> np.ndarray:
    """Histogram of buckets over num_keys pseudorandom keys."""
    core = _core(algo)
    _check_n(n)
    if num_keys < 1:
        raise ValueError("num_keys must be >= 1")
    key_stream = prg.SplitMix64(seed)
    counts = np.zeros(n, dtype=np.int64)
    for _ in range(num_keys):
        key = key_stream.next_u64()
        counts[core(key, n, prg.SplitMix64(key), None)] += 1
    return counts


def bucket_samples(algo: int, n: int, num_keys: int, seed: int) -> np.ndarray:
    """Bucket of each of num_keys pseudorandom keys, in stream order."""
    core = _core(algo)
    _check_n(n)
    if num_keys < 1:
        raise ValueError("num_keys must be >= 1")
    key_stream = prg.SplitMix64(seed)
    out = np.empty(num_keys, dtype=np.int64)
    for i in range(num_keys):
        key = key_stream.next_u64()
        out[i] = core(key, n, prg.SplitMix64(key), None)
    return out


def monotonicity_violations(algo: int, num_keys: int, n_max: int, seed: int) -> int:
    """Count transitions f(k, n) -> f(k, n+1) that land on neither value.

    For each key sweeps n = 1..n_max; a violation is a changed assignment
    that is not the newly added bucket.
    """
    core = _core(algo)
    _check_n(n_max)
    if num_keys < 0:
        raise ValueError("num_keys must be >= 0")
    key_stream = prg.SplitMix64(seed)
    violations = 0
    for _ in range(num_keys):
        key = key_stream.next_u64()
        prev = core(key, 1, prg.SplitMix64(key), None)
        for n in range(2, n_max + 1):
            cur = core(key, n, prg.SplitMix64(key), None)
            if cur != prev and cur != n - 1:
                violations += 1
            prev = cur
    return violations


def reassignment_count(algo: int, n: int, num_keys: int, seed: int) -> int:
    """Number of keys with f(k, n) != f(k, n + 1)."""
    core = _core(algo)
    _check_n(n)
    _check_n(n + 1)
    if num_keys < 1:
        raise ValueError("num_keys must be >= 1")
    key_stream = prg.SplitMix64(seed)
    changed = 0
    for _ in range(num_keys):
        key = key_stream.next_u64()
        a = core(key, n, prg.SplitMix64(key), None)
        b = core(key, n + 1, prg.SplitMix64(key), None)
        if a != b:
            changed += 1
    return changed
