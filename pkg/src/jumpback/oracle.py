"""Brute-force reference semantics for validating the fast algorithms.

The ground-truth mapping assigns a key to the index of the smallest of n
pseudorandom scores. An index whose score beats every earlier score is
"active"; the mapping equals the largest active index below n. The fast
algorithms generate exactly these active indices without materializing the
scores, so reconstructing the active set from an algorithm's outputs and
replaying the max-rule is a pointwise structural check.
"""

from __future__ import annotations

from . import prg

#: Desk-scale bound for the score-based oracles.
MAX_ORACLE_N = 1 << 16

#: Bound for probing an algorithm's assignments index by index.
MAX_PROBE_N = 10 ** 4


def score_sequence(key: int, n: int) -> list[int]:
    """The first n 64-bit scores drawn in ascending index order."""
    if not 1 <= n <= MAX_ORACLE_N:
        raise ValueError(f"oracle bucket count must be in [1, {MAX_ORACLE_N}]")
    gen = prg.SplitMix64(key)
    return [gen.next_u64() for _ in range(n)]


def argmin_oracle(key: int, n: int) -> int:
    """Index of the minimal score; ties break toward the lowest index.

    With 64-bit integer scores a tie occurs with probability about
    n^2 / 2^65, negligible at desk scale, and the tie-break keeps the
    oracle total and deterministic anyway.
    """
    scores = score_sequence(key, n)
    best = 0
    for i in range(1, n):
        if scores[i] < scores[best]:
            best = i
    return best


def active_indices_from_scores(key: int, n: int) -> list[int]:
    """Indices whose score is strictly smaller than all earlier scores.

    Index 0 is always active. The largest active index below any m <= n
    equals ``argmin_oracle(key, m)``.
    """
    scores = score_sequence(key, n)
    active = [0]
    running_min = scores[0]
    for i in range(1, n):
        if scores[i] < running_min:
            active.append(i)
            running_min = scores[i]
    return active


def assignment_trajectory(evaluate_fn, key: int, n_probe: int) -> list[int]:
    """[f(key, 1), f(key, 2), ..., f(key, n_probe)] for a mapping callable."""
    if not 1 <= n_probe <= MAX_PROBE_N:
        raise ValueError(f"n_probe must be in [1, {MAX_PROBE_N}]")
    return [evaluate_fn(key, n) for n in range(1, n_probe + 1)]


def active_indices_from_trajectory(trajectory) -> list[int]:
    """Recover the active-index set from assignments at n = 1..n_probe.

    An index a > 0 is active exactly when the algorithm maps the key to a
    as soon as bucket a exists, i.e. f(key, a + 1) = a.
    """
    active = [0]
    for a in range(1, len(trajectory)):
        if trajectory[a] == a:  # trajectory[a] is f(key, a + 1)
            active.append(a)
    return active


def reconstruct_active_indices(evaluate_fn, key: int, n_probe: int) -> list[int]:
    """{0} plus every index the callable jumps to the moment it appears."""
    return active_indices_from_trajectory(
        assignment_trajectory(evaluate_fn, key, n_probe))


def trajectory_reconstruction_mismatches(trajectory) -> int:
    """Count n where f(key, n) != max(active set below n).

    Zero for every consistent algorithm; this is the strongest desk-scale
    structural check because it must hold pointwise, not just on average.
    """
    active = active_indices_from_trajectory(trajectory)
    mismatches = 0
    pos = 0
    current_max = 0
    for n in range(1, len(trajectory) + 1):
        while pos < len(active) and active[pos] < n:
            current_max = active[pos]
            pos += 1
        if trajectory[n - 1] != current_max:
            mismatches += 1
    return mismatches
