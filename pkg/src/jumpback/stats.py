"""Consumption theory, goodness-of-fit tests, and experiment runners.

Closed-form mean/variance of the number of 64-bit generator outputs each
algorithm consumes, a G-test and a Kolmogorov-Smirnov test for bucket
uniformity, and the batch runners (consumption, monotonicity, uniformity)
that drive the selected kernel over pseudorandom key streams. All runners
are deterministic given their seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import digamma, gammaincc, polygamma, xlogy

from . import _backend, hashers

_EULER = float(np.euler_gamma)
_ZETA2 = math.pi ** 2 / 6.0
_DESCENT_START = 1 << 32


@dataclass(frozen=True)
class ConsumptionTheory:
    """Closed-form moments of consumed outputs for one (algorithm, n)."""

    n: int
    rho: float  # 2^ceil(log2 n) / n in [1, 2); nan when n < 2
    mean: float
    variance: float


@dataclass(frozen=True)
class ConsumptionSummary:
    """One experiment row: empirical moments next to their theory values."""

    n: int
    sample_count: int
    empirical_mean: float
    empirical_variance: float
    theory: ConsumptionTheory


@dataclass(frozen=True)
class GofResult:
    """Outcome of a goodness-of-fit test.

    ``df_or_n`` is the degrees of freedom for the G-test and the sample
    size for the KS test.
    """

    statistic: float
    df_or_n: int
    p_value: float
    alpha: float
    rejected: bool


def rho(n: int) -> float:
    """2^(floor(log2(n-1)) + 1) / n, the octave overshoot ratio in [1, 2).

    Computed with integer bit arithmetic; equals 1 exactly when n is a
    power of two and peaks just above powers of two, which is the source
    of the sawtooth shape of the jump-back consumption curves.
    """
    if n < 2:
        raise ValueError("rho requires n >= 2")
    return float(1 << (n - 1).bit_length()) / n


# Cached prefix sums of 1/i and 1/i^2; grown on demand.
_harmonic = np.zeros(1)
_harmonic_sq = np.zeros(1)


def _harmonics(n: int) -> tuple[float, float]:
    global _harmonic, _harmonic_sq
    if n >= _harmonic.size:
        size = max(n + 1, 2 * _harmonic.size)
        inv = 1.0 / np.arange(1, size, dtype=np.float64)
        _harmonic = np.concatenate(([0.0], np.cumsum(inv)))
        _harmonic_sq = np.concatenate(([0.0], np.cumsum(inv * inv)))
    return float(_harmonic[n]), float(_harmonic_sq[n])


def theory_jump_hash(n: int) -> tuple[float, float]:
    """Mean H(n) and variance H(n) - H2(n) of jumphash unit draws."""
    if n < 1:
        raise ValueError("n must be >= 1")
    h, h2 = _harmonics(n)
    return h, h - h2


def theory_jbh(n: int) -> tuple[float, float]:
    """Mean 1 + rho and variance (rho - 1) * rho for jumpbackhash."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return 0.0, 0.0
    r = rho(n)
    return 1.0 + r, (r - 1.0) * r


def theory_jbh_packed(n: int) -> tuple[float, float]:
    """Moments for the packed variant, which consumes at most 5/3 on average."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return 0.0, 0.0
    r = rho(n)
    mean = 1.0 + (r - 1.0) * r / (2.0 * r - 1.0)
    variance = r * (r - 1.0) * (r * r - r + 1.0) / (2.0 * r - 1.0) ** 2
    return mean, variance


def theory_jumping_backwards(n: int) -> tuple[float, float]:
    """Moments of the plain descending walk: 1 + H(2^32) - H(n) draws.

    Harmonic values via digamma/trigamma, accurate to ~1e-15. Counts
    describe bounded-sampling draws; generator invocations add a
    negligible ~n/2^64 rejection overhead per draw.
    """
    if n < 1:
        raise ValueError("n must be >= 1")

    def _h(m: int) -> tuple[float, float]:
        h = float(digamma(m + 1)) + _EULER
        h2 = _ZETA2 - float(polygamma(1, m + 1))
        return h, h2

    h_top, h2_top = _h(_DESCENT_START)
    h_n, h2_n = _h(n)
    active = h_top - h_n
    return 1.0 + active, active - (h2_top - h2_n)


def theory_invocations(algo: str, n: int) -> tuple[float, float] | None:
    """Closed-form (mean, variance) of consumed outputs, or None."""
    if algo == "modulo":
        return 0.0, 0.0
    if algo == "random":
        return 1.0, 0.0
    if algo == "icws":
        return 3.0, 0.0
    if algo == "jumphash":
        return theory_jump_hash(n)
    if algo == "jumpingbackwards":
        return theory_jumping_backwards(n)
    if algo == "jumpbackhash":
        return theory_jbh(n)
    if algo == "jumpbackhash-packed":
        return theory_jbh_packed(n)
    if algo in ("jumpingbackwards-opt1", "jumpingbackwards-opt2"):
        return None
    raise ValueError(f"unknown algorithm {algo!r}")


# --- goodness-of-fit tests -------------------------------------------------

def g_test(observed, alpha: float = 0.001, min_expected: float = 100.0) -> GofResult:
    """Likelihood-ratio test of the counts against a uniform expectation.

    G = 2 * sum O_i * ln(O_i / E) with E = total / cells; empty cells
    contribute zero. The p-value comes from the chi-square distribution
    with cells - 1 degrees of freedom (regularized incomplete gamma).
    ``min_expected`` is the required expected count per cell; lower it
    explicitly to exercise the statistic on tiny fixtures.
    """
    obs = np.asarray(observed, dtype=np.float64)
    cells = obs.size
    if cells < 2:
        raise ValueError("g_test needs at least 2 cells")
    if (obs < 0).any():
        raise ValueError("counts must be non-negative")
    total = float(obs.sum())
    if total <= 0:
        raise ValueError("g_test needs a non-empty sample")
    if total < min_expected * cells:
        raise ValueError(
            f"sample too small: expected count per cell is {total / cells:.3g}, "
            f"need >= {min_expected:g}")
    expected = total / cells
    # fsum rounds the exact sum once, so the statistic is invariant under
    # permutation of the cells.
    statistic = max(2.0 * math.fsum(xlogy(obs, obs / expected)), 0.0)
    df = cells - 1
    p_value = float(gammaincc(df / 2.0, statistic / 2.0))
    return GofResult(statistic, df, p_value, alpha, p_value < alpha)


def kolmogorov_sf(x: float) -> float:
    """Asymptotic Kolmogorov survival function 2*sum (-1)^(j-1) e^(-2 j^2 x^2).

    The alternating series is truncated once a term drops below 1e-10.
    """
    if x <= 0.0:
        return 1.0
    total = 0.0
    sign = 1.0
    j = 1
    while True:
        term = math.exp(-2.0 * j * j * x * x)
        total += sign * term
        if term < 1e-10 or j >= 1000:
            break
        sign = -sign
        j += 1
    return min(max(2.0 * total, 0.0), 1.0)


def ks_test(buckets, n: int, alpha: float = 0.001,
            min_samples: int = 1000) -> GofResult:
    """Two-sided KS test of bucket samples against the uniform law on [0, n).

    Buckets map to (b + 1) / n, whose CDF tracks the uniform CDF within
    1/n, negligible for the large n this test targets. The p-value uses
    the asymptotic Kolmogorov distribution at sqrt(N) * D.
    """
    sample = np.asarray(buckets, dtype=np.float64)
    size = sample.size
    if size == 0:
        raise ValueError("ks_test needs a non-empty sample")
    if size < min_samples:
        raise ValueError(f"sample too small: {size} < {min_samples}")
    if n < 2:
        raise ValueError("ks_test requires n >= 2")
    x = np.sort((sample + 1.0) / n)
    positions = np.arange(1, size + 1, dtype=np.float64)
    d_plus = float((positions / size - x).max())
    d_minus = float((x - (positions - 1.0) / size).max())
    statistic = max(d_plus, d_minus)
    p_value = kolmogorov_sf(math.sqrt(size) * statistic)
    return GofResult(statistic, size, p_value, alpha, p_value < alpha)


# --- experiment runners ------------------------------------------------------

def geometric_n_sequence(n0: int, factor: float) -> list[int]:
    """Strictly decreasing bucket counts n0, floor(factor*n0), ... down to 1.

    Roughly uniform on the log scale; stops before the value would drop
    below 1. Floor is evaluated in double precision, so the sequence is
    reproducible bit for bit.
    """
    if n0 < 1:
        raise ValueError("n0 must be >= 1")
    if not 0.0 < factor < 1.0:
        raise ValueError("factor must be in (0, 1)")
    values = []
    n = n0
    while n >= 1:
        values.append(n)
        n = math.floor(factor * n)
    return values


def run_consumption_experiment(algo: str, n_list, keys_per_n: int, seed: int,
                               kernel=None) -> list[ConsumptionSummary]:
    """Measure consumed outputs per call over pseudorandom keys for each n.

    Keys come from an independent SplitMix64 stream seeded with ``seed``
    (the same keys for every n, which removes between-row noise).
    """
    if keys_per_n < 1:
        raise ValueError("keys_per_n must be >= 1")
    kernel = kernel if kernel is not None else _backend.kernel
    aid = hashers.algo_id(algo)
    summaries = []
    for n in n_list:
        mean, variance = kernel.consumption_stats(aid, n, keys_per_n, seed)
        moments = theory_invocations(algo, n)
        if moments is None:
            moments = (float("nan"), float("nan"))
        theory = ConsumptionTheory(
            n=n,
            rho=rho(n) if n >= 2 else float("nan"),
            mean=moments[0],
            variance=moments[1],
        )
        summaries.append(ConsumptionSummary(n, keys_per_n, mean, variance, theory))
    return summaries


def run_monotonicity_check(algo: str, runs: int, n_max: int, seed: int,
                           kernel=None) -> int:
    """Total monotonicity violations over ``runs`` random keys, n = 1..n_max."""
    if runs < 0:
        raise ValueError("runs must be >= 0")
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    kernel = kernel if kernel is not None else _backend.kernel
    return int(kernel.monotonicity_violations(hashers.algo_id(algo), runs, n_max, seed))


def run_uniformity_check(algo: str, keys: int, n_list, alpha: float = 0.001,
                         seed: int = 0, kernel=None):
    """Per-n goodness-of-fit results plus the rejection fraction.

    Uses the G-test while the expected count per bucket stays at or above
    100 and switches to the KS test for larger n. n = 1 is trivially
    uniform and recorded as a skipped pass.
    """
    kernel = kernel if kernel is not None else _backend.kernel
    aid = hashers.algo_id(algo)
    results = []
    rejected = 0
    for n in n_list:
        if n == 1:
            result = GofResult(0.0, 0, 1.0, alpha, False)
        elif keys >= 100 * n:
            counts = kernel.bucket_counts(aid, n, keys, seed)
            result = g_test(counts, alpha=alpha)
        else:
            samples = kernel.bucket_samples(aid, n, keys, seed)
            result = ks_test(samples, n, alpha=alpha)
        results.append((n, result))
        rejected += result.rejected
    return results, rejected / len(results) if results else 0.0


# --- CSV emission ------------------------------------------------------------

CSV_HEADER = "n,samples,mean_empirical,variance_empirical,mean_theory,variance_theory"


def _fmt(value: float) -> str:
    return "%.9g" % value


def consumption_csv_lines(summaries) -> list[str]:
    lines = [CSV_HEADER]
    for s in summaries:
        lines.append(",".join((
            str(s.n),
            str(s.sample_count),
            _fmt(s.empirical_mean),
            _fmt(s.empirical_variance),
            _fmt(s.theory.mean),
            _fmt(s.theory.variance),
        )))
    return lines


def write_consumption_csv(path, summaries) -> None:
    with open(path, "w", encoding="ascii") as handle:
        handle.write("\n".join(consumption_csv_lines(summaries)) + "\n")


def max_theory_deviation(summaries) -> tuple[float, float]:
    """Largest |empirical - theory| over rows, for mean and variance.

    Rows without closed-form theory (NaN) are skipped.
    """
    mean_dev = 0.0
    var_dev = 0.0
    for s in summaries:
        if math.isnan(s.theory.mean):
            continue
        mean_dev = max(mean_dev, abs(s.empirical_mean - s.theory.mean))
        var_dev = max(var_dev, abs(s.empirical_variance - s.theory.variance))
    return mean_dev, var_dev
