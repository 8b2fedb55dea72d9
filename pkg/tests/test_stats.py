"""Consumption theory, goodness-of-fit machinery, experiment runners."""

import math

import numpy as np
import pytest

from jumpback import _backend, hashers, stats


# --- rho and closed-form moments -------------------------------------------

def test_rho_values():
    assert stats.rho(2) == 1.0
    assert stats.rho(5) == 1.6
    for i in range(1, 30):
        assert stats.rho(1 << i) == 1.0
        n = (1 << i) + 1
        assert stats.rho(n) == pytest.approx(2.0 * (1 << i) / n, rel=1e-15)


def test_rho_range_and_errors():
    for n in range(2, 5000):
        assert 1.0 <= stats.rho(n) < 2.0
    with pytest.raises(ValueError):
        stats.rho(1)
    with pytest.raises(ValueError):
        stats.rho(0)


def test_theory_jump_hash_values():
    assert stats.theory_jump_hash(1) == (1.0, 0.0)
    mean, variance = stats.theory_jump_hash(4)
    assert mean == pytest.approx(25 / 12, rel=1e-12)
    assert variance == pytest.approx(95 / 144, rel=1e-12)
    mean_large, _ = stats.theory_jump_hash(10 ** 6)
    assert mean_large <= 1 + math.log(10 ** 6)


def test_theory_jbh_values():
    assert stats.theory_jbh(1) == (0.0, 0.0)
    for i in range(1, 20):
        assert stats.theory_jbh(1 << i) == (2.0, 0.0)
    mean, variance = stats.theory_jbh(3)
    assert mean == pytest.approx(7 / 3, rel=1e-12)
    assert variance == pytest.approx(4 / 9, rel=1e-12)
    assert stats.theory_jbh(5) == pytest.approx((2.6, 0.96), rel=1e-12)


def test_theory_jbh_packed_values():
    assert stats.theory_jbh_packed(1) == (0.0, 0.0)
    for i in range(1, 20):
        assert stats.theory_jbh_packed(1 << i) == (1.0, 0.0)
    assert stats.theory_jbh_packed(5) == pytest.approx(
        (1 + 0.96 / 2.2, 0.96 * 1.96 / 4.84), rel=1e-12)
    assert stats.theory_jbh_packed(3) == pytest.approx(
        (19 / 15, 52 / 225), rel=1e-12)


def test_theory_ranges_up_to_one_million():
    n = np.arange(2, 10 ** 6 + 1, dtype=np.int64)
    # exact bit-length via frexp (exact for integers below 2^53)
    exponent = np.frexp((n - 1).astype(np.float64))[1]
    rho = np.ldexp(1.0, exponent) / n
    mean_jbh = 1.0 + rho
    var_jbh = (rho - 1.0) * rho
    assert ((mean_jbh >= 2.0) & (mean_jbh < 3.0)).all()
    assert ((var_jbh >= 0.0) & (var_jbh < 2.0)).all()
    mean_packed = 1.0 + (rho - 1.0) * rho / (2.0 * rho - 1.0)
    var_packed = rho * (rho - 1.0) * (rho * rho - rho + 1.0) / (2.0 * rho - 1.0) ** 2
    assert ((mean_packed >= 1.0) & (mean_packed < 5.0 / 3.0)).all()
    assert ((var_packed >= 0.0) & (var_packed < 2.0 / 3.0)).all()


@pytest.mark.parametrize("theory", [stats.theory_jbh, stats.theory_jbh_packed])
def test_sawtooth_extremes_per_octave(theory):
    for i in range(1, 15):
        lo, hi = 1 << i, 1 << (i + 1)
        means = [theory(n)[0] for n in range(lo, hi + 1)]
        assert min(means) == means[0]  # minimum exactly at the power of two
        assert max(means) == means[1]  # maximum exactly one past it


def test_theory_jumping_backwards_against_simulation():
    mean, variance = stats.theory_jumping_backwards(1000)
    emp_mean, emp_var = _backend.kernel.consumption_stats(
        hashers.algo_id("jumpingbackwards"), 1000, 10 ** 5, 17)
    assert emp_mean == pytest.approx(mean, abs=0.05)
    assert emp_var == pytest.approx(variance, abs=0.3)


def test_theory_dispatcher():
    assert stats.theory_invocations("modulo", 5) == (0.0, 0.0)
    assert stats.theory_invocations("random", 5) == (1.0, 0.0)
    assert stats.theory_invocations("icws", 5) == (3.0, 0.0)
    assert stats.theory_invocations("jumphash", 4) == stats.theory_jump_hash(4)
    assert stats.theory_invocations("jumpbackhash", 5) == stats.theory_jbh(5)
    assert stats.theory_invocations("jumpingbackwards-opt1", 5) is None
    with pytest.raises(ValueError):
        stats.theory_invocations("bogus", 5)


# --- G-test -------------------------------------------------------------------

def test_g_test_uniform_counts():
    result = stats.g_test([250, 250, 250, 250])
    assert result.statistic == 0.0
    assert result.p_value == 1.0
    assert not result.rejected


def test_g_test_known_statistic():
    result = stats.g_test([10, 0], min_expected=0.0)
    assert result.statistic == pytest.approx(20 * math.log(2), rel=1e-12)
    assert result.df_or_n == 1


def test_g_test_permutation_invariant():
    a = stats.g_test([120, 90, 110, 140], min_expected=0.0)
    b = stats.g_test([140, 110, 90, 120], min_expected=0.0)
    assert a.statistic == b.statistic
    assert a.p_value == b.p_value


def test_g_test_preconditions():
    with pytest.raises(ValueError):
        stats.g_test([5])  # one cell
    with pytest.raises(ValueError):
        stats.g_test([10, 10])  # expected count below 100
    with pytest.raises(ValueError):
        stats.g_test([-1, 300], min_expected=0.0)
    with pytest.raises(ValueError):
        stats.g_test([0, 0], min_expected=0.0)


def test_g_test_sampler_unbiasedness():
    from jumpback import prg
    gen = prg.SplitMix64(777)
    counts = [0] * 7
    for _ in range(10 ** 5):
        counts[prg.next_bounded(gen, 7)] += 1
    assert stats.g_test(counts).p_value > 0.001


def test_chi_square_p_value_spot_check():
    # 95th percentile of chi-square with one degree of freedom.
    from scipy.special import gammaincc
    assert float(gammaincc(0.5, 3.841458820694124 / 2)) == pytest.approx(0.05, abs=1e-6)


def test_p_value_monotone_in_statistic():
    from scipy.special import gammaincc
    previous = 1.0
    for statistic in np.linspace(0.0, 50.0, 101):
        p = float(gammaincc(3.0, statistic / 2.0))
        assert p <= previous + 1e-15
        previous = p


# --- KS test ---------------------------------------------------------------------

def test_kolmogorov_sf_reference_points():
    assert stats.kolmogorov_sf(0.0) == 1.0
    assert stats.kolmogorov_sf(-1.0) == 1.0
    # Classic two-sided critical value at the 5% level.
    assert stats.kolmogorov_sf(1.3581) == pytest.approx(0.05, abs=1e-3)
    assert stats.kolmogorov_sf(3.0) < 1e-7
    xs = np.linspace(0.01, 3.0, 200)
    values = [stats.kolmogorov_sf(float(x)) for x in xs]
    # monotone up to the 1e-10 series truncation
    assert all(a >= b - 1e-9 for a, b in zip(values, values[1:]))


def test_ks_quantile_construction_bound():
    n = 1000
    size = 2000
    buckets = [int(i * n / size) for i in range(size)]
    result = stats.ks_test(buckets, n)
    assert result.statistic <= 1 / size + 1 / n + 1e-12


def test_ks_constant_sample_degenerate():
    result = stats.ks_test([0] * 2000, 50)
    assert result.statistic == pytest.approx(1 - 1 / 50, rel=1e-12)
    assert result.p_value < 1e-9
    assert result.rejected


def test_ks_statistic_invariant_under_sample_duplication():
    buckets = list(range(0, 2000, 2))
    single = stats.ks_test(buckets, 2000)
    tripled = stats.ks_test(buckets * 3, 2000)
    assert tripled.statistic == pytest.approx(single.statistic, rel=1e-12)


def test_ks_preconditions():
    with pytest.raises(ValueError):
        stats.ks_test([], 10)
    with pytest.raises(ValueError):
        stats.ks_test([1, 2, 3], 10)  # below the default sample floor
    with pytest.raises(ValueError):
        stats.ks_test([0] * 2000, 1)


def test_ks_random_hash_large_n():
    samples = _backend.kernel.bucket_samples(
        hashers.algo_id("random"), (1 << 31) - 1, 10 ** 5, 5150)
    assert stats.ks_test(samples, (1 << 31) - 1).p_value > 0.001


# --- n sequence -------------------------------------------------------------------

def test_geometric_sequence_trivial_cases():
    assert stats.geometric_n_sequence(1, 0.999) == [1]
    sequence = stats.geometric_n_sequence(1000, 0.999)
    assert sequence[1] == 999


def test_geometric_sequence_reference_count():
    sequence = stats.geometric_n_sequence(10 ** 6, 0.999)
    assert len(sequence) == 7482
    assert sequence[0] == 10 ** 6
    assert sequence[-1] == 1
    assert all(a > b for a, b in zip(sequence, sequence[1:]))


def test_geometric_sequence_validation():
    with pytest.raises(ValueError):
        stats.geometric_n_sequence(0, 0.999)
    with pytest.raises(ValueError):
        stats.geometric_n_sequence(10, 1.0)
    with pytest.raises(ValueError):
        stats.geometric_n_sequence(10, 0.0)


# --- runners ------------------------------------------------------------------------

def test_consumption_runner_power_of_two_is_deterministic():
    summaries = stats.run_consumption_experiment(
        "jumpbackhash-packed", [1024], 10 ** 4, seed=9)
    row = summaries[0]
    assert row.empirical_mean == 1.0
    assert row.empirical_variance == 0.0
    assert row.theory.mean == 1.0
    assert row.theory.rho == 1.0


def test_consumption_runner_matches_theory_loosely():
    summaries = stats.run_consumption_experiment(
        "jumpbackhash", [5], 10 ** 5, seed=10)
    assert summaries[0].empirical_mean == pytest.approx(2.6, abs=0.03)


def test_jump_hash_mean_draws_at_n4():
    mean, _ = _backend.kernel.consumption_stats(
        hashers.algo_id("jumphash"), 4, 10 ** 6, 14)
    assert mean == pytest.approx(25 / 12, abs=0.01)


def test_jbh_consumption_at_n5_million_keys():
    summaries = stats.run_consumption_experiment(
        "jumpbackhash", [5], 10 ** 6, seed=15)
    assert summaries[0].empirical_mean == pytest.approx(2.6, abs=0.01)


def test_monotonicity_runner():
    assert stats.run_monotonicity_check("jumpbackhash", 20, 500, seed=3) == 0
    assert stats.run_monotonicity_check("modulo", 10, 10, seed=3) > 0
    assert stats.run_monotonicity_check("modulo", 0, 10, seed=3) == 0


def test_uniformity_runner_small_and_skip():
    results, fraction = stats.run_uniformity_check(
        "jumpbackhash-packed", 2 * 10 ** 4, [1] + list(range(2, 21)), seed=8)
    assert results[0][1].p_value == 1.0 and not results[0][1].rejected
    assert fraction <= 0.1


def test_uniformity_runner_switches_to_ks_for_large_n():
    results, _ = stats.run_uniformity_check(
        "random", 5000, [1 << 20], seed=8)
    # 5000 keys over 2^20 buckets is far below the G-test regime.
    assert results[0][1].df_or_n == 5000


def test_uniformity_runner_passes_for_nonmonotone_uniform_algo():
    # uniformity does not require monotonicity
    _, fraction = stats.run_uniformity_check(
        "random", 2 * 10 ** 4, range(2, 21), seed=8)
    assert fraction <= 0.1


# --- CSV emission --------------------------------------------------------------------

def test_csv_schema_and_formatting(tmp_path):
    summaries = stats.run_consumption_experiment(
        "jumpbackhash-packed", [1024, 5], 1000, seed=4)
    lines = stats.consumption_csv_lines(summaries)
    assert lines[0] == ("n,samples,mean_empirical,variance_empirical,"
                        "mean_theory,variance_theory")
    assert lines[1].startswith("1024,1000,1,0,1,0")
    fields = lines[2].split(",")
    assert fields[0] == "5" and fields[1] == "1000"
    assert float(fields[4]) == pytest.approx(1.43636364, abs=1e-7)

    path = tmp_path / "c.csv"
    stats.write_consumption_csv(path, summaries)
    first = path.read_bytes()
    stats.write_consumption_csv(path, summaries)
    assert path.read_bytes() == first


def test_max_theory_deviation_skips_missing_theory():
    summaries = stats.run_consumption_experiment(
        "jumpingbackwards-opt1", [4], 100, seed=4)
    assert stats.max_theory_deviation(summaries) == (0.0, 0.0)
