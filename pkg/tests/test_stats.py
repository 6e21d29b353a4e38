import math
import random

import numpy as np
import pytest

from venuerisk import (
    Severity,
    classify,
    fit_log_normal,
    histogram,
    welch_t_test,
)
from venuerisk.stats import regularized_incomplete_beta, student_t_two_sided_p

# frozen from scipy.stats.ttest_ind(a, b, equal_var=False) and confirmed
# with a 50-digit incomplete-beta evaluation
WELCH_SHIFTED_P = 0.34659350708733416


class TestClassify:
    def test_above_threshold_is_severe(self):
        assert classify(1.5) is Severity.SEVERE

    def test_below_threshold_is_mild(self):
        assert classify(0.3) is Severity.MILD

    def test_boundary_is_mild(self):
        assert classify(1.0) is Severity.MILD

    def test_custom_threshold(self):
        assert classify(1.5, threshold=2.0) is Severity.MILD

    def test_monotone(self):
        rank = {Severity.MILD: 0, Severity.SEVERE: 1}
        rng = random.Random(2)
        for _ in range(500):
            x = rng.uniform(0, 3)
            y = x + rng.uniform(0, 3)
            assert rank[classify(x)] <= rank[classify(y)]

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            classify(-0.1)


class TestHistogram:
    def test_linear_hand_binning(self):
        hist = histogram([1, 2, 3, 4], bins=2)
        assert hist.bin_edges == (1.0, 2.5, 4.0)
        assert hist.counts == (2, 2)
        assert hist.excluded_count == 0

    def test_degenerate_single_bin(self):
        hist = histogram([5.0, 5.0, 5.0], bins=4)
        assert len(hist.counts) == 1
        assert hist.counts == (3,)
        assert hist.bin_edges[0] < 5.0 < hist.bin_edges[1]

    def test_log10_hand_binning(self):
        hist = histogram([0.1, 1.0, 10.0], bins=2, scale="log10")
        assert hist.bin_edges == pytest.approx((0.1, 1.0, 10.0), rel=1e-12)
        # boundary value 1 goes to the second bin by the half-open rule
        assert hist.counts == (1, 2)

    def test_log10_excludes_nonpositive(self):
        hist = histogram([0.0, -1.0, 0.5, 2.0], bins=1, scale="log10")
        assert hist.excluded_count == 2
        assert sum(hist.counts) == 2

    def test_empty_included_set_flagged(self):
        hist = histogram([0.0, 0.0], bins=3, scale="log10")
        assert hist.is_empty
        assert hist.counts == ()
        assert hist.excluded_count == 2

    def test_zero_bins_rejected(self):
        with pytest.raises(ValueError):
            histogram([1, 2], bins=0)

    def test_conservation(self):
        rng = random.Random(13)
        for _ in range(200):
            n = rng.randrange(1, 60)
            values = [rng.choice([0.0, rng.uniform(-5, 5), float("nan")]) for _ in range(n)]
            scale = rng.choice(["linear", "log10"])
            hist = histogram(values, bins=rng.randrange(1, 10), scale=scale)
            assert sum(hist.counts) + hist.excluded_count == n

    def test_explicit_range_aligns_edges(self):
        a = histogram([1.0, 2.0], bins=4, value_range=(0.0, 10.0))
        b = histogram([7.0, 9.5], bins=4, value_range=(0.0, 10.0))
        assert a.bin_edges == b.bin_edges

    def test_out_of_range_counts_as_excluded(self):
        hist = histogram([1.0, 5.0, 20.0], bins=2, value_range=(0.0, 10.0))
        assert sum(hist.counts) == 2
        assert hist.excluded_count == 1

    def test_all_inputs_binned_exactly_once(self):
        rng = np.random.default_rng(4)
        values = rng.normal(0, 2, size=500)
        hist = histogram(values, bins=17)
        assert sum(hist.counts) == 500


class TestWelchTTest:
    def test_identical_samples(self):
        result = welch_t_test([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
        assert result.t_stat == 0.0
        assert result.p_value == 1.0

    def test_shifted_samples_reference_values(self):
        result = welch_t_test([1, 2, 3, 4, 5], [2, 3, 4, 5, 6])
        assert result.t_stat == pytest.approx(-1.0, abs=1e-12)
        assert result.degrees_of_freedom == pytest.approx(8.0, abs=1e-12)
        assert result.p_value == pytest.approx(WELCH_SHIFTED_P, rel=1e-10)

    def test_swap_negates_t_preserves_p(self):
        a = [1.2, 3.4, 2.2, 5.1]
        b = [2.0, 2.5, 7.5, 0.1, 4.4]
        fwd = welch_t_test(a, b)
        rev = welch_t_test(b, a)
        assert rev.t_stat == -fwd.t_stat
        assert rev.p_value == fwd.p_value
        assert rev.degrees_of_freedom == fwd.degrees_of_freedom

    def test_location_and_scale_invariance(self):
        rng = random.Random(31)
        for _ in range(100):
            a = [rng.gauss(0, 1) for _ in range(rng.randrange(3, 12))]
            b = [rng.gauss(0.5, 2) for _ in range(rng.randrange(3, 12))]
            base = welch_t_test(a, b)
            shift = rng.uniform(-50, 50)
            shifted = welch_t_test([x + shift for x in a], [x + shift for x in b])
            assert shifted.t_stat == pytest.approx(base.t_stat, rel=1e-10, abs=1e-10)
            assert shifted.degrees_of_freedom == pytest.approx(base.degrees_of_freedom, rel=1e-10)
            assert shifted.p_value == pytest.approx(base.p_value, rel=1e-10, abs=1e-12)
            scale = rng.uniform(0.01, 100)
            scaled = welch_t_test([x * scale for x in a], [x * scale for x in b])
            assert scaled.t_stat == pytest.approx(base.t_stat, rel=1e-10, abs=1e-10)
            assert scaled.p_value == pytest.approx(base.p_value, rel=1e-10, abs=1e-12)

    def test_small_sample_analytic_oracle(self):
        # direct Welch formulas plus the t-distribution tail, evaluated by an
        # independent library path (scipy), for every small-sample fixture
        scipy_stats = pytest.importorskip("scipy.stats")
        fixtures = [
            ([1.0, 2.0], [3.0, 5.0, 9.0]),
            ([0.1, 0.2, 0.15, 0.4], [0.3, 0.35]),
            ([10, 12, 9, 14, 11, 13], [9, 8, 7, 11, 10]),
            ([1, 2, 3, 4, 5], [2, 3, 4, 5, 6]),
            ([0.0, 1.0, 0.0, 2.0], [5.0, 6.0, 7.0, 8.0, 9.0, 10.0]),
        ]
        for a, b in fixtures:
            mine = welch_t_test(a, b)
            ref = scipy_stats.ttest_ind(a, b, equal_var=False)
            assert mine.t_stat == pytest.approx(ref.statistic, rel=1e-8)
            assert mine.degrees_of_freedom == pytest.approx(ref.df, rel=1e-8)
            assert mine.p_value == pytest.approx(ref.pvalue, rel=1e-8)

    def test_pooled_variant(self):
        scipy_stats = pytest.importorskip("scipy.stats")
        a = [1.0, 4.0, 2.0, 8.0]
        b = [2.0, 3.0, 3.5]
        mine = welch_t_test(a, b, pooled=True)
        ref = scipy_stats.ttest_ind(a, b, equal_var=True)
        assert mine.t_stat == pytest.approx(ref.statistic, rel=1e-10)
        assert mine.degrees_of_freedom == 5.0
        assert mine.p_value == pytest.approx(ref.pvalue, rel=1e-10)

    def test_sample_too_small(self):
        with pytest.raises(ValueError, match="at least 2"):
            welch_t_test([1.0], [1.0, 2.0])

    def test_zero_variance_rejected(self):
        with pytest.raises(ValueError, match="variance"):
            welch_t_test([2.0, 2.0, 2.0], [1.0, 2.0, 3.0])

    def test_both_constant_equal_means_convention(self):
        result = welch_t_test([3.0, 3.0], [3.0, 3.0, 3.0])
        assert result.t_stat == 0.0
        assert result.p_value == 1.0

    def test_both_constant_unequal_means_rejected(self):
        with pytest.raises(ValueError, match="zero variance"):
            welch_t_test([3.0, 3.0], [4.0, 4.0])


class TestIncompleteBeta:
    def test_endpoints(self):
        assert regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0
        assert regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0

    def test_against_reference(self):
        scipy_special = pytest.importorskip("scipy.special")
        rng = random.Random(41)
        for _ in range(2000):
            a = 10 ** rng.uniform(-1, 3)
            b = 10 ** rng.uniform(-1, 1)
            x = rng.uniform(0.001, 0.999)
            ref = scipy_special.betainc(a, b, x)
            if ref < 1e-300:
                continue
            assert regularized_incomplete_beta(a, b, x) == pytest.approx(ref, rel=1e-10)

    def test_p_value_against_reference(self):
        scipy_stats = pytest.importorskip("scipy.stats")
        rng = random.Random(43)
        for _ in range(1000):
            df = 10 ** rng.uniform(0, 3)
            t = rng.gauss(0, 3)
            ref = 2 * scipy_stats.t.sf(abs(t), df)
            assert student_t_two_sided_p(t, df) == pytest.approx(ref, rel=1e-10)

    def test_p_always_in_unit_interval(self):
        rng = random.Random(47)
        for _ in range(2000):
            df = 10 ** rng.uniform(-0.3, 4)
            t = rng.gauss(0, 10)
            assert 0.0 <= student_t_two_sided_p(t, df) <= 1.0


class TestFitLogNormal:
    def test_two_point_fit(self):
        fit = fit_log_normal([1.0, math.e ** 2])
        assert fit.mu == pytest.approx(1.0, rel=1e-12)
        assert fit.sigma == pytest.approx(1.0, rel=1e-12)

    def test_constant_sample_rejected(self):
        with pytest.raises(ValueError, match="constant"):
            fit_log_normal([math.e, math.e, math.e])

    def test_nonpositive_rejected(self):
        with pytest.raises(ValueError):
            fit_log_normal([1.0, 0.0])
        with pytest.raises(ValueError):
            fit_log_normal([1.0, -2.0])

    def test_too_few_values(self):
        with pytest.raises(ValueError):
            fit_log_normal([1.0])

    def test_monte_carlo_recovery(self):
        rng = np.random.default_rng(99)
        sample = rng.lognormal(mean=0.5, sigma=0.8, size=100_000)
        fit = fit_log_normal(sample)
        assert fit.mu == pytest.approx(0.5, abs=0.02)
        assert fit.sigma == pytest.approx(0.8, abs=0.02)

    def test_scaling_equivariance(self):
        rng = np.random.default_rng(5)
        values = rng.lognormal(0.0, 1.0, size=200)
        base = fit_log_normal(values)
        for k in (0.001, 0.5, 3.0, 1e6):
            scaled = fit_log_normal(values * k)
            assert scaled.mu == pytest.approx(base.mu + math.log(k), rel=1e-12, abs=1e-12)
            assert scaled.sigma == pytest.approx(base.sigma, rel=1e-12)
