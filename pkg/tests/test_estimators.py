import math

import numpy as np
import pytest
from scipy import stats

from intrinsic_volumes.errors import DomainError, NonFiniteDrawError
from intrinsic_volumes.estimators import (
    McResult,
    kolmogorov_survival,
    ks_two_sample,
    mc_collect,
    mc_mean,
    mc_means,
    tsirelson_vk,
    verify,
    verify_band,
)
from intrinsic_volumes.gaussian_sim import sample_weighted_chisq_batch, sample_widths
from intrinsic_volumes.rng import RngStream


def gaussian(rng, count):
    return rng.normal(count)


def mc(estimate, se):
    return McResult(estimate, se, 100, 1, 1)


class TestVerify:
    def test_examples(self):
        ok = verify("a", 2.0, mc(2.001, 0.001))
        assert ok.z_score == pytest.approx(1.0) and ok.passed
        bad = verify("b", 2.0, mc(2.02, 0.001))
        assert bad.z_score == pytest.approx(20.0) and not bad.passed

    def test_zero_standard_error(self):
        assert verify("c", 1.0, mc(1.0, 0.0)).passed
        r = verify("d", 1.0, mc(1.5, 0.0))
        assert math.isinf(r.z_score) and not r.passed

    def test_sudakov_pi(self):
        rng_draws = lambda rng, count: math.sqrt(2 * math.pi) / 2 * sample_widths("K", "BM", 1, 1024, rng, count, True)
        assert verify("k1bm", math.pi, mc_mean(rng_draws, 100_000, 5)).passed

    def test_band(self):
        assert verify_band("e", 1.0, mc(0.98, 0.001), 0.97).passed
        assert not verify_band("f", 1.0, mc(0.95, 0.001), 0.97).passed
        assert not verify_band("g", 1.0, mc(1.02, 0.001), 0.97).passed

    def test_report_dict(self):
        d = verify("h", 1.0, mc(1.0, 0.5)).to_dict()
        assert d["pass"] is True and d["name"] == "h" and d["n_samples"] == 100

    def test_false_failures_stay_rare_as_samples_grow(self):
        for n in (100, 1000, 10_000):
            fails = sum(not verify("null", 0.0, mc_mean(gaussian, n, seed)).passed for seed in range(100))
            assert fails <= 2


class TestMonteCarlo:
    def test_worker_count_is_bit_identical(self):
        runs = [mc_mean(gaussian, 50_000, 99, workers=w, block_size=1000) for w in (1, 2, 8)]
        assert len({(r.estimate, r.std_error) for r in runs}) == 1

    def test_multi_column(self):
        res = mc_means(lambda rng, c: rng.uniform_rows(c, 2), 20_000, 3)
        assert len(res) == 2
        for r in res:
            assert abs(r.estimate - 0.5) < 4 * r.std_error

    def test_collect_order(self):
        draws = mc_collect(gaussian, 10, 4, block_size=4)
        assert np.array_equal(draws[:4], RngStream(4, 0).normal(4))
        assert np.array_equal(draws[4:8], RngStream(4, 1).normal(4))

    def test_non_finite_draws_are_located(self):
        def sampler(rng, count):
            x = rng.normal(count)
            x[2] = math.nan
            return x

        with pytest.raises(NonFiniteDrawError, match="stream_id 0"):
            mc_mean(sampler, 10, 1)

    def test_argument_checks(self):
        with pytest.raises(DomainError):
            mc_mean(gaussian, 1, 1)
        with pytest.raises(DomainError):
            mc_collect(gaussian, 10, 1, workers=0)

    def test_scaled(self):
        r = mc(2.0, 0.5).scaled(-3.0)
        assert (r.estimate, r.std_error) == (-6.0, 1.5)


class TestTsirelson:
    def test_segment(self):
        v = np.array([3.0])

        def body(rng, count):
            g = rng.normal(count)
            return np.stack([np.zeros(count), g * v[0]], axis=1)[:, :, None]

        res = tsirelson_vk(body, 1, 100_000, 6)
        assert abs(res.estimate - 3.0) < 3 * res.std_error

    def test_planar_segment(self):
        v = np.array([[1.0, 2.0]])

        def body(rng, count):
            g = rng.normal_rows(count, 2)
            return np.stack([np.zeros((count, 1)), g @ v.T], axis=1).reshape(count, 2, 1)

        res = tsirelson_vk(body, 1, 100_000, 7)
        assert abs(res.estimate - math.sqrt(5)) < 3 * res.std_error

    def test_unit_square_area(self):
        # projecting the square by a standard Gaussian 2x2 matrix
        sq = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])

        def body(rng, count):
            g = rng.normal_rows(count, 4).reshape(count, 2, 2)
            return sq @ g

        res = tsirelson_vk(body, 2, 100_000, 8)
        assert abs(res.estimate - 1.0) < 3 * res.std_error

    def test_shape_errors(self):
        with pytest.raises(DomainError):
            tsirelson_vk(lambda rng, c: np.zeros((c, 2, 2)), 1, 10, 1)
        with pytest.raises(DomainError):
            tsirelson_vk(lambda rng, c: np.zeros((c, 2, 7)), 7, 10, 1)


class TestKs:
    def test_null_calibration(self):
        rejections = 0
        for rep in range(200):
            x = RngStream(rep, 0).normal(500)
            y = RngStream(rep, 1).normal(500)
            rejections += ks_two_sample(x, y).p_value < 0.05
        assert abs(rejections / 200 - 0.05) <= 0.04

    def test_power(self):
        x = RngStream(1, 0).normal(10_000)
        y = RngStream(1, 1).normal(10_000) + 0.5
        assert ks_two_sample(x, y).p_value < 1e-6

    def test_statistic_matches_scipy(self):
        x = RngStream(2, 0).normal(300)
        y = RngStream(2, 1).normal(450) * 1.2
        mine = ks_two_sample(x, y)
        ref = stats.ks_2samp(x, y, method="asymp")
        assert mine.statistic == pytest.approx(ref.statistic, abs=1e-15)
        assert mine.p_value == pytest.approx(ref.pvalue, rel=0.1, abs=1e-3)

    def test_ties(self):
        x = np.repeat(np.arange(10.0), 10)
        assert ks_two_sample(x, x.copy()).statistic == 0.0
        y = np.repeat(np.arange(1.0, 11.0), 10)
        assert ks_two_sample(x, y).statistic == pytest.approx(0.1)

    def test_kolmogorov_survival(self):
        for lam in (0.3, 0.7, 0.99, 1.0, 1.36, 2.5):
            assert kolmogorov_survival(lam) == pytest.approx(stats.kstwobign.sf(lam), rel=1e-9, abs=1e-15)
        assert kolmogorov_survival(0.0) == 1.0

    def test_small_samples_rejected(self):
        with pytest.raises(DomainError):
            ks_two_sample(np.zeros(10), np.zeros(100))

    def test_bridge_sup_identity(self):
        widths = sample_widths("K", "BB", 1, 8192, RngStream(3), 10_000, sup_correction=True)
        series = math.pi * np.sqrt(sample_weighted_chisq_batch("S", 2, 10_000, RngStream(4), 10_000))
        assert ks_two_sample(widths, series).p_value > 1e-3
