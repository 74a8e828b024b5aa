import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from intrinsic_volumes.closed_forms import BodyFamily, ball_intrinsic_volume
from intrinsic_volumes.errors import DomainError
from intrinsic_volumes.gaussian_sim import (
    EllipsoidSpec,
    Path,
    ellipsoid_vk_mc,
    grid_max_shift,
    laplace_transform,
    path_functionals,
    path_norm,
    rivin_duality_check,
    sample_ellipsoid_functional,
    sample_path,
    sample_paths,
    sample_walk,
    sample_walks,
    sample_weighted_chisq,
    sample_weighted_chisq_batch,
    sample_width,
    sample_widths,
    series_tail,
    trapezoid_mean,
    widths_from_functionals,
)
from intrinsic_volumes.geometry import planar_hull_measures
from intrinsic_volumes.rng import RngStream

SQ2PI = math.sqrt(2 * math.pi)


def covariance(star, s, t):
    """Analytic covariance of the four processes."""
    bm = min(s, t)
    if star == "BM":
        return bm
    if star == "BB":
        return bm - s * t
    if star == "CBM":
        g = lambda u: u - u * u / 2
        return bm - g(s) - g(t) + 1 / 3
    g = lambda u: u * (1 - u) / 2
    return bm - s * t - g(s) - g(t) + 1 / 12


class TestPaths:
    @pytest.mark.parametrize("star", ["BM", "CBM", "BB", "CBB"])
    def test_grid_covariance(self, star):
        n = 20
        w = sample_paths(star, n, RngStream(1), 100_000)
        for i, j in [(2, 2), (5, 10), (10, 10), (4, 16), (18, 18)]:
            emp = np.mean(w[:, i] * w[:, j]) - w[:, i].mean() * w[:, j].mean()
            exact = covariance(star, i / n, j / n)
            # the centring uses the trapezoid rule, whose error is O(1/n^2)
            assert emp == pytest.approx(exact, rel=0.03, abs=3e-3)

    def test_bm_midpoint_variance(self):
        w = sample_paths("BM", 64, RngStream(2), 100_000)
        assert w[:, 0].max() == 0.0
        assert w[:, 32].var() == pytest.approx(0.5, rel=0.02)

    def test_bridge_ends_at_zero(self):
        p = sample_path("BB", 100, RngStream(3))
        assert p.values[0] == 0.0 and p.values[-1] == 0.0
        assert p.grid[-1] == 1.0

    def test_cbb_variance_is_constant(self):
        w = sample_paths("CBB", 50, RngStream(4), 100_000)
        for i in (0, 10, 25, 40, 50):
            assert w[:, i].var() == pytest.approx(1 / 12, rel=0.02)

    @pytest.mark.parametrize("star", ["CBM", "CBB"])
    def test_centred_paths_integrate_to_zero(self, star):
        w = sample_paths(star, 33, RngStream(5), 50)
        assert np.max(np.abs(trapezoid_mean(w))) < 1e-14

    def test_single_draw_matches_batch(self):
        batch = sample_paths("CBM", 16, RngStream(6), 3)
        rng = RngStream(6)
        single = np.stack([sample_path("CBM", 16, rng).values for _ in range(3)])
        assert np.array_equal(batch, single)

    def test_bad_arguments(self):
        with pytest.raises(DomainError):
            sample_paths("XX", 10, RngStream(1), 1)
        with pytest.raises(DomainError):
            sample_paths("BM", 0, RngStream(1), 1)


class TestPathNorm:
    def test_constant_path(self):
        assert path_norm(np.full(11, -2.5), 1) == pytest.approx(2.5)

    def test_ramp(self):
        n = 1000
        t = np.linspace(0, 1, n + 1)
        assert path_norm(Path("BM", n, t), 2) == pytest.approx(1 / math.sqrt(3), abs=1 / n**2)

    def test_positive_part_of_nonpositive_path(self):
        x = -np.abs(RngStream(7).normal(50))
        for q in (1, 2, "inf"):
            assert path_norm(x, q, positive_part=True) == 0.0

    def test_sup_and_correction(self):
        x = np.array([0.0, 0.3, -0.7, 0.1])
        assert path_norm(x, "inf") == 0.7
        assert path_norm(x, "inf", sup_correction=True) == pytest.approx(0.7 + grid_max_shift(3))
        assert grid_max_shift(1) == pytest.approx(0.5825971579390107, rel=1e-12)

    def test_kernel_table_matches_direct_norms(self):
        n = 40
        table = path_functionals(n, RngStream(8), 5)
        paths = {s: sample_paths(s, n, RngStream(8), 5) for s in ("BM", "CBM", "BB", "CBB")}
        for si, star in enumerate(("BM", "CBM", "BB", "CBB")):
            for r in range(5):
                x = paths[star][r]
                expect = [
                    path_norm(x, "inf"), path_norm(x, "inf", True), path_norm(-x, "inf", True),
                    path_norm(x, 1), path_norm(x, 1, True), path_norm(-x, 1, True),
                    path_norm(x, 2), path_norm(x, 2, True), path_norm(-x, 2, True),
                ]
                assert np.allclose(table[r, si], expect, rtol=1e-12, atol=1e-14)


class TestWidths:
    def test_k1_bm_mean(self):
        draws = sample_widths("K", "BM", 1, 1024, RngStream(9), 100_000, sup_correction=True)
        est = SQ2PI / 2 * draws.mean()
        se = SQ2PI / 2 * draws.std() / math.sqrt(draws.size)
        assert abs(est - math.pi) < 4 * se

    def test_k1_bb_mean(self):
        draws = sample_widths("K", "BB", 1, 1024, RngStream(10), 100_000, sup_correction=True)
        est = SQ2PI / 2 * draws.mean()
        se = SQ2PI / 2 * draws.std() / math.sqrt(draws.size)
        assert abs(est - math.pi * math.log(2)) < 4 * se

    def test_linf_bb_mean(self):
        draws = sample_widths("L", "BB", "inf", 512, RngStream(11), 100_000)
        se = draws.std() / math.sqrt(draws.size)
        # 2 V_1 / sqrt(2 pi) with V_1 = pi / 8
        assert abs(draws.mean() - math.sqrt(2 / math.pi) * math.pi / 8) < 4 * se

    def test_single_width_matches_batch(self):
        rng = RngStream(12)
        single = [sample_width("L", "BM", 1, 64, rng) for _ in range(4)]
        batch = sample_widths("L", "BM", 1, 64, RngStream(12), 4)
        assert np.allclose(single, batch, rtol=1e-12)

    @given(st.integers(0, 2**32), st.sampled_from(["BM", "BB"]), st.sampled_from([1, 2, "inf"]))
    def test_nonnegative_and_l_below_k(self, seed, star, p):
        table = path_functionals(32, RngStream(seed), 20)
        k = widths_from_functionals(table, BodyFamily("K", star, p))
        lw = widths_from_functionals(table, BodyFamily("L", star, p))
        assert np.all(k >= 0) and np.all(lw >= 0)
        assert np.all(lw <= k + 1e-12)

    def test_centred_l_rejected(self):
        with pytest.raises(DomainError):
            sample_width("L", "CBM", 1, 10, RngStream(1))


class TestWalks:
    def test_walk_variance(self):
        s = sample_walks(2, 10, RngStream(13), 100_000)
        assert s[:, 3, 1].var() == pytest.approx(4.0, rel=0.02)
        assert s[:, 9, 0].var() == pytest.approx(10.0, rel=0.02)

    def test_bridge_variance_and_end(self):
        n = 10
        s = sample_walks(1, n, RngStream(14), 100_000, bridge=True)
        assert np.all(s[:, -1, 0] == 0.0)
        for i in (1, 4, 7):
            assert s[:, i - 1, 0].var() == pytest.approx(i * (n - i) / n, rel=0.02)

    def test_single_walk_shape(self):
        assert sample_walk(3, 5, RngStream(15)).shape == (5, 3)

    def test_bridge_reversal_symmetry(self):
        n, count = 8, 40_000
        s = sample_walks(2, n, RngStream(16), count, bridge=True)
        steps = np.diff(np.concatenate([np.zeros((count, 1, 2)), s], axis=1), axis=1)
        rev = np.cumsum(steps[:, ::-1], axis=1)
        origin = np.zeros((count, 1, 2))
        a = planar_hull_measures(np.concatenate([origin, s], axis=1))[:, 0]
        b = planar_hull_measures(np.concatenate([origin, rev], axis=1))[:, 0]
        z = (a.mean() - b.mean()) / math.sqrt((a.var() + b.var()) / count)
        assert abs(z) < 3


class TestSeries:
    def test_means(self):
        s = sample_weighted_chisq_batch("S", 2, 2000, RngStream(17), 100_000)
        c = sample_weighted_chisq_batch("C", 2, 2000, RngStream(18), 100_000)
        assert s.mean() == pytest.approx(1 / 3, rel=0.02)
        assert c.mean() == pytest.approx(1.0, rel=0.02)

    def test_odd_multiplicity_mean(self):
        m = sample_weighted_chisq_batch("S", 3, 500, RngStream(19), 100_000)
        assert m.mean() == pytest.approx(0.5, rel=0.02)

    def test_root_mean_gives_e2(self):
        m = sample_weighted_chisq_batch("S", 2, 2000, RngStream(20), 100_000)
        v = SQ2PI * np.sqrt(m)
        assert abs(v.mean() - 2 * math.log(2)) < 4 * v.std() / math.sqrt(v.size)

    def test_single_draw(self):
        rng = RngStream(21)
        a = [sample_weighted_chisq("C", 4, 100, rng) for _ in range(3)]
        assert np.allclose(a, sample_weighted_chisq_batch("C", 4, 100, RngStream(21), 3))

    def test_tail(self):
        assert series_tail("S", 1) == pytest.approx(1 / 6 - 1 / math.pi**2, rel=1e-12)
        assert series_tail("C", 10**6) == pytest.approx(1 / (math.pi**2 * 1e6), rel=1e-3)

    @pytest.mark.parametrize("family", ["S", "C"])
    @pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
    def test_laplace(self, family, t):
        m = sample_weighted_chisq_batch(family, 2, 2000, RngStream(22), 50_000)
        e = np.exp(-t * m)
        assert abs(e.mean() - laplace_transform(family, 2, t)) < 3 * e.std() / math.sqrt(e.size)

    def test_laplace_at_zero(self):
        assert laplace_transform("S", 4, 0.0) == 1.0
        assert laplace_transform("C", 4, 0.0) == 1.0


class TestEllipsoids:
    def test_single_axis(self):
        res = ellipsoid_vk_mc(EllipsoidSpec.explicit([1.5]), 1, 100_000, 23)
        assert abs(res.estimate - 3.0) < 3 * res.std_error

    def test_e4(self):
        res = ellipsoid_vk_mc(EllipsoidSpec.series("E", 4, 2000), 1, 100_000, 24)
        assert abs(res.estimate - 2.0) < 4 * res.std_error

    def test_ellipse_area(self):
        res = ellipsoid_vk_mc(EllipsoidSpec.explicit([2.0, 0.5]), 2, 100_000, 25)
        assert abs(res.estimate - math.pi) < 3 * res.std_error

    def test_too_few_axes_is_zero(self):
        assert sample_ellipsoid_functional(EllipsoidSpec.explicit([1.0]), 2, RngStream(1)) == 0.0

    def test_truncation_consistency(self):
        a = ellipsoid_vk_mc(EllipsoidSpec.series("F", 2, 200), 2, 20_000, 26)
        b = ellipsoid_vk_mc(EllipsoidSpec.series("F", 2, 2000), 2, 20_000, 27)
        assert abs(a.estimate - b.estimate) < 4 * math.hypot(a.std_error, b.std_error)

    def test_spec_validation(self):
        with pytest.raises(DomainError):
            EllipsoidSpec()
        with pytest.raises(DomainError):
            EllipsoidSpec.explicit([1.0, -1.0])
        with pytest.raises(DomainError):
            EllipsoidSpec.series("Q", 2)


class TestRivin:
    def test_ball(self):
        left, dual = rivin_duality_check(np.eye(3), 1, 50_000, 28)
        exact = ball_intrinsic_volume(3, 1)
        assert exact == pytest.approx(4.0)
        assert abs(left.estimate - exact) < 3 * left.std_error
        assert abs(dual.estimate - exact) < 3 * dual.std_error

    def test_diag(self):
        left, dual = rivin_duality_check(np.diag([4.0, 1.0]), 1, 50_000, 29)
        assert abs(left.estimate - dual.estimate) < 3 * math.hypot(left.std_error, dual.std_error)

    def test_scaling(self):
        sigma = np.array([[2.0, 0.3, 0.0], [0.3, 1.0, 0.2], [0.0, 0.2, 0.5]])
        a, _ = rivin_duality_check(sigma, 1, 50_000, 30)
        b, _ = rivin_duality_check(9 * sigma, 1, 50_000, 31)
        assert abs(b.estimate - 3 * a.estimate) < 3 * math.hypot(b.std_error, 3 * a.std_error)

    def test_rejects_bad_sigma(self):
        with pytest.raises(DomainError):
            rivin_duality_check(np.array([[1.0, 2.0], [2.0, 1.0]]), 1, 10, 1)
        with pytest.raises(DomainError):
            rivin_duality_check(np.array([[1.0, 0.5], [0.0, 1.0]]), 1, 10, 1)
        with pytest.raises(DomainError):
            rivin_duality_check(np.eye(3), 3, 10, 1)
