import math

import numpy as np
import pytest

from intrinsic_volumes.closed_forms import BodyFamily, v1_sobolev_exact
from intrinsic_volumes.errors import BudgetError, DomainError
from intrinsic_volumes.experiments import (
    DIST_IDENTITIES,
    ESTIMATORS,
    EXACT,
    path_block,
    polytope_body,
    polytope_exact,
    random_spd,
    resolve_estimator,
    run_dist,
    status_of,
    width_means,
)
from intrinsic_volumes.geometry import polytope_volume


def test_sudakov_alias():
    assert resolve_estimator("sudakov_pinf_LBB", {"k": 1}) == ("sudakov", {"k": 1, "family": "Linf_BB"})
    assert resolve_estimator("walk_hull", {}) == ("walk_hull", {})
    with pytest.raises(DomainError):
        resolve_estimator("sudakov_p2_KBM", {})


def test_every_exact_experiment_runs_on_defaults():
    for name, fn in EXACT.items():
        rows = fn({})
        assert rows, name
        assert all(r["experiment"] == name for r in rows)
        assert all("exact" in r or "error" in r for r in rows)


def test_exact_rows_report_errors_per_row():
    rows = EXACT["vk_simplex"]({"n": [3, 2000], "k": 5, "family": "BM"})
    assert [r.get("status") for r in rows] == [2, 3]


def test_status_codes():
    assert status_of(BudgetError("x")) == 3
    assert status_of(DomainError("x")) == 2


def test_path_block_bounds_memory():
    assert path_block(4096) * 4097 <= 2**23
    assert path_block(10**8) == 1


def test_width_means_sudakov_k1_bm():
    res = width_means([BodyFamily.from_label("K1_BM")], 1024, 20_000, 3, 1, True)[0]
    assert abs(res.estimate - math.pi) < 4 * res.std_error


def test_random_spd_is_symmetric_positive():
    s = random_spd(3, 11)
    assert np.allclose(s, s.T)
    assert np.linalg.eigvalsh(s).min() > 0
    assert np.array_equal(s, random_spd(3, 11))


def test_polytope_bodies():
    assert polytope_volume(polytope_body("cube")) == pytest.approx(1.0)
    assert polytope_exact("cube", 2) == 3.0
    assert polytope_volume(polytope_body("T3_BM")) == pytest.approx(1 / 6)
    with pytest.raises(DomainError):
        polytope_body("T9_BM")


@pytest.mark.parametrize("name", ["walk_hull", "walk_zonotope", "laplace", "rivin", "ellipsoid_v1"])
def test_small_estimator_runs_verify(name):
    for est in ESTIMATORS[name]({}, 20_000, 5, 1):
        assert est.report().passed, (est.name, est.report())


def test_self_test_distribution():
    rec = run_dist("self_test", 2000, 4)
    assert rec["pass"] and 0 < rec["p_value"] <= 1
    assert rec["n_x"] == rec["n_y"] == 2000


def test_identity_table():
    assert set(DIST_IDENTITIES) == {"K1_BM", "L1_BM", "K1_BB", "L1_BB"}
    x = np.array([0.25, 1.0])
    assert np.allclose(DIST_IDENTITIES["K1_BM"].transform(x), [4.0, 2.0])
    assert np.allclose(DIST_IDENTITIES["L1_BB"].transform(x), [math.pi / 4, math.pi / 2])
    with pytest.raises(DomainError):
        run_dist("K2_BM", 100, 1)


def test_table_value_for_centred_bridge_is_as_printed():
    assert v1_sobolev_exact(BodyFamily("K", "CBB", "inf")) == pytest.approx(2 / math.sqrt(3), rel=1e-15)
