"""Named experiments shared by the command line and the acceptance battery.

Three registries:

* ``EXACT``: closed-form tables, one row per parameter combination;
* ``ESTIMATORS``: Monte Carlo estimates, each paired with the closed form it
  should reproduce (``mc`` reports the estimate, ``verify`` the verdict);
* ``DIST_IDENTITIES``: equalities in law between simulated widths and
  transforms of weighted chi-square series, checked with a two-sample KS test.

Parameters arrive as a plain dict (keys ``n``, ``k``, ``m``, ``family``,
``star``, ``p``, ``n_steps``, ``mode``, ...); missing keys take the defaults
listed in each experiment's docstring.  Integer parameters may be lists.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Optional

import numpy as np

from .closed_forms import (
    CONTINUUM_FAMILIES,
    BodyFamily,
    ball_intrinsic_volume,
    ellipsoid_v1_table,
    expected_brownian_zonoid_volume,
    expected_hull_vm,
    expected_walk_hull,
    expected_walk_zonotope,
    v1_sobolev_exact,
    vk_continuum,
    vk_simplex_discrete,
    vk_zonotope_discrete,
)
from .errors import BudgetError, DomainError, UnsupportedError
from .estimators import DEFAULT_Z, VerifyReport, ks_two_sample, tsirelson_vk, verify, verify_band
from .gaussian_sim import (
    L1_ABS,
    STAR_INDEX,
    EllipsoidSpec,
    ellipsoid_vk_mc,
    laplace_transform,
    path_functionals,
    rivin_duality_check,
    sample_walks,
    sample_weighted_chisq_batch,
    widths_from_functionals,
)
from .geometry import (
    Polytope,
    convex_hull,
    kubota_vm_mc,
    planar_hull_measures,
    simplex_points,
    steiner_fit,
)
from .montecarlo import McResult, mc_collect, mc_mean, mc_means
from .rng import RngStream

# stream ids of the second, independent sample in a two-sample comparison
SECOND_SAMPLE = 1 << 32
KS_THRESHOLD = 1e-3

Params = dict


def status_of(exc: BaseException) -> int:
    """Exit status for an error: 3 for budget overruns, 2 for bad parameters."""
    if isinstance(exc, BudgetError):
        return 3
    return 2


def path_block(n_steps: int, dim: int = 1) -> int:
    """Samples per block so one block of Gaussian increments stays near 64 MB."""
    return max(1, (1 << 23) // ((n_steps + 1) * dim))


def _ints(params: Params, key: str, default) -> list[int]:
    v = params.get(key)
    if v is None:
        v = default
    vals = v if isinstance(v, (list, tuple)) else [v]
    out = []
    for x in vals:
        if isinstance(x, bool) or int(x) != x:
            raise DomainError(f"{key} must be an integer, got {x!r}")
        out.append(int(x))
    return out


def _int(params: Params, key: str, default: int) -> int:
    vals = _ints(params, key, default)
    if len(vals) != 1:
        raise DomainError(f"{key} takes a single value here, got {vals}")
    return vals[0]


def _str(params: Params, key: str, default: Optional[str], allowed=None) -> Optional[str]:
    v = params.get(key)
    v = default if v is None else str(v)
    if allowed is not None and v not in allowed:
        raise DomainError(f"{key} must be one of {tuple(allowed)}, got {v!r}")
    return v


def _walk_family(params: Params) -> str:
    return _str(params, "family", "BM", ("BM", "BB"))


# exact tables


def _row(name: str, params: Params, compute: Callable[[], float]) -> dict:
    try:
        return {"experiment": name, "params": params, "exact": float(compute())}
    except (DomainError, BudgetError) as exc:
        return {"experiment": name, "params": params, "error": str(exc), "status": status_of(exc)}


def exact_vk_continuum(params: Params) -> list[dict]:
    """family in CONTINUUM_FAMILIES (default Kinf_BM), k (default 1..5)."""
    family = _str(params, "family", "Kinf_BM", CONTINUUM_FAMILIES)
    return [
        _row("vk_continuum", {"family": family, "k": k}, lambda k=k: vk_continuum(family, k))
        for k in _ints(params, "k", [1, 2, 3, 4, 5])
    ]


_V1_BODIES = ("K1_BM", "K1_BB", "L1_BM", "L1_BB", "Kinf_BM", "Kinf_BB", "Kinf_CBM", "Kinf_CBB", "Linf_BM", "Linf_BB")


def exact_sobolev_v1(params: Params) -> list[dict]:
    """family: a body label such as K1_BM (default: every body with a closed form)."""
    labels = [params["family"]] if params.get("family") else list(_V1_BODIES)
    rows = []
    for label in labels:
        rows.append(_row("sobolev_v1", {"family": label}, lambda label=label: v1_sobolev_exact(BodyFamily.from_label(label))))
    return rows


def _discrete(name: str, fn: Callable[[int, int, str], float]) -> Callable[[Params], list[dict]]:
    def table(params: Params) -> list[dict]:
        family = _walk_family(params)
        return [
            _row(name, {"n": n, "k": k, "family": family}, lambda n=n, k=k: fn(n, k, family))
            for n in _ints(params, "n", 3)
            for k in _ints(params, "k", 1)
        ]

    table.__doc__ = "n (default 3), k (default 1), family BM or BB."
    return table


def exact_ellipsoid_table(params: Params) -> list[dict]:
    """V_1 of E_2, E_4, F_2, F_4."""
    return [
        _row("ellipsoid_table", {"family": fam, "d": d}, lambda fam=fam, d=d: ellipsoid_v1_table(fam, d))
        for fam in ("E", "F")
        for d in (2, 4)
    ]


def exact_walk_hull(params: Params) -> list[dict]:
    """E V_m of a walk hull: n (default 6), k dimension (default 2), m (default k)."""
    family = _walk_family(params)
    rows = []
    for n in _ints(params, "n", 6):
        for k in _ints(params, "k", 2):
            for m in _ints(params, "m", k):
                p = {"n": n, "k": k, "m": m, "family": family}
                rows.append(_row("walk_hull", p, lambda n=n, k=k, m=m: expected_walk_hull(n, k, m, family)))
    return rows


def exact_walk_zonotope(params: Params) -> list[dict]:
    """E Vol_k of the zonotope of walk positions: n (default 2), k (default 1)."""
    family = _walk_family(params)
    return [
        _row("walk_zonotope", {"n": n, "k": k, "family": family}, lambda n=n, k=k: expected_walk_zonotope(n, k, family))
        for n in _ints(params, "n", 2)
        for k in _ints(params, "k", 1)
    ]


def exact_hull_volume(params: Params) -> list[dict]:
    """E V_m of a Brownian hull in R^k: k (default 2), m (default k)."""
    family = _walk_family(params)
    return [
        _row("hull_volume", {"k": k, "m": m, "family": family}, lambda k=k, m=m: expected_hull_vm(k, m, family))
        for k in _ints(params, "k", 2)
        for m in _ints(params, "m", k)
    ]


def exact_zonoid(params: Params) -> list[dict]:
    """E Vol_k of a Brownian zonoid: k (default 1..3), mode (default both)."""
    family = _walk_family(params)
    modes = [params["mode"]] if params.get("mode") else ["via_tsirelson", "as_printed"]
    return [
        _row(
            "zonoid",
            {"k": k, "family": family, "mode": mode},
            lambda k=k, mode=mode: expected_brownian_zonoid_volume(k, family, mode),
        )
        for k in _ints(params, "k", [1, 2, 3])
        for mode in modes
    ]


def exact_ball(params: Params) -> list[dict]:
    """V_k of the unit ball in R^n: n (default 3), k (default 0..n)."""
    rows = []
    for n in _ints(params, "n", 3):
        for k in _ints(params, "k", list(range(n + 1))):
            rows.append(_row("ball", {"n": n, "k": k}, lambda n=n, k=k: ball_intrinsic_volume(n, k)))
    return rows


EXACT: dict[str, Callable[[Params], list[dict]]] = {
    "vk_continuum": exact_vk_continuum,
    "sobolev_v1": exact_sobolev_v1,
    "vk_simplex": _discrete("vk_simplex", vk_simplex_discrete),
    "vk_zonotope": _discrete("vk_zonotope", vk_zonotope_discrete),
    "ellipsoid_table": exact_ellipsoid_table,
    "walk_hull": exact_walk_hull,
    "walk_zonotope": exact_walk_zonotope,
    "hull_volume": exact_hull_volume,
    "zonoid": exact_zonoid,
    "ball": exact_ball,
}


# Monte Carlo estimators paired with closed forms


@dataclass(frozen=True)
class Estimate:
    """A Monte Carlo estimate with the value it should reproduce.

    ``band`` marks a known one-sided bias: the check then accepts
    ``exact * [band[0], band[1]]`` widened by the z threshold.
    """

    name: str
    params: dict
    mc: McResult
    exact: Optional[float] = None
    band: Optional[tuple] = None

    def report(self, z_threshold: float = DEFAULT_Z) -> VerifyReport:
        if self.exact is None:
            raise DomainError(f"{self.name} has no exact value to verify against")
        if self.band is not None:
            return verify_band(self.name, self.exact, self.mc, self.band[0], self.band[1], z_threshold)
        return verify(self.name, self.exact, self.mc, z_threshold)


def _body(params: Params) -> BodyFamily:
    if params.get("family"):
        return BodyFamily.from_label(params["family"])
    return BodyFamily(_str(params, "set_class", "K"), _str(params, "star", "BM"), params.get("p", 1))


SUDAKOV_SCALE = math.sqrt(2 * math.pi) / 2


def width_means(
    bodies: list[BodyFamily], n_steps: int, samples: int, seed: int, workers: int = 1, sup_correction: bool = True
) -> list[McResult]:
    """sqrt(2 pi)/2 * mean width of each body, all from one set of paths."""

    def sampler(rng: RngStream, count: int) -> np.ndarray:
        table = path_functionals(n_steps, rng, count)
        return np.stack([widths_from_functionals(table, b, n_steps, sup_correction) for b in bodies], axis=1)

    res = mc_means(sampler, samples, seed, workers, block_size=path_block(n_steps))
    return [r.scaled(SUDAKOV_SCALE) for r in res]


def est_sudakov(params: Params, samples: int, seed: int, workers: int) -> list[Estimate]:
    """V_1 of a Sobolev ball from its mean Gaussian width.

    family label (default K1_BM) or set_class/star/p; n_steps (default 4096);
    mode ``corrected`` (default) shifts grid maxima by the continuity
    correction, ``grid`` uses raw grid maxima.
    """
    body = _body(params)
    n_steps = _int(params, "n_steps", 4096)
    mode = _str(params, "mode", "corrected", ("corrected", "grid"))
    exact = v1_sobolev_exact(body)
    mc = width_means([body], n_steps, samples, seed, workers, mode == "corrected")[0]
    p = {"family": body.label, "n_steps": n_steps, "mode": mode}
    return [Estimate(f"sudakov_{body.label}", p, mc, exact)]


def _walk_points(k: int, n: int, rng: RngStream, count: int, bridge: bool, scale: float = 1.0) -> np.ndarray:
    s = sample_walks(k, n, rng, count, bridge)
    if scale != 1.0:
        s *= scale
    return np.concatenate([np.zeros((count, 1, k)), s], axis=1)


def est_walk_hull(params: Params, samples: int, seed: int, workers: int) -> list[Estimate]:
    """V_k of the discrete simplex from hulls of {0, S_1..S_n}: n (default 6), k (default 2)."""
    family = _walk_family(params)
    out = []
    for n in _ints(params, "n", 6):
        for k in _ints(params, "k", 2):
            exact = vk_simplex_discrete(n, k, family)
            mc = tsirelson_vk(lambda rng, c, k=k, n=n: _walk_points(k, n, rng, c, family == "BB"), k, samples, seed, workers)
            out.append(Estimate(f"walk_hull_{family}_n{n}_k{k}", {"n": n, "k": k, "family": family}, mc, exact))
    return out


def est_walk_perimeter(params: Params, samples: int, seed: int, workers: int) -> list[Estimate]:
    """Half-perimeter of a planar Gaussian walk hull: n (default 10)."""
    n = _int(params, "n", 10)
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    exact = math.sqrt(math.pi / 2) * math.fsum(1 / math.sqrt(j) for j in range(1, n + 1))

    def sampler(rng: RngStream, count: int) -> np.ndarray:
        return 0.5 * planar_hull_measures(_walk_points(2, n, rng, count, False))[:, 1]

    mc = mc_mean(sampler, samples, seed, workers)
    return [Estimate(f"walk_perimeter_n{n}", {"n": n}, mc, exact)]


def est_walk_zonotope(params: Params, samples: int, seed: int, workers: int) -> list[Estimate]:
    """Volume of the zonotope spanned by S_1..S_n in R^k: n (default 8), k (default 2).

    The bridge closed form is the tabulated sum, which is sqrt(n) times the
    geometric value, so the bridge estimate is compared with that sum / sqrt(n).
    """
    family = _walk_family(params)
    n = _int(params, "n", 8)
    k = _int(params, "k", 2)
    if not 1 <= k <= n:
        raise DomainError(f"need 1 <= k <= n, got n={n}, k={k}")
    subs = np.array(list(combinations(range(n), k)), dtype=np.int64)
    if len(subs) > 10**5:
        raise BudgetError(f"C({n},{k}) generator subsets exceed the per-sample budget")

    def sampler(rng: RngStream, count: int) -> np.ndarray:
        s = sample_walks(k, n, rng, count, family == "BB")
        return np.abs(np.linalg.det(s[:, subs])).sum(axis=1)

    exact = expected_walk_zonotope(n, k, family)
    if family == "BB":
        exact /= math.sqrt(n)
    mc = mc_mean(sampler, samples, seed, workers)
    return [Estimate(f"walk_zonotope_{family}_n{n}_k{k}", {"n": n, "k": k, "family": family}, mc, exact)]


HULL_BIAS_BAND = (0.97, 1.0)


def est_brownian_hull(params: Params, samples: int, seed: int, workers: int) -> list[Estimate]:
    """Area (k=2) or range (k=1) of the hull of a Brownian path on a grid.

    k (default 2), n_steps (default 20000).  The grid hull lies inside the
    continuum hull, so the estimate is biased low by O(n_steps^-1/2); the
    check accepts exact * [0.97, 1] widened by the z threshold.
    """
    family = _walk_family(params)
    k = _int(params, "k", 2)
    n_steps = _int(params, "n_steps", 20000)
    if k not in (1, 2):
        raise UnsupportedError("brownian_hull supports k = 1 or 2")
    scale = 1.0 / math.sqrt(n_steps)

    def sampler(rng: RngStream, count: int) -> np.ndarray:
        pts = _walk_points(k, n_steps, rng, count, family == "BB", scale)
        if k == 1:
            return pts[:, :, 0].max(axis=1) - pts[:, :, 0].min(axis=1)
        return planar_hull_measures(pts)[:, 0]

    mc = mc_mean(sampler, samples, seed, workers, block_size=path_block(n_steps, k))
    exact = expected_hull_vm(k, k, family)
    p = {"k": k, "family": family, "n_steps": n_steps}
    return [Estimate(f"brownian_hull_{family}_k{k}", p, mc, exact, HULL_BIAS_BAND)]


def zonoid_means(n_steps: int, samples: int, seed: int, workers: int = 1) -> dict[str, McResult]:
    """Mean of int_0^1 |X| for BM and BB (the k = 1 zonoid length)."""

    def sampler(rng: RngStream, count: int) -> np.ndarray:
        table = path_functionals(n_steps, rng, count)
        return table[:, [STAR_INDEX["BM"], STAR_INDEX["BB"]], L1_ABS]

    bm, bb = mc_means(sampler, samples, seed, workers, block_size=path_block(n_steps))
    return {"BM": bm, "BB": bb}


def est_zonoid_k1(params: Params, samples: int, seed: int, workers: int) -> list[Estimate]:
    """Length of the Brownian zonoid in R^1 against both closed-form modes.

    family (default BM), n_steps (default 4096).  The as_printed value is
    expected to fail.
    """
    family = _walk_family(params)
    n_steps = _int(params, "n_steps", 4096)
    mc = zonoid_means(n_steps, samples, seed, workers)[family]
    out = []
    for mode in ("via_tsirelson", "as_printed"):
        p = {"k": 1, "family": family, "mode": mode, "n_steps": n_steps}
        out.append(Estimate(f"zonoid_k1_{family}_{mode}", p, mc, expected_brownian_zonoid_volume(1, family, mode)))
    return out


def est_ellipsoid_v1(params: Params, samples: int, seed: int, workers: int) -> list[Estimate]:
    """V_1 = sqrt(2 pi) E sqrt(M) of E_d or F_d: family E/F (default E), d via k (default 2), truncation via n (default 10000)."""
    family = _str(params, "family", "E", ("E", "F"))
    truncation = _int(params, "n", 10_000)
    out = []
    for d in _ints(params, "k", 2):
        exact = ellipsoid_v1_table(family, d)
        mc = ellipsoid_vk_mc(EllipsoidSpec.series(family, d, truncation), 1, samples, seed, workers)
        out.append(Estimate(f"ellipsoid_v1_{family}{d}", {"family": family, "d": d, "truncation": truncation}, mc, exact))
    return out


LAPLACE_POINTS = (0.5, 1.0, 2.0)


def est_laplace(params: Params, samples: int, seed: int, workers: int) -> list[Estimate]:
    """E exp(-t M) of the S or C series at t = 0.5, 1, 2: family S/C (default S), d via k (default 2), truncation via n."""
    family = _str(params, "family", "S", ("S", "C"))
    d = _int(params, "k", 2)
    truncation = _int(params, "n", 10_000)
    ts = np.array(LAPLACE_POINTS)

    def sampler(rng: RngStream, count: int) -> np.ndarray:
        m = sample_weighted_chisq_batch(family, d, truncation, rng, count)
        return np.exp(-np.outer(m, ts))

    res = mc_means(sampler, samples, seed, workers)
    return [
        Estimate(
            f"laplace_{family}{d}_t{t:g}",
            {"family": family, "d": d, "t": float(t), "truncation": truncation},
            r,
            laplace_transform(family, d, float(t)),
        )
        for t, r in zip(ts, res)
    ]


def random_spd(dim: int, seed: int) -> np.ndarray:
    """A well-conditioned random SPD matrix, G G^T / dim + I/2 with G Gaussian."""
    g = RngStream(seed, SECOND_SAMPLE + 1).normal_rows(dim, dim)
    return g @ g.T / dim + 0.5 * np.eye(dim)


def est_rivin(params: Params, samples: int, seed: int, workers: int) -> list[Estimate]:
    """Both sides of the ellipsoid duality for sigma (default diag(4, 1)).

    ``sigma`` may be a matrix or ``"random"`` (size n, default 3); k (default 1).
    The dual side is reported as the estimate and the direct side, with its
    own standard error, as the comparison value.
    """
    sigma = params.get("sigma")
    if sigma is None:
        sigma = [[4.0, 0.0], [0.0, 1.0]]
    if isinstance(sigma, str):
        if sigma != "random":
            raise DomainError("sigma must be a matrix or 'random'")
        sigma = random_spd(_int(params, "n", 3), seed)
    sigma = np.asarray(sigma, dtype=np.float64)
    out = []
    for k in _ints(params, "k", 1):
        left, right = rivin_duality_check(sigma, k, samples, seed, workers)
        se = math.hypot(left.std_error, right.std_error)
        diff = McResult(right.estimate - left.estimate, se, samples, seed, workers)
        p = {"k": k, "sigma": sigma.tolist(), "direct": left.estimate, "dual": right.estimate}
        out.append(Estimate(f"rivin_n{sigma.shape[0]}_k{k}", p, diff, 0.0))
    return out


def polytope_body(name: str) -> Polytope:
    """square, cube, or T3_BM / T3_BB (the discrete simplices for n = 3)."""
    if name == "square":
        return convex_hull([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    if name == "cube":
        return convex_hull([[i, j, k] for i in (0.0, 1.0) for j in (0.0, 1.0) for k in (0.0, 1.0)])
    m = re.fullmatch(r"T(\d)_(BM|BB)", name)
    if m and 1 <= int(m.group(1)) <= 3:
        return convex_hull(simplex_points(int(m.group(1)), m.group(2)))
    raise DomainError(f"unknown body {name!r}; use square, cube, T<n>_BM or T<n>_BB with n <= 3")


def polytope_exact(name: str, k: int) -> float:
    if name == "square":
        return {1: 2.0, 2: 1.0}[k]
    if name == "cube":
        return {1: 3.0, 2: 3.0, 3: 1.0}[k]
    n, family = int(name[1]), name[3:]
    return vk_simplex_discrete(n, k, family)


STEINER_RADII = (0.1, 0.2, 0.3, 0.4, 0.5)


def est_steiner(params: Params, samples: int, seed: int, workers: int) -> list[Estimate]:
    """V_1..V_d of a polytope from parallel-body volumes: family is the body (default cube)."""
    name = _str(params, "family", "cube")
    poly = polytope_body(name)
    fit = steiner_fit(poly, STEINER_RADII, samples, seed, workers)
    return [
        Estimate(f"steiner_{name}_V{k}", {"family": name, "k": k}, fit.result(k, workers), polytope_exact(name, k))
        for k in range(1, poly.dim + 1)
    ]


def est_kubota(params: Params, samples: int, seed: int, workers: int) -> list[Estimate]:
    """V_m of a polytope from random projections: family is the body (default cube), m (default 1..d)."""
    name = _str(params, "family", "cube")
    poly = polytope_body(name)
    out = []
    for m in _ints(params, "m", list(range(1, poly.dim + 1))):
        mc = kubota_vm_mc(poly, m, samples, seed, workers)
        out.append(Estimate(f"kubota_{name}_V{m}", {"family": name, "m": m}, mc, polytope_exact(name, m)))
    return out


ESTIMATORS: dict[str, Callable[[Params, int, int, int], list[Estimate]]] = {
    "sudakov": est_sudakov,
    "walk_hull": est_walk_hull,
    "walk_perimeter": est_walk_perimeter,
    "walk_zonotope": est_walk_zonotope,
    "brownian_hull": est_brownian_hull,
    "zonoid_k1": est_zonoid_k1,
    "ellipsoid_v1": est_ellipsoid_v1,
    "laplace": est_laplace,
    "rivin": est_rivin,
    "steiner": est_steiner,
    "kubota": est_kubota,
}

_SUDAKOV_ALIAS = re.compile(r"sudakov_p(1|inf)_([KL])(BM|CBM|BB|CBB)")


def resolve_estimator(name: str, params: Params) -> tuple[str, Params]:
    """Map aliases such as ``sudakov_p1_KBM`` onto a registry entry."""
    m = _SUDAKOV_ALIAS.fullmatch(name)
    if m:
        return "sudakov", {**params, "family": f"{m.group(2)}{m.group(1)}_{m.group(3)}"}
    if name not in ESTIMATORS:
        raise DomainError(f"unknown experiment {name!r}; known: {sorted(ESTIMATORS)} or sudakov_p<1|inf>_<K|L><star>")
    return name, params


# distribution identities


@dataclass(frozen=True)
class DistIdentity:
    body: str
    family: str
    d: int
    factor: float
    inverse: bool
    statement: str

    def transform(self, m: np.ndarray) -> np.ndarray:
        return self.factor / np.sqrt(m) if self.inverse else self.factor * np.sqrt(m)


DIST_IDENTITIES = {
    "K1_BM": DistIdentity("K1_BM", "C", 2, 2.0, True, "wid(K1_BM) = 2 / sqrt(C_1)"),
    "L1_BM": DistIdentity("L1_BM", "C", 4, 2.0, True, "wid(L1_BM) = 2 / sqrt(C_2)"),
    "K1_BB": DistIdentity("K1_BB", "S", 2, math.pi, False, "wid(K1_BB) = pi sqrt(S_1)"),
    "L1_BB": DistIdentity("L1_BB", "S", 4, math.pi / 2, False, "wid(L1_BB) = (pi/2) sqrt(S_2)"),
}


def _series_draws(ident: DistIdentity, truncation: int, samples: int, seed: int, workers: int, base: int) -> np.ndarray:
    def sampler(rng: RngStream, count: int) -> np.ndarray:
        return ident.transform(sample_weighted_chisq_batch(ident.family, ident.d, truncation, rng, count))

    return mc_collect(sampler, samples, seed, workers, stream_base=base)


def run_dist(
    name: str,
    samples: int,
    seed: int,
    workers: int = 1,
    n_steps: int = 8192,
    truncation: int = 10_000,
    sup_correction: bool = True,
) -> dict:
    """KS test of one width identity, or ``self_test`` (both sides from the series)."""
    if name == "self_test":
        ident = DIST_IDENTITIES["K1_BB"]
        xs = _series_draws(ident, truncation, samples, seed, workers, 0)
        statement = "pi sqrt(S_1) against an independent copy"
    else:
        try:
            ident = DIST_IDENTITIES[name]
        except KeyError:
            raise DomainError(f"unknown identity {name!r}; known: {sorted(DIST_IDENTITIES)} or self_test") from None
        body = BodyFamily.from_label(ident.body)

        def sampler(rng: RngStream, count: int) -> np.ndarray:
            return widths_from_functionals(path_functionals(n_steps, rng, count), body, n_steps, sup_correction)

        xs = mc_collect(sampler, samples, seed, workers, block_size=path_block(n_steps))
        statement = ident.statement
    ys = _series_draws(ident, truncation, samples, seed, workers, SECOND_SAMPLE)
    ks = ks_two_sample(xs, ys)
    return {
        "experiment": f"dist_{name}",
        "params": {
            "identity": statement,
            "n_steps": n_steps if name != "self_test" else None,
            "truncation": truncation,
            "mode": "corrected" if sup_correction else "grid",
        },
        "statistic": ks.statistic,
        "p_value": ks.p_value,
        "n_x": ks.n_x,
        "n_y": ks.n_y,
        "pass": bool(ks.p_value > KS_THRESHOLD),
    }
