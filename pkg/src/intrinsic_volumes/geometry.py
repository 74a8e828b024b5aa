"""Convex hulls, polytope and zonotope volumes, and two Monte Carlo oracles
for intrinsic volumes (parallel-body fits and random projections).

Hulls are built by the beneath-beyond method.  Orientation tests are
evaluated in floating point with a forward error bound; a result whose sign
cannot be certified counts as exactly zero, and zero is resolved as
"beneath" (equivalently, the new point is pushed infinitesimally toward the
interior).  That rule is deterministic, so facet counts do not depend on the
platform.  Points that end up on the boundary without being extreme are
removed by a second pass over the certified extreme points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Optional, Sequence

import numpy as np

from . import kernels
from .errors import BudgetError, DomainError, IllConditionedError
from .montecarlo import McResult, mc_collect, mc_mean, summarize
from .rng import RngStream
from .special_functions import kappa

MAX_HULL_DIM = 6
SUBSET_BUDGET = 5 * 10**6
_EPS = np.finfo(float).eps


@dataclass
class Polytope:
    """Convex hull of a finite point set.

    ``facet_simplices[i]`` lists ``dim`` vertex indices spanning a boundary
    simplex, ordered so that ``det(vertices[f] - interior_point) > 0``;
    ``normals``/``offsets`` give the matching outward unit normals and
    ``normal . x <= offset`` for points of the body.
    """

    dim: int
    vertices: np.ndarray
    facet_simplices: np.ndarray
    interior_point: np.ndarray
    normals: np.ndarray
    offsets: np.ndarray
    degenerate: bool = False
    affine_dim: int = -1

    def __post_init__(self) -> None:
        if self.affine_dim < 0:
            self.affine_dim = self.dim

    @property
    def n_vertices(self) -> int:
        return int(self.vertices.shape[0])


@dataclass(frozen=True)
class Generators:
    """Ordered generating vectors of a zonotope, one per row."""

    vectors: np.ndarray

    def __post_init__(self) -> None:
        v = np.atleast_2d(np.asarray(self.vectors, dtype=np.float64))
        if v.shape[0] < 1:
            raise DomainError("need at least one generator")
        if not np.all(np.isfinite(v)):
            raise DomainError("generators must be finite")
        object.__setattr__(self, "vectors", v)

    @property
    def ambient_dim(self) -> int:
        return int(self.vectors.shape[1])

    @property
    def count(self) -> int:
        return int(self.vectors.shape[0])


@dataclass(frozen=True)
class GramIndex:
    """Increasing index tuple ``l``, optionally with a bridge horizon ``n``."""

    l: tuple
    n: Optional[int] = None

    def __post_init__(self) -> None:
        l = tuple(int(v) for v in self.l)
        if not l or l[0] < 1 or any(b <= a for a, b in zip(l, l[1:])):
            raise DomainError(f"l must be strictly increasing positive integers, got {self.l}")
        if self.n is not None and l[-1] > self.n:
            raise DomainError(f"l_k={l[-1]} exceeds horizon n={self.n}")
        object.__setattr__(self, "l", l)


# hull construction


def _normal(pts: np.ndarray) -> np.ndarray:
    """A (non-unit) normal of the hyperplane through d points in R^d."""
    d = pts.shape[1]
    e = pts[1:] - pts[0]
    if d == 2:
        return np.array([-e[0, 1], e[0, 0]])
    if d == 3:
        return np.cross(e[0], e[1])
    n = np.empty(d)
    for j in range(d):
        minor = np.delete(e, j, axis=1)
        n[j] = (-1) ** j * np.linalg.det(minor)
    return n


def _initial_simplex(pts: np.ndarray) -> list[int]:
    d = pts.shape[1]
    first = int(np.lexsort(pts.T[::-1])[0])
    chosen = [first]
    basis = np.zeros((0, d))
    rel = pts - pts[first]
    for _ in range(d):
        resid = rel - (rel @ basis.T) @ basis
        dist = np.einsum("ij,ij->i", resid, resid)
        dist[chosen] = -1.0
        nxt = int(np.argmax(dist))
        chosen.append(nxt)
        u = resid[nxt] / math.sqrt(dist[nxt])
        basis = np.vstack([basis, u])
    return chosen


class _Builder:
    def __init__(self, pts: np.ndarray):
        self.pts = pts
        self.d = pts.shape[1]
        self.verts: list[tuple] = []
        self.normals: list[np.ndarray] = []
        self.anchor: list[np.ndarray] = []
        self.scale: list[float] = []
        self.alive: list[bool] = []
        self.ridges: dict[tuple, list[int]] = {}

    def add_facet(self, vs: tuple, centre: np.ndarray) -> None:
        p = self.pts[list(vs)]
        n = _normal(p)
        if n @ (centre - p[0]) > 0:
            n = -n
        reach = float(np.max(np.linalg.norm(p - p[0], axis=1))) if self.d > 1 else 1.0
        f = len(self.verts)
        self.verts.append(vs)
        self.normals.append(n)
        self.anchor.append(p[0])
        self.scale.append(reach ** (self.d - 1))
        self.alive.append(True)
        for r in combinations(sorted(vs), self.d - 1):
            self.ridges.setdefault(r, []).append(f)

    def kill(self, f: int) -> None:
        self.alive[f] = False
        for r in combinations(sorted(self.verts[f]), self.d - 1):
            owners = self.ridges[r]
            owners.remove(f)
            if not owners:
                del self.ridges[r]

    def build(self, order: Sequence[int], simplex: list[int]) -> np.ndarray:
        d = self.d
        centre = self.pts[simplex].mean(axis=0)
        for drop in range(d + 1):
            self.add_facet(tuple(v for j, v in enumerate(simplex) if j != drop), centre)
        tol_factor = 64.0 * d * _EPS
        for i in order:
            p = self.pts[i]
            live = [f for f in range(len(self.verts)) if self.alive[f]]
            nrm = np.array([self.normals[f] for f in live])
            anc = np.array([self.anchor[f] for f in live])
            diff = p - anc
            dist = np.einsum("ij,ij->i", nrm, diff)
            bound = tol_factor * np.array([self.scale[f] for f in live]) * np.linalg.norm(diff, axis=1)
            visible = {live[j] for j in np.flatnonzero(dist > bound)}
            if not visible:
                continue
            horizon = []
            for f in sorted(visible):
                for r in combinations(sorted(self.verts[f]), d - 1):
                    other = [g for g in self.ridges[r] if g != f]
                    if other and other[0] not in visible:
                        horizon.append(r)
            for f in sorted(visible):
                self.kill(f)
            for r in horizon:
                self.add_facet(r + (i,), centre)
        return centre


def _extreme_mask(pts: np.ndarray, facets: list[tuple], normals: list[np.ndarray]) -> dict[int, bool]:
    d = pts.shape[1]
    incident: dict[int, list[np.ndarray]] = {}
    for vs, n in zip(facets, normals):
        u = n / np.linalg.norm(n)
        for v in vs:
            incident.setdefault(v, []).append(u)
    out = {}
    for v, us in incident.items():
        s = np.linalg.svd(np.array(us), compute_uv=False)
        out[v] = len(s) >= d and s[d - 1] > 1e-9 * s[0]
    return out


def _hull_1d(points: np.ndarray) -> Polytope:
    x = points[:, 0]
    lo, hi = int(np.argmin(x)), int(np.argmax(x))
    if x[lo] == x[hi]:
        return _degenerate(points, 0, points[[lo]])
    verts = points[[lo, hi]]
    return Polytope(
        dim=1,
        vertices=verts,
        facet_simplices=np.array([[1], [0]]),
        interior_point=verts.mean(axis=0),
        normals=np.array([[-1.0], [1.0]]),
        offsets=np.array([-verts[0, 0], verts[1, 0]]),
    )


def _degenerate(points: np.ndarray, rank: int, verts: np.ndarray) -> Polytope:
    d = points.shape[1]
    return Polytope(
        dim=d,
        vertices=verts,
        facet_simplices=np.zeros((0, d), dtype=np.int64),
        interior_point=verts.mean(axis=0),
        normals=np.zeros((0, d)),
        offsets=np.zeros(0),
        degenerate=True,
        affine_dim=rank,
    )


def convex_hull(points) -> Polytope:
    """Convex hull of a point cloud in R^d, 1 <= d <= 6.

    Affinely dependent input yields a ``degenerate`` Polytope whose vertices
    are the extreme points within the affine hull and whose volume is 0.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if pts.ndim != 2 or pts.shape[0] < 1:
        raise DomainError("points must be a non-empty (m, d) array")
    m, d = pts.shape
    if not 1 <= d <= MAX_HULL_DIM:
        raise DomainError(f"hull dimension must be in [1, {MAX_HULL_DIM}], got {d}")
    if not np.all(np.isfinite(pts)):
        raise DomainError("points must be finite")
    if d == 1:
        return _hull_1d(pts)
    centred = pts - pts.mean(axis=0)
    _, s, vt = np.linalg.svd(centred, full_matrices=False)
    rank = int(np.sum(s > 1e-12 * max(s[0], np.abs(pts).max(), 1e-300))) if m > 1 else 0
    if rank < d:
        if rank == 0:
            return _degenerate(pts, 0, pts[:1])
        proj = centred @ vt[:rank].T
        sub = convex_hull(proj)
        idx = sorted(_row_index(proj, v) for v in sub.vertices)
        return _degenerate(pts, rank, pts[idx])

    candidates = np.arange(m)
    for _ in range(4):
        sub_pts = pts[candidates]
        simplex = _initial_simplex(sub_pts)
        taken = set(simplex)
        rest = [i for i in range(len(candidates)) if i not in taken]
        b = _Builder(sub_pts)
        centre = b.build(rest, simplex)
        live = [f for f in range(len(b.verts)) if b.alive[f]]
        facets = [b.verts[f] for f in live]
        normals = [b.normals[f] for f in live]
        ext = _extreme_mask(sub_pts, facets, normals)
        if all(ext.values()):
            break
        candidates = candidates[sorted(v for v, ok in ext.items() if ok)]
    used = sorted({v for vs in facets for v in vs})
    remap = {v: j for j, v in enumerate(used)}
    verts = sub_pts[used]
    fs = np.array([[remap[v] for v in vs] for vs in facets], dtype=np.int64)
    for row in fs:
        if np.linalg.det(verts[row] - centre) < 0:
            row[[0, 1]] = row[[1, 0]]
    units = np.array([n / np.linalg.norm(n) for n in normals])
    offsets = np.einsum("ij,ij->i", units, verts[fs[:, 0]])
    return Polytope(d, verts, fs, centre, units, offsets)


def _row_index(rows: np.ndarray, target: np.ndarray) -> int:
    return int(np.argmin(np.abs(rows - target).sum(axis=1)))


def polytope_volume(poly: Polytope) -> float:
    """Sum of |det(facet - interior)| / d! over the boundary simplices."""
    if poly.degenerate or poly.facet_simplices.shape[0] == 0:
        return 0.0
    if poly.dim == 1:
        return float(poly.vertices[:, 0].max() - poly.vertices[:, 0].min())
    cones = poly.vertices[poly.facet_simplices] - poly.interior_point
    dets = np.abs(np.linalg.det(cones))
    return math.fsum(dets) / math.factorial(poly.dim)


def distance_to_polytope(poly: Polytope, x) -> np.ndarray:
    """Euclidean distance from each row of ``x`` to the polytope (0 inside).

    Supported for full-dimensional polytopes with dim <= 3: the distance of an
    outside point is the minimum over boundary simplices of the point-simplex
    distance.
    """
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    d = poly.dim
    if d > 3:
        raise DomainError("distance_to_polytope supports dim <= 3")
    if poly.degenerate:
        raise DomainError("distance to a degenerate polytope is not supported")
    if d == 1:
        lo, hi = poly.vertices[:, 0].min(), poly.vertices[:, 0].max()
        return np.maximum(np.maximum(lo - x[:, 0], x[:, 0] - hi), 0.0)
    viol = x @ poly.normals.T - poly.offsets
    inside = np.all(viol <= 0.0, axis=1)
    best = np.full(x.shape[0], np.inf)
    out = ~inside
    xo = x[out]
    for f in poly.facet_simplices:
        v = poly.vertices[f]
        if d == 2:
            dist = _segment_distance(xo, v[0], v[1])
        else:
            dist = _triangle_distance(xo, v[0], v[1], v[2])
        best[out] = np.minimum(best[out], dist)
    best[inside] = 0.0
    return best


def _segment_distance(x: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ab = b - a
    t = np.clip(((x - a) @ ab) / (ab @ ab), 0.0, 1.0)
    return np.linalg.norm(x - (a + t[:, None] * ab), axis=1)


def _triangle_distance(x: np.ndarray, a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    e0, e1 = b - a, c - a
    n = np.cross(e0, e1)
    nn = n @ n
    w = x - a
    plane = (w @ n) / nn
    proj = w - plane[:, None] * n
    # barycentric coordinates of the projection
    g = np.array([[e0 @ e0, e0 @ e1], [e0 @ e1, e1 @ e1]])
    rhs = np.stack([proj @ e0, proj @ e1], axis=1)
    uv = np.linalg.solve(g, rhs.T).T
    inside = (uv[:, 0] >= 0) & (uv[:, 1] >= 0) & (uv.sum(axis=1) <= 1)
    edge = np.minimum(
        np.minimum(_segment_distance(x, a, b), _segment_distance(x, b, c)),
        _segment_distance(x, c, a),
    )
    return np.where(inside, np.abs(plane) * math.sqrt(nn), edge)


# zonotopes and Gram determinants


def _subsets(n: int, m: int) -> np.ndarray:
    total = math.comb(n, m)
    if total > SUBSET_BUDGET:
        raise BudgetError(f"C({n},{m}) = {total} subsets exceeds the budget of {SUBSET_BUDGET}")
    return np.array(list(combinations(range(n), m)), dtype=np.int64).reshape(total, m)


def zonotope_volume(gen: Generators) -> float:
    """Sum over k-subsets of generators of |det|, k the ambient dimension."""
    n, k = gen.count, gen.ambient_dim
    if n < k:
        return 0.0
    subs = _subsets(n, k)
    return math.fsum(np.abs(np.linalg.det(gen.vectors[subs])))


def zonotope_intrinsic_volume(gen: Generators, m: int) -> float:
    """V_m of a zonotope: sum over m-subsets of sqrt(det Gram)."""
    if not 0 <= m <= gen.count:
        raise DomainError(f"need 0 <= m <= {gen.count}, got {m}")
    if m == 0:
        return 1.0
    if m > gen.ambient_dim:
        return 0.0
    sub = gen.vectors[_subsets(gen.count, m)]
    gram = sub @ np.swapaxes(sub, 1, 2)
    return math.fsum(np.sqrt(np.maximum(np.linalg.det(gram), 0.0)))


def gram_det(idx: GramIndex) -> float:
    """det[min(l_i, l_j)] or, with a horizon, det[min(l_i, l_j) - l_i l_j / n]."""
    l = np.array(idx.l, dtype=np.float64)
    g = np.minimum.outer(l, l)
    if idx.n is not None:
        g = g - np.outer(l, l) / idx.n
    return float(np.linalg.det(g))


def lipschitz_generators(n: int, family: str) -> Generators:
    """Columns of the cumulative-sum operators spanning the discrete L^inf balls.

    BM: n vectors in R^n, vector m has ones in coordinates m..n.
    BB: n-1 vectors in R^n, the same ones-vectors centred to sum zero.
    """
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    idx = np.arange(n)
    if family == "BM":
        return Generators((idx[None, :] >= idx[:, None]).astype(np.float64))
    if family == "BB":
        if n < 2:
            raise DomainError("bridge generators need n >= 2")
        m = np.arange(1, n)[:, None]
        return Generators((idx[None, :] >= m) - (n - m) / n)
    raise DomainError(f"family must be BM or BB, got {family!r}")


def zonotope_vertices(vectors) -> np.ndarray:
    """All 2^n subset sums of the generators (a superset of the vertices)."""
    v = np.asarray(vectors, dtype=np.float64)
    n = v.shape[-2]
    if n > 20:
        raise BudgetError(f"2^{n} subset sums exceed the budget")
    mask = ((np.arange(2**n)[:, None] >> np.arange(n)[None, :]) & 1).astype(np.float64)
    return mask @ v


# Monte Carlo oracles


def planar_hull_measures(points: np.ndarray) -> np.ndarray:
    """Area and perimeter, shape (s, 2), of the hull of each planar point set."""
    pts = np.ascontiguousarray(points, dtype=np.float64)
    if pts.ndim != 3 or pts.shape[2] != 2:
        raise DomainError(f"points must have shape (s, m, 2), got {pts.shape}")
    out = np.empty((pts.shape[0], 2))
    kernels.hull2d_measures(pts, out)
    return out


def projected_volumes(points: np.ndarray) -> np.ndarray:
    """Volume of the hull of each point set in a batch of shape (s, m, k)."""
    pts = np.asarray(points, dtype=np.float64)
    s, _, k = pts.shape
    if k == 1:
        return pts[:, :, 0].max(axis=1) - pts[:, :, 0].min(axis=1)
    if k == 2:
        return planar_hull_measures(pts)[:, 0]
    return np.array([polytope_volume(convex_hull(p)) for p in pts])


def polytope_v1_sudakov(
    poly: Polytope, samples: int, seed: int, workers: int = 1
) -> McResult:
    """sqrt(2 pi) * E max_v <N, v> over the vertices, N standard Gaussian."""
    if poly.vertices.shape[0] == 0:
        raise DomainError("polytope has no vertices")
    verts = poly.vertices

    def sampler(rng: RngStream, count: int) -> np.ndarray:
        g = rng.normal_rows(count, verts.shape[1])
        return (g @ verts.T).max(axis=1)

    return mc_mean(sampler, samples, seed, workers).scaled(math.sqrt(2 * math.pi))


def kubota_vm_mc(
    poly: Polytope, m: int, samples: int, seed: int, workers: int = 1
) -> McResult:
    """V_m as the rescaled mean m-volume of projections onto random m-frames."""
    d = poly.dim
    if not 1 <= m <= d:
        raise DomainError(f"need 1 <= m <= {d}, got {m}")
    verts = poly.vertices
    factor = math.comb(d, m) * kappa(d) / (kappa(m) * kappa(d - m))

    def sampler(rng: RngStream, count: int) -> np.ndarray:
        g = rng.normal_rows(count, d * m).reshape(count, d, m)
        q, _ = np.linalg.qr(g)
        return projected_volumes(verts @ q)

    return mc_mean(sampler, samples, seed, workers).scaled(factor)


@dataclass
class SteinerFit:
    """Fitted intrinsic volumes V_0..V_d (V_0 fixed to 1) and diagnostics."""

    values: np.ndarray
    std_errors: np.ndarray
    radii: np.ndarray
    parallel_volumes: np.ndarray
    condition: float
    n_samples: int
    seed: int

    def __getitem__(self, k: int) -> float:
        return float(self.values[k])

    def __len__(self) -> int:
        return len(self.values)

    def result(self, k: int, workers: int = 1) -> McResult:
        return McResult(float(self.values[k]), float(self.std_errors[k]), self.n_samples, self.seed, workers)


MAX_CONDITION = 1e8


def steiner_fit(
    poly: Polytope,
    radii: Sequence[float],
    samples: int,
    seed: int,
    workers: int = 1,
) -> SteinerFit:
    """Fit Vol(P + rB) = sum_k kappa_{d-k} V_k r^(d-k) to Monte Carlo volumes.

    All radii share one sample of uniform points in a box around the body, so
    the volume estimates are correlated; V_1..V_d come from a generalised
    least-squares fit using their sample covariance, with V_0 fixed at 1.
    """
    d = poly.dim
    r = np.asarray(sorted(set(float(v) for v in radii)))
    if d > 3:
        raise DomainError("steiner_fit supports dim <= 3")
    if r.size < d + 1 or np.any(r <= 0):
        raise DomainError(f"need at least {d + 1} distinct positive radii")
    # the margin exceeds the largest radius so no indicator column is constant
    lo = poly.vertices.min(axis=0) - 1.1 * r[-1]
    hi = poly.vertices.max(axis=0) + 1.1 * r[-1]
    box = float(np.prod(hi - lo))

    def sampler(rng: RngStream, count: int) -> np.ndarray:
        u = lo + (hi - lo) * rng.uniform_rows(count, d)
        dist = distance_to_polytope(poly, u)
        return box * (dist[:, None] <= r[None, :])

    draws = mc_collect(sampler, samples, seed, workers)
    vols = np.array([v.estimate for v in summarize(draws, seed, workers)])
    cov = np.cov(draws, rowvar=False) / samples
    y = vols - kappa(d) * r**d
    design = np.stack([kappa(d - k) * r ** (d - k) for k in range(1, d + 1)], axis=1)
    try:
        chol = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        raise IllConditionedError("parallel-body volumes have a singular covariance") from None
    wd = np.linalg.solve(chol, design)
    cond = float(np.linalg.cond(wd))
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise IllConditionedError(f"Steiner design condition number {cond:.3g} exceeds {MAX_CONDITION:g}")
    coef, *_ = np.linalg.lstsq(wd, np.linalg.solve(chol, y), rcond=None)
    err = np.sqrt(np.diag(np.linalg.inv(wd.T @ wd)))
    values = np.concatenate([[1.0], coef])
    errs = np.concatenate([[0.0], err])
    return SteinerFit(values, errs, r, vols, cond, int(samples), int(seed))


def random_rotation(d: int, rng: RngStream) -> np.ndarray:
    q, rr = np.linalg.qr(rng.normal_rows(d, d))
    return q * np.sign(np.diag(rr))


def simplex_points(n: int, family: str = "BM") -> np.ndarray:
    """The points P_0..P_n in R^n whose hull is the discrete L^1 simplex.

    P_i has its last i coordinates equal to 1; the bridge variant subtracts
    i/n from every coordinate.
    """
    i = np.arange(n + 1)[:, None]
    j = np.arange(n)[None, :]
    p = (j >= n - i).astype(np.float64)
    if family == "BB":
        p = p - i / n
    elif family != "BM":
        raise DomainError(f"family must be BM or BB, got {family!r}")
    return p


BodySampler = Callable[[RngStream, int], np.ndarray]
