"""Samplers for Gaussian paths, walks, weighted chi-square series and
ellipsoid functionals.

Paths live on the grid t_i = i/n, i = 0..n.  Integrals (the centring of
CBM/CBB and the L^1/L^2 norms) use the trapezoid rule on that grid and
suprema are grid maxima.  All four processes are built from one Brownian
path: the bridge subtracts t W(1), the centred versions subtract the
trapezoid mean.

Batched samplers consume the stream row by row exactly like repeated single
draws, so ``sample_widths(..., count)`` equals ``count`` calls of
``sample_width`` on the same stream (up to floating-point summation order).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .closed_forms import INF, STARS, BodyFamily, conjugate_exponent, parse_exponent
from .errors import DomainError
from .montecarlo import McResult, mc_mean
from .rng import RngStream
from .special_functions import constant, kappa

STAR_INDEX = {s: i for i, s in enumerate(STARS)}
# columns of the path-functional table produced by kernels.path_norms
SUP_ABS, SUP_POS, SUP_NEG, L1_ABS, L1_POS, L1_NEG, L2_ABS, L2_POS, L2_NEG = range(9)
_NORM_COLUMNS = {INF: (SUP_ABS, SUP_POS, SUP_NEG), 1: (L1_ABS, L1_POS, L1_NEG), 2: (L2_ABS, L2_POS, L2_NEG)}


@dataclass
class Path:
    star: str
    steps: int
    values: np.ndarray

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.steps + 1)


def _check_star(star: str) -> None:
    if star not in STAR_INDEX:
        raise DomainError(f"star must be one of {STARS}, got {star!r}")


def grid_max_shift(n_steps: int) -> float:
    """Leading-order gap between the continuum and grid maximum of a path.

    For a process that is locally standard Brownian, E sup - E grid-max equals
    -zeta(1/2)/sqrt(2 pi) * sqrt(1/n) + O(1/n).  Adding it to each grid
    maximum is the optional continuity correction.
    """
    return -constant("zeta_half") / math.sqrt(2.0 * math.pi) / math.sqrt(n_steps)


def trapezoid_mean(values: np.ndarray) -> np.ndarray:
    """Trapezoid-rule integral over [0, 1] along the last axis."""
    n = values.shape[-1] - 1
    return (values[..., 1:-1].sum(axis=-1) + 0.5 * (values[..., 0] + values[..., -1])) / n


def shape_paths(w: np.ndarray, star: str) -> np.ndarray:
    """Turn Brownian paths (rows, starting at 0) into paths of ``star``."""
    _check_star(star)
    n = w.shape[-1] - 1
    if star in ("BB", "CBB"):
        t = np.arange(n + 1) / n
        w = w - w[..., -1:] * t
    if star in ("CBM", "CBB"):
        w = w - trapezoid_mean(w)[..., None]
    return w


def sample_paths(star: str, n_steps: int, rng: RngStream, count: int) -> np.ndarray:
    """``count`` discretised paths, shape (count, n_steps + 1)."""
    if n_steps < 1:
        raise DomainError(f"n_steps must be positive, got {n_steps}")
    z = rng.normal_rows(count, n_steps)
    w = np.zeros((count, n_steps + 1))
    np.cumsum(z * math.sqrt(1.0 / n_steps), axis=1, out=w[:, 1:])
    return shape_paths(w, star)


def sample_path(star: str, n_steps: int, rng: RngStream) -> Path:
    return Path(star, int(n_steps), sample_paths(star, n_steps, rng, 1)[0])


def path_norm(path, q, positive_part: bool = False, sup_correction: bool = False) -> float:
    """L^q norm on [0, 1] (trapezoid rule) or grid sup norm for q = inf.

    ``sup_correction`` adds ``grid_max_shift`` to the grid sup norm.
    """
    x = np.asarray(path.values if isinstance(path, Path) else path, dtype=np.float64)
    q = parse_exponent(q)
    x = np.maximum(x, 0.0) if positive_part else np.abs(x)
    if q == INF:
        return float(x.max()) + (grid_max_shift(x.size - 1) if sup_correction else 0.0)
    if q == 1:
        return float(trapezoid_mean(x))
    return float(math.sqrt(trapezoid_mean(x * x)))


def path_functionals(n_steps: int, rng: RngStream, count: int) -> np.ndarray:
    """Norm table (count, 4, 9) for all four processes from shared BM draws.

    Stars are ordered BM, CBM, BB, CBB; the columns are the sup, L^1 and L^2
    norms of |X|, X+ and X- (see the ``SUP_ABS``... constants).
    """
    z = rng.normal_rows(count, n_steps)
    out = np.empty((count, 4, 9))
    kernels.path_norms(z, out)
    return out


def widths_from_functionals(
    table: np.ndarray, body: BodyFamily, n_steps: int = 0, sup_correction: bool = False
) -> np.ndarray:
    """Width draws of ``body`` from a path-functional table.

    wid(K) = 2 ||X||_q and wid(L) = ||X+||_q + ||X-||_q with 1/p + 1/q = 1.
    With ``sup_correction`` (q = inf only, needs ``n_steps``) each grid
    maximum is shifted by ``grid_max_shift(n_steps)``.
    """
    abs_col, pos_col, neg_col = _NORM_COLUMNS[body.q]
    rows = table[:, STAR_INDEX[body.star]]
    shift = 0.0
    if sup_correction and body.q == INF:
        if n_steps < 1:
            raise DomainError("sup_correction needs the grid size n_steps")
        shift = 2.0 * grid_max_shift(n_steps)
    if body.set_class == "K":
        return 2.0 * rows[:, abs_col] + shift
    return rows[:, pos_col] + rows[:, neg_col] + shift


def sample_widths(
    set_class: str, star: str, p, n_steps: int, rng: RngStream, count: int, sup_correction: bool = False
) -> np.ndarray:
    body = BodyFamily(set_class, star, p)
    table = path_functionals(n_steps, rng, count)
    return widths_from_functionals(table, body, n_steps, sup_correction)


def sample_width(
    set_class: str, star: str, p, n_steps: int, rng: RngStream, sup_correction: bool = False
) -> float:
    """One Gaussian-width draw of a Sobolev-type ball, from one path."""
    body = BodyFamily(set_class, star, p)
    path = sample_path(star, n_steps, rng)
    q = conjugate_exponent(body.p)
    if body.set_class == "K":
        return 2.0 * path_norm(path, q, sup_correction=sup_correction)
    pos = path_norm(path, q, positive_part=True, sup_correction=sup_correction)
    return pos + path_norm(-path.values, q, positive_part=True, sup_correction=sup_correction)


def sample_walks(k: int, n: int, rng: RngStream, count: int, bridge: bool = False) -> np.ndarray:
    """Partial sums S_1..S_n of standard Gaussian steps in R^k, shape (count, n, k).

    The bridge variant returns S_i - (i/n) S_n, which has the law of the walk
    conditioned on S_n = 0.
    """
    if k < 1 or n < 1:
        raise DomainError("k and n must be positive")
    steps = rng.normal_rows(count, n * k).reshape(count, n, k)
    s = np.cumsum(steps, axis=1)
    if bridge:
        s = s - (np.arange(1, n + 1) / n)[None, :, None] * s[:, -1:, :]
        s[:, -1, :] = 0.0
    return s


def sample_walk(k: int, n: int, rng: RngStream, bridge: bool = False) -> np.ndarray:
    return sample_walks(k, n, rng, 1, bridge)[0]


# weighted chi-square series


def series_axes(family: str, count: int) -> np.ndarray:
    """Half-axes 1/(n pi) (family S or E) or 1/((n - 1/2) pi) (family C or F)."""
    n = np.arange(1, count + 1, dtype=np.float64)
    if family in ("S", "E"):
        return 1.0 / (n * math.pi)
    if family in ("C", "F"):
        return 1.0 / ((n - 0.5) * math.pi)
    raise DomainError(f"family must be S/E or C/F, got {family!r}")


def series_tail(family: str, truncation: int) -> float:
    """Sum of squared half-axes beyond the truncation (one copy of each axis)."""
    n = np.arange(1, truncation + 1, dtype=np.float64)
    if family in ("S", "E"):
        head = math.fsum(1.0 / n**2)
        return max(math.pi**2 / 6 - head, 0.0) / math.pi**2
    if family in ("C", "F"):
        head = math.fsum(1.0 / (n - 0.5) ** 2)
        return max(math.pi**2 / 2 - head, 0.0) / math.pi**2
    raise DomainError(f"family must be S/E or C/F, got {family!r}")


_CHISQ_ROWS = 256


def sample_weighted_chisq_batch(family: str, d: int, truncation: int, rng: RngStream, count: int) -> np.ndarray:
    """Draws of sum_{n<=N} lambda_n^2 chi2_d + d sum_{n>N} lambda_n^2.

    chi2_d is built from d//2 uniforms per term (-2 log of their product)
    plus, for odd d, one squared Box-Muller normal from two more uniforms.
    """
    if d < 1 or truncation < 1:
        raise DomainError("d and truncation must be positive")
    lam2 = series_axes(family, truncation) ** 2
    tail = d * series_tail(family, truncation)
    half = d // 2
    odd = d % 2
    width = truncation * (half + 2 * odd)
    weights = np.repeat(lam2, half)
    out = np.empty(count)
    for r0 in range(0, count, _CHISQ_ROWS):
        r1 = min(count, r0 + _CHISQ_ROWS)
        u = rng.uniform_rows(r1 - r0, width)
        head = u[:, : truncation * half]
        m = -2.0 * (np.log(head) @ weights) if half else np.zeros(r1 - r0)
        if odd:
            pairs = u[:, truncation * half :]
            z2 = -2.0 * np.log(pairs[:, 0::2]) * np.cos(2 * math.pi * pairs[:, 1::2]) ** 2
            m = m + z2 @ lam2
        out[r0:r1] = m + tail
    return out


def sample_weighted_chisq(family: str, d: int, truncation: int, rng: RngStream) -> float:
    return float(sample_weighted_chisq_batch(family, d, truncation, rng, 1)[0])


def laplace_transform(family: str, d: int, t: float) -> float:
    """E exp(-t M): (sqrt(2t)/sinh sqrt(2t))^(d/2) for S, cosh(sqrt(2t))^(-d/2) for C."""
    s = math.sqrt(2.0 * t)
    if family in ("S", "E"):
        return (s / math.sinh(s)) ** (d / 2) if s > 0 else 1.0
    if family in ("C", "F"):
        return math.cosh(s) ** (-d / 2)
    raise DomainError(f"family must be S/E or C/F, got {family!r}")


# ellipsoids


@dataclass(frozen=True)
class EllipsoidSpec:
    """Half-axis rule: explicit ``axes`` or a series ``family`` (E or F)
    with each axis repeated ``multiplicity`` times and ``truncation`` terms."""

    axes: Optional[tuple] = None
    family: Optional[str] = None
    multiplicity: int = 1
    truncation: int = 10_000

    def __post_init__(self) -> None:
        if (self.axes is None) == (self.family is None):
            raise DomainError("give exactly one of axes or family")
        if self.axes is not None:
            axes = tuple(float(a) for a in self.axes)
            if not axes or any(not (a > 0 and math.isfinite(a)) for a in axes):
                raise DomainError("half-axes must be positive and finite")
            object.__setattr__(self, "axes", axes)
        else:
            if self.family not in ("E", "F"):
                raise DomainError(f"family must be E or F, got {self.family!r}")
            if self.multiplicity < 1 or self.truncation < 1:
                raise DomainError("multiplicity and truncation must be positive")

    @classmethod
    def explicit(cls, axes: Sequence[float]) -> "EllipsoidSpec":
        return cls(axes=tuple(axes))

    @classmethod
    def series(cls, family: str, d: int, truncation: int = 10_000) -> "EllipsoidSpec":
        return cls(family=family, multiplicity=d, truncation=truncation)

    def half_axes(self) -> np.ndarray:
        """Every half-axis, repeated by multiplicity, up to the truncation."""
        if self.axes is not None:
            return np.array(self.axes)
        return np.repeat(series_axes(self.family, self.truncation), self.multiplicity)

    def tail(self) -> float:
        """Sum of squared half-axes dropped by the truncation."""
        if self.axes is not None:
            return 0.0
        return self.multiplicity * series_tail(self.family, self.truncation)


def sample_ellipsoid_functional_batch(spec: EllipsoidSpec, k: int, rng: RngStream, count: int) -> np.ndarray:
    """Draws of sqrt(det W_k) with W_k = sum_n lambda_n^2 N_n N_n^T (N_n in R^k).

    For k = 1 this is sqrt(M), half the Gaussian width.  Series specs add the
    mean of the dropped tail, tail * I_k, to W_k.
    """
    if k < 1:
        raise DomainError(f"k must be positive, got {k}")
    if spec.family is not None and k == 1:
        return np.sqrt(sample_weighted_chisq_batch(spec.family, spec.multiplicity, spec.truncation, rng, count))
    lam = spec.half_axes()
    if spec.axes is not None and lam.size < k:
        rng.skip(count * 2 * ((lam.size * k + 1) // 2))
        return np.zeros(count)
    out = np.empty(count)
    rows = max(1, (1 << 22) // (lam.size * k))
    for r0 in range(0, count, rows):
        r1 = min(count, r0 + rows)
        g = rng.normal_rows(r1 - r0, lam.size * k).reshape(r1 - r0, lam.size, k) * lam[None, :, None]
        w = np.swapaxes(g, 1, 2) @ g + spec.tail() * np.eye(k)
        out[r0:r1] = np.sqrt(np.maximum(np.linalg.det(w), 0.0))
    return out


def sample_ellipsoid_functional(spec: EllipsoidSpec, k: int, rng: RngStream) -> float:
    return float(sample_ellipsoid_functional_batch(spec, k, rng, 1)[0])


def ellipsoid_vk_mc(spec: EllipsoidSpec, k: int, samples: int, seed: int, workers: int = 1, stream_base: int = 0) -> McResult:
    """V_k = (2 pi)^(k/2) / k! * E sqrt(det W_k)."""
    scale = (2 * math.pi) ** (k / 2) / math.factorial(k)

    def sampler(rng: RngStream, count: int) -> np.ndarray:
        return sample_ellipsoid_functional_batch(spec, k, rng, count)

    return mc_mean(sampler, samples, seed, workers, stream_base=stream_base).scaled(scale)


def rivin_duality_check(
    sigma, k: int, samples: int, seed: int, workers: int = 1
) -> tuple[McResult, McResult]:
    """Monte Carlo V_k(E) and |det S|^(1/2) kappa_k / kappa_(n-k) V_(n-k)(E*).

    E = {x : x.S^-1 x <= 1} has half-axes sqrt(eig S); its polar ellipsoid
    E* = {x : x.S x <= 1} has the reciprocal half-axes.
    """
    s = np.asarray(sigma, dtype=np.float64)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise DomainError("sigma must be a square matrix")
    n = s.shape[0]
    if not np.allclose(s, s.T, rtol=1e-12, atol=0.0):
        raise DomainError("sigma must be symmetric")
    if not 1 <= k <= n - 1 or n > 6:
        raise DomainError(f"need 1 <= k <= n - 1 and n <= 6, got k={k}, n={n}")
    eig = np.linalg.eigvalsh(s)
    if eig[0] <= 0:
        raise DomainError("sigma must be positive definite")
    axes = np.sqrt(eig)
    left = ellipsoid_vk_mc(EllipsoidSpec.explicit(axes), k, samples, seed, workers, stream_base=0)
    dual = ellipsoid_vk_mc(EllipsoidSpec.explicit(1.0 / axes), n - k, samples, seed, workers, stream_base=1 << 32)
    factor = math.sqrt(float(np.prod(eig))) * kappa(k) / kappa(n - k)
    return left, dual.scaled(factor)
