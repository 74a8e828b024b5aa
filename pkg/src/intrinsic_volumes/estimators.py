"""Monte Carlo verdicts: z-score verification, the spectrum-volume estimator
of intrinsic volumes and a two-sample Kolmogorov-Smirnov test."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError
from .geometry import projected_volumes
from .montecarlo import McResult, mc_collect, mc_mean, mc_means, summarize
from .rng import RngStream
from .special_functions import kappa

__all__ = [
    "McResult",
    "VerifyReport",
    "KsResult",
    "mc_mean",
    "mc_means",
    "mc_collect",
    "summarize",
    "tsirelson_vk",
    "verify",
    "verify_band",
    "ks_two_sample",
    "kolmogorov_survival",
]

DEFAULT_Z = 4.0
KS_ALPHA = 1e-3


@dataclass(frozen=True)
class VerifyReport:
    name: str
    exact: float
    mc: McResult
    z_score: float
    passed: bool
    tolerance_policy: str

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "exact": self.exact,
            "estimate": self.mc.estimate,
            "std_error": self.mc.std_error,
            "z_score": self.z_score,
            "pass": self.passed,
            "tolerance_policy": self.tolerance_policy,
            "seed": self.mc.seed,
            "n_samples": self.mc.n_samples,
            "workers": self.mc.workers,
        }


def z_score(exact: float, mc: McResult) -> float:
    diff = mc.estimate - exact
    if mc.std_error > 0:
        return diff / mc.std_error
    if diff == 0:
        return 0.0
    return math.copysign(math.inf, diff)


def verify(name: str, exact: float, mc: McResult, z_threshold: float = DEFAULT_Z) -> VerifyReport:
    """Pass iff |estimate - exact| <= z_threshold standard errors.

    A zero standard error with a mismatch gives an infinite z and fails.
    """
    z = z_score(exact, mc)
    return VerifyReport(name, float(exact), mc, z, bool(abs(z) <= z_threshold), f"|z| <= {z_threshold:g}")


def verify_band(
    name: str,
    exact: float,
    mc: McResult,
    low: float,
    high: float = 1.0,
    z_threshold: float = DEFAULT_Z,
) -> VerifyReport:
    """Pass iff the estimate lies in [low * exact, high * exact] widened by
    z_threshold standard errors on each side (for known one-sided bias)."""
    lo = low * exact - z_threshold * mc.std_error
    hi = high * exact + z_threshold * mc.std_error
    ok = lo <= mc.estimate <= hi
    policy = f"estimate in exact*[{low:g}, {high:g}] +/- {z_threshold:g} SE"
    return VerifyReport(name, float(exact), mc, z_score(exact, mc), bool(ok), policy)


def tsirelson_vk(
    body_sampler: Callable[[RngStream, int], np.ndarray],
    k: int,
    n_samples: int,
    seed: int,
    workers: int = 1,
) -> McResult:
    """V_k = (2 pi)^(k/2) / (k! kappa_k) * E Vol_k(hull of the sampled points).

    ``body_sampler(rng, count)`` returns point sets of shape (count, m, k).
    """
    if not 1 <= k <= 6:
        raise DomainError(f"k must be in [1, 6], got {k}")

    def sampler(rng: RngStream, count: int) -> np.ndarray:
        pts = np.asarray(body_sampler(rng, count), dtype=np.float64)
        if pts.ndim != 3 or pts.shape[0] != count or pts.shape[2] != k:
            raise DomainError(f"body_sampler must return shape ({count}, m, {k}), got {pts.shape}")
        return projected_volumes(pts)

    scale = (2 * math.pi) ** (k / 2) / (math.factorial(k) * kappa(k))
    return mc_mean(sampler, n_samples, seed, workers).scaled(scale)


@dataclass(frozen=True)
class KsResult:
    statistic: float
    p_value: float
    n_x: int
    n_y: int

    def to_dict(self) -> dict:
        return {"statistic": self.statistic, "p_value": self.p_value, "n_x": self.n_x, "n_y": self.n_y}


def kolmogorov_survival(lam: float) -> float:
    """P(K > lam) for the Kolmogorov distribution.

    Uses 2 sum (-1)^(j-1) exp(-2 j^2 lam^2) for lam >= 1 and the Jacobi
    theta form 1 - sqrt(2 pi)/lam sum exp(-(2j-1)^2 pi^2 / (8 lam^2)) below.
    """
    if lam <= 0:
        return 1.0
    if lam < 1.0:
        s = math.fsum(math.exp(-((2 * j - 1) ** 2) * math.pi**2 / (8 * lam * lam)) for j in range(1, 12))
        return min(1.0, max(0.0, 1.0 - math.sqrt(2 * math.pi) / lam * s))
    s = math.fsum((-1) ** (j - 1) * math.exp(-2 * j * j * lam * lam) for j in range(1, 101))
    return min(1.0, max(0.0, 2.0 * s))


def ks_two_sample(xs, ys) -> KsResult:
    """Two-sample KS statistic sup |F_x - F_y| and its asymptotic p-value.

    Both empirical CDFs are right-continuous and are compared at every
    pooled value, so a block of tied values moves each CDF by its full tie
    count at once (ties never create spurious gaps).  The p-value applies the
    effective-size correction lam = (e + 0.12 + 0.11/e) D, e = sqrt(nm/(n+m)).
    """
    x = np.sort(np.asarray(xs, dtype=np.float64).ravel())
    y = np.sort(np.asarray(ys, dtype=np.float64).ravel())
    if x.size < 50 or y.size < 50:
        raise DomainError("ks_two_sample needs at least 50 values per sample")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise DomainError("ks_two_sample needs finite values")
    pooled = np.concatenate([x, y])
    fx = np.searchsorted(x, pooled, side="right") / x.size
    fy = np.searchsorted(y, pooled, side="right") / y.size
    d = float(np.max(np.abs(fx - fy)))
    en = math.sqrt(x.size * y.size / (x.size + y.size))
    p = kolmogorov_survival((en + 0.12 + 0.11 / en) * d)
    return KsResult(d, p, int(x.size), int(y.size))
