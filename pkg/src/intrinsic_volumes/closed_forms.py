"""Closed-form intrinsic volumes and expected hull/zonotope/zonoid volumes.

Naming: a *family* string such as ``"Kinf_BM"`` combines the body class
(``K`` full ball, ``L`` monotone sub-ball), the smoothness exponent and the
boundary condition.  Discrete sums run over index tuples
``1 <= l_1 < ... < l_k <= n`` with increments ``d_1 = l_1``,
``d_j = l_j - l_{j-1}``; they are evaluated term by term.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

from . import kernels
from .errors import BudgetError, DomainError, UnsupportedError
from .special_functions import constant, kappa, log_gamma, log_kappa

INF = math.inf
STARS = ("BM", "CBM", "BB", "CBB")
SET_CLASSES = ("K", "L")
EXPONENTS = (1, 2, INF)
CONTINUUM_FAMILIES = ("L1_BM", "L1_BB", "Kinf_BM", "Kinf_BB", "Linf_BM", "Linf_BB")
COMPOSITION_BUDGET = 10**8

_KIND = {("simplex", "BM"): 0, ("simplex", "BB"): 1, ("zonotope", "BM"): 2, ("zonotope", "BB"): 3}


def parse_exponent(p) -> float:
    if isinstance(p, str):
        key = p.strip().lower()
        if key in ("inf", "infinity", "oo", "∞"):
            return INF
        p = float(key)
    p = float(p)
    if p not in EXPONENTS:
        raise UnsupportedError(f"exponent must be 1, 2 or inf, got {p}")
    return int(p) if math.isfinite(p) else INF


def conjugate_exponent(p) -> float:
    p = parse_exponent(p)
    return {1: INF, 2: 2, INF: 1}[p]


@dataclass(frozen=True)
class BodyFamily:
    """One of the Sobolev-type balls ``set_class^p_star``.

    Monotone sub-balls (``L``) only exist for the BM and BB boundary
    conditions; the centred stars are rejected for them.
    """

    set_class: str
    star: str
    p: float

    def __post_init__(self) -> None:
        if self.set_class not in SET_CLASSES:
            raise DomainError(f"set_class must be K or L, got {self.set_class!r}")
        if self.star not in STARS:
            raise DomainError(f"star must be one of {STARS}, got {self.star!r}")
        object.__setattr__(self, "p", parse_exponent(self.p))
        if self.set_class == "L" and self.star in ("CBM", "CBB"):
            raise DomainError(f"L_{self.star} is not defined (monotone functions cannot be centred)")

    @classmethod
    def from_label(cls, label: str) -> "BodyFamily":
        """Parse a label such as ``"K1_BM"`` or ``"Linf_BB"``."""
        m = re.fullmatch(r"([KL])(1|2|inf)_(BM|CBM|BB|CBB)", str(label).strip())
        if m is None:
            raise DomainError(f"cannot parse body label {label!r} (expected e.g. K1_BM, Kinf_CBB)")
        return cls(m.group(1), m.group(3), m.group(2))

    @property
    def q(self) -> float:
        return conjugate_exponent(self.p)

    @property
    def label(self) -> str:
        p = "inf" if self.p == INF else str(self.p)
        return f"{self.set_class}{p}_{self.star}"


@dataclass(frozen=True)
class CompositionIndex:
    """Index set of the discrete sums.

    Kind ``A``: (d_1..d_k) positive with d_1 + ... + d_k <= n.
    Kind ``B``: (d_1..d_{k+1}) positive with sum exactly n.
    """

    n: int
    k: int
    kind: str = "A"

    def __post_init__(self) -> None:
        if self.kind not in ("A", "B"):
            raise DomainError(f"kind must be A or B, got {self.kind!r}")
        if self.n < 1 or self.k < 1:
            raise DomainError("n and k must be positive")
        if self.k > self.n:
            raise DomainError(f"k={self.k} exceeds n={self.n}")

    def size(self) -> int:
        return math.comb(self.n, self.k) if self.kind == "A" else math.comb(self.n - 1, self.k)

    def __iter__(self) -> Iterator[tuple]:
        top = self.n if self.kind == "A" else self.n - 1
        for ls in combinations(range(1, top + 1), self.k):
            d = tuple(b - a for a, b in zip((0,) + ls, ls))
            yield d if self.kind == "A" else d + (self.n - ls[-1],)


def _check_nk(n: int, k: int) -> None:
    if int(n) != n or int(k) != k:
        raise DomainError("n and k must be integers")
    if n < 1 or k < 1:
        raise DomainError(f"n and k must be positive, got n={n}, k={k}")
    if k > n:
        raise DomainError(f"k={k} exceeds n={n}")


def _family(family: str) -> str:
    if family not in ("BM", "BB"):
        raise DomainError(f"family must be BM or BB, got {family!r}")
    return family


def composition_sum(n: int, k: int, shape: str, family: str) -> float:
    """Raw sum over 1 <= l_1 < ... < l_k <= n for ``shape`` in {simplex, zonotope}."""
    _check_nk(n, k)
    count = math.comb(n, k)
    if count > COMPOSITION_BUDGET:
        raise BudgetError(f"C({n},{k}) = {count} terms exceeds the budget of {COMPOSITION_BUDGET}")
    return float(kernels.composition_sum(int(n), int(k), _KIND[shape, _family(family)]))


# continuum formulas


def vk_continuum(family: str, k: int) -> float:
    """V_k of the continuum balls L^1, K^inf and L^inf (BM and BB variants)."""
    if family not in CONTINUUM_FAMILIES:
        raise DomainError(f"family must be one of {CONTINUUM_FAMILIES}, got {family!r}")
    if k < 0:
        raise DomainError(f"k must be nonnegative, got {k}")
    if k == 0:
        return 1.0
    if family == "L1_BM":
        log_v = log_kappa(k) - math.lgamma(k + 1)
    elif family == "L1_BB":
        log_v = log_kappa(k + 1) - math.log(2.0) - math.lgamma(k + 1)
    elif family == "Kinf_BM":
        log_v = 0.5 * k * math.log(math.pi) - log_gamma(1.5 * k + 1.0)
    elif family == "Kinf_BB":
        log_v = 0.5 * (k + 1) * math.log(math.pi) - math.log(2.0) - log_gamma(1.5 * k + 1.5)
    elif family == "Linf_BM":
        # Dirichlet integral over the ordered simplex with k exponents 1/2
        log_v = k * log_gamma(1.5) - log_gamma(1.5 * k + 1.0)
    else:
        log_v = (k + 1) * log_gamma(1.5) - log_gamma(1.5 * (k + 1))
    return math.exp(log_v)


_V1_P1 = {
    ("K", "BM"): math.pi,
    ("K", "BB"): math.pi * math.log(2.0),
    ("L", "BM"): 2.0,
    ("L", "BB"): math.pi / 2.0,
}
_V1_PINF = {
    ("K", "BM"): 4.0 / 3.0,
    ("K", "BB"): math.pi / 4.0,
    ("K", "CBM"): (2.0 * math.sqrt(3.0) + math.log(2.0 + math.sqrt(3.0))) / 6.0,
    ("K", "CBB"): 2.0 / math.sqrt(3.0),
    ("L", "BM"): 2.0 / 3.0,
    ("L", "BB"): math.pi / 8.0,
}


def v1_sobolev_exact(body: BodyFamily) -> float:
    """Published V_1 of a Sobolev-type ball for p in {1, inf}."""
    if body.p == 2:
        raise UnsupportedError("p = 2 balls are ellipsoids; use the ellipsoid samplers")
    table = _V1_P1 if body.p == 1 else _V1_PINF
    try:
        return table[body.set_class, body.star]
    except KeyError:
        raise UnsupportedError(f"no closed form for V_1 of {body.label}") from None


# discrete simplices and parallelotopes


def vk_simplex_discrete(n: int, k: int, family: str) -> float:
    return composition_sum(n, k, "simplex", family) / math.factorial(k)


def vk_zonotope_discrete(n: int, k: int, family: str) -> float:
    """Sum of sqrt(d_1...d_k) (BM) or sqrt(d_1...d_k (n - l_k)) (BB).

    The BB value is the tabulated composition sum.  The parallelotope spanned
    by the centred vectors has V_k equal to this value divided by sqrt(n).
    """
    return composition_sum(n, k, "zonotope", family)


# expected volumes of random hulls and zonoids


def expected_hull_volume(k: int, family: str) -> float:
    """E Vol_k of the hull of a k-dim Brownian motion or bridge on [0, 1]."""
    if k < 1:
        raise DomainError(f"k must be positive, got {k}")
    if _family(family) == "BM":
        return math.exp(2 * log_kappa(k) - 0.5 * k * math.log(2 * math.pi))
    return math.exp(log_kappa(k) + log_kappa(k + 1) - math.log(2.0) - 0.5 * k * math.log(2 * math.pi))


def _log_binom(a: float, b: float) -> float:
    return math.lgamma(a + 1) - math.lgamma(b + 1) - math.lgamma(a - b + 1)


def expected_hull_vm(k: int, m: int, family: str) -> float:
    """E V_m of the hull of a k-dim Brownian motion or bridge, 0 <= m <= k."""
    if not 0 <= m <= k:
        raise DomainError(f"need 0 <= m <= k, got m={m}, k={k}")
    _family(family)
    if m == 0:
        return 1.0
    log_v = -0.5 * m * math.log(2 * math.pi) + _log_binom(k, m) + log_kappa(k) - log_kappa(k - m)
    if family == "BM":
        return math.exp(log_v + log_kappa(m))
    return math.exp(log_v + log_kappa(m + 1) - math.log(2.0))


def expected_walk_hull(n: int, k: int, m: int, family: str) -> float:
    """E V_m of the hull of {0, S_1..S_n} for a Gaussian walk (or bridge) in R^k."""
    if not 1 <= m <= k:
        raise DomainError(f"need 1 <= m <= k, got m={m}, k={k}")
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    if m > n:
        return 0.0
    raw = composition_sum(n, m, "simplex", family)
    log_c = -0.5 * m * math.log(2 * math.pi) + _log_binom(k, m) + log_kappa(k) - log_kappa(k - m)
    return math.exp(log_c) * raw


def expected_walk_zonotope(n: int, k: int, family: str) -> float:
    """E Vol_k of the zonotope spanned by a Gaussian walk (or bridge) in R^k."""
    raw = vk_zonotope_discrete(n, k, family)
    return math.exp(math.lgamma(k + 1) + log_kappa(k) - 0.5 * k * math.log(2 * math.pi)) * raw


def generalized_binomial(a: float, b: float) -> float:
    return math.exp(_log_binom(a, b))


def expected_brownian_zonoid_volume(k: int, family: str, mode: str = "via_tsirelson") -> float:
    """E Vol_k of the zonoid spanned by a k-dim Brownian motion or bridge.

    ``mode="as_printed"`` evaluates the published display verbatim;
    ``mode="via_tsirelson"`` rescales V_k of the L^inf ball.  For the motion
    the two differ by a factor kappa_k**2.
    """
    if k < 1:
        raise DomainError(f"k must be positive, got {k}")
    _family(family)
    if mode == "as_printed":
        log_v = -k * math.log(2.0 * math.sqrt(2 * math.pi)) - _log_binom(1.5 * k, k)
        if family == "BB":
            log_v += 0.5 * math.log(math.pi) - math.log(2.0)
        return math.exp(log_v)
    if mode == "via_tsirelson":
        scale = math.exp(math.lgamma(k + 1) + log_kappa(k) - 0.5 * k * math.log(2 * math.pi))
        return scale * vk_continuum(f"Linf_{family}", k)
    raise DomainError(f"mode must be as_printed or via_tsirelson, got {mode!r}")


def ellipsoid_v1_table(family: str, d: int) -> float:
    """V_1 of the ellipsoids E_d (axes 1/(n pi)) and F_d (axes 1/((n - 1/2) pi))."""
    table = {
        ("E", 2): 2.0 * math.log(2.0),
        ("E", 4): 2.0,
        ("F", 2): 8.0 * constant("catalan") / math.pi,
        ("F", 4): 28.0 * constant("zeta3") / math.pi**2,
    }
    try:
        return table[family, int(d)]
    except KeyError:
        raise UnsupportedError(f"no closed form for V_1({family}_{d})") from None


def ball_intrinsic_volume(n: int, k: int, radius: float = 1.0) -> float:
    """V_k of the radius-r ball in R^n: r^k C(n, k) kappa_n / kappa_{n-k}."""
    if not 0 <= k <= n:
        raise DomainError(f"need 0 <= k <= n, got k={k}, n={n}")
    return radius**k * math.comb(n, k) * kappa(n) / kappa(n - k)
