"""Intrinsic volumes of Sobolev-type balls, random walk hulls and ellipsoids:
closed forms, Monte Carlo estimators and the geometry to check them."""

from . import closed_forms, estimators, gaussian_sim, geometry, special_functions
from .closed_forms import (
    BodyFamily,
    expected_brownian_zonoid_volume,
    expected_walk_hull,
    v1_sobolev_exact,
    vk_continuum,
    vk_simplex_discrete,
    vk_zonotope_discrete,
)
from .errors import BudgetError, DomainError, IllConditionedError, NonFiniteDrawError, UnsupportedError
from .kernels import BACKEND
from .montecarlo import McResult, mc_mean
from .rng import RngStream

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BodyFamily",
    "BudgetError",
    "DomainError",
    "IllConditionedError",
    "McResult",
    "NonFiniteDrawError",
    "RngStream",
    "UnsupportedError",
    "closed_forms",
    "estimators",
    "expected_brownian_zonoid_volume",
    "expected_walk_hull",
    "gaussian_sim",
    "geometry",
    "mc_mean",
    "special_functions",
    "v1_sobolev_exact",
    "vk_continuum",
    "vk_simplex_discrete",
    "vk_zonotope_discrete",
]
