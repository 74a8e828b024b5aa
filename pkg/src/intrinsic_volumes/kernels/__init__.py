"""Kernel dispatch.  Import names from here, never from the backends."""

from .._accel import BACKEND

if BACKEND == "numba":
    from ._numba import (
        composition_sum,
        fill_normal_rows,
        fill_uniform_rows,
        hull2d_measures,
        path_norms,
        zonotope2d_area,
    )
else:
    from ._numpy import (  # type: ignore[assignment]
        composition_sum,
        fill_normal_rows,
        fill_uniform_rows,
        hull2d_measures,
        path_norms,
        zonotope2d_area,
    )

__all__ = [
    "BACKEND",
    "composition_sum",
    "fill_normal_rows",
    "fill_uniform_rows",
    "hull2d_measures",
    "path_norms",
    "zonotope2d_area",
]
