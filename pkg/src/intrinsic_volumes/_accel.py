"""Backend selection for the hot kernels.

The numba kernels are used whenever numba imports cleanly.  Setting the
environment variable ``IVOL_BACKEND=numpy`` before import forces the
pure-numpy implementations instead (useful for debugging and for the
benchmark that compares the two).
"""

import os

BACKEND_ENV = "IVOL_BACKEND"

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False


def requested_backend() -> str:
    value = os.environ.get(BACKEND_ENV, "numba").strip().lower()
    if value not in ("numba", "numpy"):
        raise ValueError(f"{BACKEND_ENV} must be 'numba' or 'numpy', got {value!r}")
    return value


BACKEND = "numba" if HAVE_NUMBA and requested_backend() == "numba" else "numpy"
