"""The numba kernels and the numpy fallback must agree.

The backend is fixed at import time, so each one runs in a fresh interpreter
and writes its outputs to an .npz file.
"""

import os
import subprocess
import sys

import numpy as np
import pytest

SCRIPT = r"""
import sys
import numpy as np
from intrinsic_volumes import kernels
from intrinsic_volumes.rng import RngStream
from intrinsic_volumes.closed_forms import vk_simplex_discrete, vk_zonotope_discrete

rng = RngStream(123, 4)
out = {"backend": np.array(kernels.BACKEND)}
out["uniform"] = rng.uniform_rows(7, 13)
out["normal"] = rng.normal_rows(5, 9)
z = RngStream(5).normal_rows(20, 64)
norms = np.empty((20, 4, 9))
kernels.path_norms(z, norms)
out["norms"] = norms
out["compositions"] = np.array([kernels.composition_sum(n, k, kind) for n in (5, 12) for k in (1, 2, 4) for kind in range(4)])
out["tables"] = np.array([f(9, 3, fam) for f in (vk_simplex_discrete, vk_zonotope_discrete) for fam in ("BM", "BB")])
pts = RngStream(6).normal_rows(30, 40).reshape(30, 20, 2)
pts[0] = 0.0
pts[1, :, 1] = pts[1, :, 0]
hull = np.empty((30, 2))
kernels.hull2d_measures(pts, hull)
out["hull"] = hull
gens = RngStream(7).normal_rows(30, 16).reshape(30, 8, 2)
area = np.empty(30)
kernels.zonotope2d_area(gens, area)
out["zonotope"] = area
np.savez(sys.argv[1], **out)
"""


def run_backend(backend, path):
    env = dict(os.environ, IVOL_BACKEND=backend)
    subprocess.run([sys.executable, "-c", SCRIPT, str(path)], env=env, check=True)
    return dict(np.load(path))


@pytest.fixture(scope="module")
def outputs(tmp_path_factory):
    root = tmp_path_factory.mktemp("parity")
    return run_backend("numba", root / "numba.npz"), run_backend("numpy", root / "numpy.npz")


def test_backends_are_selected(outputs):
    fast, slow = outputs
    assert str(fast["backend"]) == "numba"
    assert str(slow["backend"]) == "numpy"


def test_uniform_streams_identical(outputs):
    fast, slow = outputs
    assert np.array_equal(fast["uniform"], slow["uniform"])


@pytest.mark.parametrize("key", ["normal", "norms", "compositions", "tables", "hull", "zonotope"])
def test_kernels_agree(outputs, key):
    fast, slow = outputs
    np.testing.assert_allclose(fast[key], slow[key], rtol=1e-12, atol=1e-14)


def test_hull_matches_known_shapes(outputs):
    fast, _ = outputs
    assert np.array_equal(fast["hull"][0], [0.0, 0.0])
    assert fast["hull"][1, 0] == 0.0
