"""Time the numba kernels against the pure-numpy fallback.

Each backend runs in its own interpreter because the backend is fixed at
import time by IVOL_BACKEND.  Usage:

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, time
import numpy as np
from intrinsic_volumes import kernels
from intrinsic_volumes.rng import RngStream

def best(fn, repeat):
    fn()  # warm-up (and JIT compilation for numba)
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)

repeat = REPEAT
rng = RngStream(7)
z = rng.normal_rows(512, 4096)
norms = np.empty((512, 4, 9))
normals = np.empty((512, 4096))
pts = rng.normal_rows(2000, 200).reshape(2000, 100, 2)
hull = np.empty((2000, 2))
gens = rng.normal_rows(2000, 40).reshape(2000, 20, 2)
area = np.empty(2000)
cases = {
    "normal_rows 512x4096": lambda: kernels.fill_normal_rows(rng.key, 0, 4096, normals),
    "path_norms 512x4096": lambda: kernels.path_norms(z, norms),
    "composition_sum n=60 k=4": lambda: kernels.composition_sum(60, 4, 0),
    "hull2d 2000 sets x 100 pts": lambda: kernels.hull2d_measures(pts, hull),
    "zonotope2d 2000 x 20 gens": lambda: kernels.zonotope2d_area(gens, area),
}
print(json.dumps({"backend": kernels.BACKEND, "times": {k: best(f, repeat) for k, f in cases.items()}}))
"""


def run(backend: str, repeat: int) -> dict:
    env = dict(os.environ, IVOL_BACKEND=backend)
    out = subprocess.run(
        [sys.executable, "-c", WORKER.replace("REPEAT", str(repeat))],
        env=env,
        check=True,
        capture_output=True,
        text=True,
    )
    return json.loads(out.stdout)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    fast = run("numba", args.repeat)
    slow = run("numpy", args.repeat)
    assert fast["backend"] == "numba" and slow["backend"] == "numpy"
    print(f"{'kernel':32s} {'numba ms':>10s} {'numpy ms':>10s} {'speed-up':>9s}")
    for name, t_fast in fast["times"].items():
        t_slow = slow["times"][name]
        print(f"{name:32s} {t_fast * 1e3:10.2f} {t_slow * 1e3:10.2f} {t_slow / t_fast:8.1f}x")


if __name__ == "__main__":
    main()
