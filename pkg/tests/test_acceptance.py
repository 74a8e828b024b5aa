"""The fourteen acceptance criteria at their stated tolerances.

The suite command runs twice in separate interpreters with the same seed and
worker count.  Criteria 1-13 are read from the first run's records and
criterion 14 compares the two output files byte for byte.  One pass/fail line
per criterion is printed in the terminal summary.
"""

import json
import subprocess
import sys

import pytest

from conftest import ACCEPTANCE_LINES

SEED = 20261016
WORKERS = 1
TITLES = {
    1: "exact first intrinsic volumes",
    2: "mean width route, p = 1",
    3: "mean width route, p = inf",
    4: "Gram determinants against product formulas",
    5: "zonotope sums against explicit generators",
    6: "walk hulls",
    7: "walk hull half-perimeter",
    8: "planar Brownian hull area",
    9: "k = 1 zonoid adjudication",
    10: "ellipsoids, Laplace transforms, duality",
    11: "width distribution identities",
    12: "discrete-to-continuum limits",
    13: "Steiner and projection oracles",
    14: "identical bytes from two suite runs",
}
# The tabulated value 2/sqrt(3) for the centred-bridge sup ball is twice what
# the bridge variance 1/12 gives; the simulation lands on 1/sqrt(3).
KNOWN_FAILURES = {3: "tabulated Kinf_CBB value 2/sqrt(3) disagrees with the variance integral (1/sqrt(3))"}


def run_suite(path):
    cmd = [sys.executable, "-m", "intrinsic_volumes", "suite", "--seed", str(SEED), "--workers", str(WORKERS), "--out-path", str(path)]
    return subprocess.run(cmd, capture_output=True, text=True, timeout=1800)


@pytest.fixture(scope="session")
def suite_runs(tmp_path_factory):
    root = tmp_path_factory.mktemp("suite")
    first, second = root / "first.jsonl", root / "second.jsonl"
    procs = [run_suite(first), run_suite(second)]
    return procs, first, second


@pytest.fixture(scope="session")
def by_criterion(suite_runs):
    procs, first, _ = suite_runs
    assert procs[0].returncode in (0, 4), procs[0].stderr
    grouped: dict = {}
    for line in first.read_text().splitlines():
        rec = json.loads(line)
        grouped.setdefault(int(rec["experiment"].split("_")[1]), []).append(rec)
    return grouped


def describe(rec):
    p = rec["params"]
    parts = [p["check"]]
    if "z_score" in rec:
        parts.append(f"z={rec['z_score']:+.2f}")
    elif "estimate" in rec and "exact" in rec:
        parts.append(f"est={rec['estimate']:.6g} exact={rec['exact']:.6g}")
    return " ".join(parts)


def record_line(number, passed, detail=""):
    verdict = "PASS" if passed else "FAIL"
    line = f"criterion {number:2d} {verdict}  {TITLES[number]}"
    if detail:
        line += f"  [{detail}]"
    ACCEPTANCE_LINES[number] = line
    print(line)


@pytest.mark.slow
@pytest.mark.parametrize("number", range(1, 14))
def test_criterion(by_criterion, number, request):
    if number in KNOWN_FAILURES:
        request.applymarker(pytest.mark.xfail(reason=KNOWN_FAILURES[number], strict=True))
    records = by_criterion[number]
    summary = records[-1]
    assert summary["params"]["summary"] is True
    checks = [r for r in records[:-1] if not r["params"]["informational"]]
    failed = [describe(r) for r in checks if not r["pass"]]
    record_line(number, summary["pass"], "; ".join(failed))
    assert checks, "criterion produced no checks"
    assert summary["pass"] == all(r["pass"] for r in checks)
    assert summary["pass"], "failed checks: " + "; ".join(failed)


@pytest.mark.slow
def test_criterion_3_other_bodies(by_criterion):
    """Every p = inf body except the centred bridge meets |z| <= 4."""
    checks = [r for r in by_criterion[3] if "params" in r and not r["params"].get("informational") and "check" in r["params"]]
    others = [r for r in checks if "CBB" not in r["params"]["check"]]
    assert len(others) == 5
    assert all(r["pass"] and abs(r["z_score"]) <= 4 for r in others)
    cbb = [r for r in checks if "CBB" in r["params"]["check"]]
    assert len(cbb) == 1 and not cbb[0]["pass"]


@pytest.mark.slow
def test_criterion_3_centred_bridge_matches_variance_integral(by_criterion):
    info = [r for r in by_criterion[3] if r["params"].get("informational") and "CBB" in r["params"]["check"]]
    assert info and all(abs(r["z_score"]) <= 4 for r in info)


@pytest.mark.slow
def test_criterion_14_reproducible(suite_runs):
    procs, first, second = suite_runs
    same = procs[0].returncode == procs[1].returncode and first.read_bytes() == second.read_bytes()
    record_line(14, same)
    assert procs[0].stderr == procs[1].stderr
    assert same
