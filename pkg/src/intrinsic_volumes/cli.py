"""Command-line experiment runner.

    ivol exact  --experiment vk_continuum --family Kinf_BM --k 1..5
    ivol mc     --experiment walk_hull --n 6 --k 2 --seed 1
    ivol verify --experiment sudakov_p1_KBM --seed 1
    ivol dist   --experiment K1_BB --seed 1
    ivol suite  --seed 1

Exit codes: 0 success, 2 unknown experiment or unsupported parameters,
3 budget exceeded, 4 a verification or distribution test failed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .acceptance import CRITERIA, run_suite
from .errors import BudgetError, DomainError
from .experiments import DIST_IDENTITIES, ESTIMATORS, EXACT, resolve_estimator, run_dist, status_of
from .montecarlo import default_workers
from .report import render

EXIT_OK, EXIT_UNSUPPORTED, EXIT_BUDGET, EXIT_FAILED = 0, 2, 3, 4

PARAM_KEYS = ("n", "k", "m", "family", "star", "p", "set_class", "mode", "sigma")
DEFAULT_SAMPLES = {"mc": 100_000, "verify": 100_000, "dist": 10_000}


@dataclass
class ExperimentConfig:
    command: str
    experiment: Optional[str]
    params: dict = field(default_factory=dict)
    n_samples: int = 100_000
    seed: Optional[int] = None
    workers: int = 1
    output: str = "json"
    out_path: Optional[str] = None
    timing: bool = False
    criteria: Optional[list] = None


def parse_int_list(text) -> list[int] | int:
    """``"3"`` -> 3, ``"1..5"`` -> [1, 2, 3, 4, 5], ``"1,4"`` -> [1, 4]."""
    if isinstance(text, (int, list)):
        return text
    text = str(text).strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        lo, hi = int(lo), int(hi)
        if hi < lo:
            raise DomainError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    if "," in text:
        return [int(v) for v in text.split(",") if v.strip()]
    return int(text)


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--experiment", help="experiment id (see --list)")
    common.add_argument("--n", help="size parameter; ranges like 1..5 allowed")
    common.add_argument("--k", help="dimension/order; ranges like 1..5 allowed")
    common.add_argument("--m", help="intrinsic volume index")
    common.add_argument("--family", help="body or process family, e.g. Kinf_BM, BM, E")
    common.add_argument("--star", help="boundary condition BM, CBM, BB or CBB")
    common.add_argument("--p", help="smoothness exponent 1, 2 or inf")
    common.add_argument("--steps", type=int, help="grid steps for path experiments")
    common.add_argument("--mode", help="experiment-specific variant (corrected/grid, via_tsirelson/as_printed)")
    common.add_argument("--samples", type=int, help="Monte Carlo sample count")
    common.add_argument("--seed", type=int, help="random seed (required for random experiments)")
    common.add_argument("--workers", type=int, help="threads (default: available CPUs)")
    common.add_argument("--out", choices=("json", "csv"), help="output format (default json)")
    common.add_argument("--out-path", dest="out_path", help="write output here instead of stdout")
    common.add_argument("--config", help="JSON file with the same keys; flags override it")
    common.add_argument("--timing", action="store_true", default=None, help="add runtime_ms to each record")
    common.add_argument("--list", action="store_true", help="list experiment ids and exit")
    parser = argparse.ArgumentParser(prog="ivol", description="Intrinsic volume experiments.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("exact", parents=[common], help="closed-form tables")
    sub.add_parser("mc", parents=[common], help="Monte Carlo estimates")
    sub.add_parser("verify", parents=[common], help="Monte Carlo estimates against closed forms")
    sub.add_parser("dist", parents=[common], help="KS tests of width distribution identities")
    suite = sub.add_parser("suite", parents=[common], help="the numbered acceptance criteria")
    suite.add_argument("--criteria", help="subset of criteria, e.g. 1,4 or 1..5")
    return parser


def _known(command: str) -> list[str]:
    if command == "exact":
        return sorted(EXACT)
    if command in ("mc", "verify"):
        return sorted(ESTIMATORS) + ["sudakov_p<1|inf>_<K|L><BM|CBM|BB|CBB>"]
    if command == "dist":
        return sorted(DIST_IDENTITIES) + ["self_test", "all"]
    return [f"{n}: {CRITERIA[n][0]}" for n in sorted(CRITERIA)]


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    file_cfg: dict = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            file_cfg = json.load(fh)
        if not isinstance(file_cfg, dict):
            raise DomainError("config file must hold a JSON object")

    def pick(key: str, default=None):
        value = getattr(args, key, None)
        if value is None:
            value = file_cfg.get(key)
        return default if value is None else value

    params = {}
    for key in PARAM_KEYS:
        value = pick(key)
        if value is not None:
            params[key] = parse_int_list(value) if key in ("n", "k", "m") else value
    steps = pick("steps")
    if steps is not None:
        params["n_steps"] = int(steps)
    seed = pick("seed")
    criteria = pick("criteria")
    cfg = ExperimentConfig(
        command=args.command,
        experiment=pick("experiment"),
        params=params,
        n_samples=int(pick("samples", DEFAULT_SAMPLES.get(args.command, 100_000))),
        seed=None if seed is None else int(seed),
        workers=int(pick("workers", default_workers())),
        output=pick("out", "json"),
        out_path=pick("out_path"),
        timing=bool(pick("timing", False)),
        criteria=None if criteria is None else parse_int_list(criteria),
    )
    if isinstance(cfg.criteria, int):
        cfg.criteria = [cfg.criteria]
    if cfg.output not in ("json", "csv"):
        raise DomainError(f"output must be json or csv, got {cfg.output!r}")
    if cfg.n_samples < 2 or cfg.workers < 1:
        raise DomainError("samples must be at least 2 and workers at least 1")
    return cfg


def _validate(cfg: ExperimentConfig) -> None:
    """Reject unknown experiments and a missing seed before any computation."""
    if cfg.command != "exact" and cfg.seed is None:
        raise DomainError(f"--seed is required for '{cfg.command}'")
    if cfg.seed is not None and cfg.seed < 0:
        raise DomainError("seed must be nonnegative")
    if cfg.command == "suite":
        for c in cfg.criteria or []:
            if c not in CRITERIA:
                raise DomainError(f"unknown criterion {c}; known: {sorted(CRITERIA)}")
        return
    if not cfg.experiment:
        raise DomainError(f"--experiment is required; known: {', '.join(_known(cfg.command))}")
    if cfg.command == "exact" and cfg.experiment not in EXACT:
        raise DomainError(f"unknown experiment {cfg.experiment!r}; known: {', '.join(_known('exact'))}")
    if cfg.command in ("mc", "verify"):
        resolve_estimator(cfg.experiment, cfg.params)
    if cfg.command == "dist" and cfg.experiment not in (*DIST_IDENTITIES, "self_test", "all"):
        raise DomainError(f"unknown identity {cfg.experiment!r}; known: {', '.join(_known('dist'))}")


def _stamp(rec: dict, cfg: ExperimentConfig, n_samples: int, started: float) -> dict:
    rec.setdefault("seed", cfg.seed)
    rec.setdefault("n_samples", n_samples)
    rec.setdefault("workers", cfg.workers)
    if cfg.timing:
        rec["runtime_ms"] = round((time.perf_counter() - started) * 1000.0, 3)
    return rec


def _error_record(cfg: ExperimentConfig, exc: BaseException) -> dict:
    return {"experiment": cfg.experiment, "params": cfg.params, "error": str(exc), "status": status_of(exc)}


def cmd_exact(cfg: ExperimentConfig) -> tuple[list[dict], int]:
    started = time.perf_counter()
    rows = EXACT[cfg.experiment](cfg.params)
    code = max([r.get("status", EXIT_OK) for r in rows], default=EXIT_OK)
    return [_stamp(r, cfg, 0, started) for r in rows], code


def _estimates(cfg: ExperimentConfig):
    name, params = resolve_estimator(cfg.experiment, cfg.params)
    return ESTIMATORS[name](params, cfg.n_samples, cfg.seed, cfg.workers)


def cmd_mc(cfg: ExperimentConfig) -> tuple[list[dict], int]:
    started = time.perf_counter()
    try:
        estimates = _estimates(cfg)
    except (DomainError, BudgetError) as exc:
        return [_stamp(_error_record(cfg, exc), cfg, cfg.n_samples, started)], status_of(exc)
    rows = [
        _stamp(
            {"experiment": e.name, "params": e.params, "estimate": e.mc.estimate, "std_error": e.mc.std_error},
            cfg,
            e.mc.n_samples,
            started,
        )
        for e in estimates
    ]
    return rows, EXIT_OK


def cmd_verify(cfg: ExperimentConfig) -> tuple[list[dict], int]:
    started = time.perf_counter()
    try:
        estimates = _estimates(cfg)
    except (DomainError, BudgetError) as exc:
        return [_stamp(_error_record(cfg, exc), cfg, cfg.n_samples, started)], status_of(exc)
    rows, code = [], EXIT_OK
    for e in estimates:
        r = e.report()
        rows.append(
            _stamp(
                {
                    "experiment": r.name,
                    "params": {**e.params, "tolerance_policy": r.tolerance_policy},
                    "exact": r.exact,
                    "estimate": r.mc.estimate,
                    "std_error": r.mc.std_error,
                    "z_score": r.z_score,
                    "pass": r.passed,
                },
                cfg,
                r.mc.n_samples,
                started,
            )
        )
        if not r.passed:
            code = EXIT_FAILED
    return rows, code


def cmd_dist(cfg: ExperimentConfig) -> tuple[list[dict], int]:
    names = [*DIST_IDENTITIES, "self_test"] if cfg.experiment == "all" else [cfg.experiment]
    mode = cfg.params.get("mode", "corrected")
    if mode not in ("corrected", "grid"):
        raise DomainError(f"dist mode must be corrected or grid, got {mode!r}")
    rows, code = [], EXIT_OK
    for name in names:
        started = time.perf_counter()
        rec = run_dist(
            name,
            cfg.n_samples,
            cfg.seed,
            cfg.workers,
            n_steps=cfg.params.get("n_steps", 8192),
            sup_correction=mode == "corrected",
        )
        rows.append(_stamp(rec, cfg, cfg.n_samples, started))
        if not rec["pass"]:
            code = EXIT_FAILED
    return rows, code


def cmd_suite(cfg: ExperimentConfig) -> tuple[list[dict], int]:
    started = time.perf_counter()
    results = run_suite(cfg.seed, cfg.workers, cfg.criteria)
    rows = []
    for res in results:
        rows += [_stamp(r, cfg, r["n_samples"], started) for r in res.records(cfg.seed, cfg.workers)]
        print(f"criterion {res.number:2d} {'PASS' if res.passed else 'FAIL'}  {res.title}", file=sys.stderr)
    code = EXIT_OK if all(r.passed for r in results) else EXIT_FAILED
    return rows, code


COMMANDS = {"exact": cmd_exact, "mc": cmd_mc, "verify": cmd_verify, "dist": cmd_dist, "suite": cmd_suite}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parser().parse_args(argv)
    if args.list:
        print("\n".join(_known(args.command)))
        return EXIT_OK
    try:
        cfg = build_config(args)
        _validate(cfg)
        rows, code = COMMANDS[cfg.command](cfg)
    except (DomainError, ValueError, OSError) as exc:
        print(f"ivol: error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except BudgetError as exc:
        print(f"ivol: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    text = render(rows, cfg.output)
    if cfg.out_path:
        with open(cfg.out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
