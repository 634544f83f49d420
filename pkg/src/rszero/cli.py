"""Command-line entry points for the experiment harness.

Subcommands: ``run`` (execute a config), ``tune`` (stepsize/batch grid
search), ``measure`` (stationarity surrogate at a point), ``check``
(numerical self-test), ``aggregate`` (recompute cross-seed statistics for a
results directory).  The default output directory comes from the
``RSZERO_OUTPUT_DIR`` environment variable when a config does not set one.

Exit codes: 0 success, 1 usage or configuration error, 2 divergence,
3 self-check failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import harness
from .exceptions import ConfigError, DivergenceError, EvaluationError
from .growth import SmoothingConfig
from .smoothing import RngStream

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DIVERGED = 2
EXIT_CHECK_FAILED = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rszero",
        description="Randomized-smoothing gradient-free optimization experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute every seed of an experiment config")
    p_run.add_argument("config", help="YAML experiment config")
    p_run.add_argument("--output-dir", default=None, help="override the output directory")

    p_tune = sub.add_parser("tune", help="grid-search a constant stepsize (and batch)")
    p_tune.add_argument("config", help="YAML experiment config")
    p_tune.add_argument(
        "--grid",
        default=None,
        help="comma-separated stepsizes (default: the dyadic 13-point grid)",
    )
    p_tune.add_argument(
        "--batches",
        default=None,
        help="comma-separated batch sizes to sweep jointly (default: none)",
    )

    p_meas = sub.add_parser("measure", help="stationarity surrogate at a point")
    p_meas.add_argument("config", help="YAML experiment config (problem + smoothing)")
    p_meas.add_argument("--point", required=True, help="JSON file holding the coordinates")
    p_meas.add_argument("--seed", type=int, default=0)

    p_check = sub.add_parser("check", help="run numerical self-checks")
    p_check.add_argument(
        "--suite",
        default=None,
        help="comma-separated check names (default: all; empty string: none)",
    )

    p_agg = sub.add_parser("aggregate", help="recompute aggregate.csv for a run directory")
    p_agg.add_argument("dir", help="directory containing seed_*.csv files")
    p_agg.add_argument("--checkpoints", type=int, default=200)

    return parser


def _cmd_run(args) -> int:
    config = harness.load_config(args.config)
    manifest = harness.run(config, output_dir=args.output_dir)
    for seed, info in manifest["seeds"].items():
        status = "diverged" if info["diverged"] else "ok"
        print(f"seed {seed}: {status}, final f = {info['final_f']}")
    print(f"wrote {manifest['output_dir']}")
    return EXIT_DIVERGED if manifest["diverged"] else EXIT_OK


def _cmd_tune(args) -> int:
    config = harness.load_config(args.config)
    grid = [float(v) for v in args.grid.split(",")] if args.grid else None
    batches = [int(v) for v in args.batches.split(",")] if args.batches else None
    best_config, report = harness.tune(config, grid=grid, batches=batches)
    for entry in report["entries"]:
        print(
            f"stepsize {entry['stepsize']:.6g}"
            + (f" batch {entry['batch']}" if entry["batch"] is not None else "")
            + f": median final {entry['median_final']:.6g},"
            f" median best {entry['median_best']:.6g},"
            f" diverged {entry['n_diverged']}/{len(config.seeds)}"
        )
    best = report["best"]
    print(
        f"selected stepsize {best['stepsize']:.6g}"
        + (f", batch {best['batch']}" if best["batch"] is not None else "")
    )
    return EXIT_OK


def _cmd_measure(args) -> int:
    config = harness.load_config(args.config)
    with open(args.point) as fh:
        x = np.array(json.load(fh), dtype=float)
    f = harness.build_problem(config)
    if x.shape != (f.dim,):
        raise ConfigError(f"point has {x.size} coordinates, problem needs {f.dim}")
    cfg = SmoothingConfig(delta=config.delta, dim=f.dim, c=config.c)
    value = harness.measure_stationarity(f, x, cfg, config.b_eval, RngStream(args.seed))
    print(f"{value:.12g}")
    return EXIT_OK


def _cmd_check(args) -> int:
    if args.suite is None:
        suite = None
    elif args.suite.strip() == "":
        suite = []
    else:
        suite = [s.strip() for s in args.suite.split(",")]
    report = harness.check(suite)
    for entry in report["checks"]:
        print(f"{'PASS' if entry['passed'] else 'FAIL'} {entry['name']}: {entry['detail']}")
    return EXIT_OK if report["passed"] else EXIT_CHECK_FAILED


def _cmd_aggregate(args) -> int:
    result = harness.aggregate(args.dir, n_checkpoints=args.checkpoints)
    print(f"aggregated {result.n_seeds} seeds onto {len(result.oracle_calls)} checkpoints")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    handlers = {
        "run": _cmd_run,
        "tune": _cmd_tune,
        "measure": _cmd_measure,
        "check": _cmd_check,
        "aggregate": _cmd_aggregate,
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, FileNotFoundError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except DivergenceError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DIVERGED
    except EvaluationError as err:
        print(f"error: objective evaluation failed: {err}", file=sys.stderr)
        return EXIT_DIVERGED


if __name__ == "__main__":
    sys.exit(main())
