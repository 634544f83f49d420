"""Experiment runner: configs, seeded replication, CSV logging, tuning.

An experiment is a YAML config naming a problem (a built-in suite objective
or a saved localization instance file), an algorithm with its parameters,
the smoothing setup and a list of seeds.  ``run`` executes every seed,
writes one trajectory CSV per seed, a JSON manifest and an aggregate CSV
over a common oracle-call checkpoint grid.  ``tune`` sweeps a constant
stepsize (and optionally batch size) grid and picks the minimal median
final objective.  ``check`` replays the package's core numerical
invariants as a self-test.

CSV contract (header required, values at 12 significant digits):

    seed,iter,oracle_calls,measurement_calls,f_value,stepsize,grad_surrogate,wall_time_s

``oracle_calls`` counts algorithm queries only; measurement queries (the
stationarity surrogate and the logged objective values) go to
``measurement_calls``.  ``wall_time_s`` is written as 0 unless
``record_wall_time`` is set, keeping repeat runs byte-identical.
"""

from __future__ import annotations

import json
import math
import os
import platform
import statistics
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np
import yaml

from . import __version__ as _pkg_version
from . import algorithms, problems
from .algorithms import RunnerOptions, RunRecord, TheoryParams
from .exceptions import ConfigError, DivergenceError
from .growth import SmoothingConfig
from .smoothing import RngStream, smoothed_grad_reference

__all__ = [
    "ExperimentConfig",
    "AggregateResult",
    "load_config",
    "build_problem",
    "resolve_x0",
    "run",
    "run_seed",
    "measure_stationarity",
    "tune",
    "check",
    "aggregate",
    "aggregate_records",
    "write_trajectory_csv",
    "read_trajectory_csv",
    "stepsize_grid",
    "batch_grid",
    "CSV_HEADER",
]

CSV_HEADER = "seed,iter,oracle_calls,measurement_calls,f_value,stepsize,grad_surrogate,wall_time_s"

_ALGORITHMS = ("rs_gf", "rs_ngf", "rs_nvrgf", "gf", "vrgf")
_SUITES = ("constant", "linear", "quadratic", "abs1d", "worked1d")

_X0_STREAM = 500_000  # rng substream reserved for start-point draws


def stepsize_grid() -> list:
    """The 13-point dyadic tuning grid 2^(1 - 2i) for i = -6..6."""
    return [2.0 ** (1 - 2 * i) for i in range(-6, 7)]


def batch_grid() -> list:
    """The batch-size tuning grid for the batched methods."""
    return [2, 4, 8, 16, 32]


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment description; see ``load_config`` for the schema."""

    problem_suite: Optional[str] = None
    instance_path: Optional[str] = None
    problem_dim: Optional[int] = None
    algorithm: str = "rs_gf"
    Delta: Optional[float] = None
    T: int = 1000
    p: float = 0.1
    epsilon: float = 0.1
    stepsize: Optional[float] = None
    batch: Optional[int] = None
    b: Optional[int] = None
    q: Optional[int] = None
    big_batch: Optional[int] = None
    delta: float = 1e-4
    c: float = 1.0
    seeds: tuple = (0,)
    oracle_budget: Optional[int] = None
    measure_points: int = 20
    measure_every: Optional[int] = None
    b_eval: int = 10_000
    x0: object = "random"  # "random", "origin", or an explicit coordinate list
    output_dir: Optional[str] = None
    record_wall_time: bool = False
    guard_radius: float = 1e6
    batch_cap: int = 10_000_000

    def theory_params(self) -> TheoryParams:
        if self.Delta is None:
            raise ConfigError("algorithm requires Delta (initial objective-gap bound)")
        return TheoryParams(Delta=self.Delta, T=self.T, p=self.p, epsilon=self.epsilon)

    def runner_options(self) -> RunnerOptions:
        return RunnerOptions(
            oracle_budget=self.oracle_budget,
            measure_points=self.measure_points,
            measure_every=self.measure_every,
            b_eval=self.b_eval,
            guard_radius=self.guard_radius,
            batch_cap=self.batch_cap,
        )


_SCHEMA = {
    "problem": {"suite", "instance", "dim"},
    "algorithm": {"name", "Delta", "T", "p", "epsilon", "stepsize", "batch", "b", "q", "big_batch"},
    "smoothing": {"delta", "c"},
    "seeds": None,
    "oracle_budget": None,
    "measure_points": None,
    "measure_every": None,
    "b_eval": None,
    "x0": None,
    "output_dir": None,
    "record_wall_time": None,
}


def _check_keys(doc, allowed, where):
    unknown = set(doc) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {sorted(unknown)}")


def config_from_dict(doc: dict) -> ExperimentConfig:
    """Build a validated config from a nested plain dict (the YAML shape)."""
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a mapping")
    _check_keys(doc, set(_SCHEMA), "config")
    prob = doc.get("problem") or {}
    if not isinstance(prob, dict):
        raise ConfigError("'problem' must be a mapping")
    _check_keys(prob, _SCHEMA["problem"], "problem")
    suite = prob.get("suite")
    instance = prob.get("instance")
    if (suite is None) == (instance is None):
        raise ConfigError("problem needs exactly one of 'suite' or 'instance'")
    if suite is not None and suite not in _SUITES:
        raise ConfigError(f"unknown suite {suite!r}; choose from {_SUITES}")
    if instance is not None and not Path(instance).exists():
        raise ConfigError(f"instance file not found: {instance}")

    alg = doc.get("algorithm") or {}
    if not isinstance(alg, dict):
        raise ConfigError("'algorithm' must be a mapping")
    _check_keys(alg, _SCHEMA["algorithm"], "algorithm")
    name = alg.get("name")
    if name not in _ALGORITHMS:
        raise ConfigError(f"unknown algorithm {name!r}; choose from {_ALGORITHMS}")

    smooth = doc.get("smoothing") or {}
    if not isinstance(smooth, dict):
        raise ConfigError("'smoothing' must be a mapping")
    _check_keys(smooth, _SCHEMA["smoothing"], "smoothing")

    seeds = doc.get("seeds")
    if not seeds or not all(isinstance(s, int) for s in seeds):
        raise ConfigError("'seeds' must be a nonempty list of integers")

    budget = doc.get("oracle_budget")
    if budget is not None and (not isinstance(budget, int) or budget <= 0):
        raise ConfigError(f"oracle_budget must be a positive integer, got {budget!r}")

    x0 = doc.get("x0", "random")
    if isinstance(x0, str):
        if x0 not in ("random", "origin"):
            raise ConfigError(f"x0 must be 'random', 'origin' or a list, got {x0!r}")
    elif isinstance(x0, (list, tuple)):
        x0 = tuple(float(v) for v in x0)
    else:
        raise ConfigError(f"x0 must be 'random', 'origin' or a list, got {x0!r}")

    cfg = ExperimentConfig(
        problem_suite=suite,
        instance_path=instance,
        problem_dim=prob.get("dim"),
        algorithm=name,
        Delta=alg.get("Delta"),
        T=int(alg.get("T", 1000)),
        p=float(alg.get("p", 0.1)),
        epsilon=float(alg.get("epsilon", 0.1)),
        stepsize=alg.get("stepsize"),
        batch=alg.get("batch"),
        b=alg.get("b"),
        q=alg.get("q"),
        big_batch=alg.get("big_batch"),
        delta=float(smooth.get("delta", 1e-4)),
        c=float(smooth.get("c", 1.0)),
        seeds=tuple(int(s) for s in seeds),
        oracle_budget=budget,
        measure_points=int(doc.get("measure_points", 20)),
        measure_every=doc.get("measure_every"),
        b_eval=int(doc.get("b_eval", 10_000)),
        x0=x0,
        output_dir=doc.get("output_dir"),
        record_wall_time=bool(doc.get("record_wall_time", False)),
    )
    if cfg.algorithm in ("gf", "vrgf") and cfg.stepsize is None:
        raise ConfigError(f"algorithm {cfg.algorithm!r} requires a constant 'stepsize'")
    if cfg.algorithm == "vrgf" and (cfg.b is None or cfg.q is None or cfg.big_batch is None):
        raise ConfigError("algorithm 'vrgf' requires 'b', 'q' and 'big_batch'")
    if cfg.algorithm.startswith("rs_") and cfg.Delta is None:
        raise ConfigError(f"algorithm {cfg.algorithm!r} requires 'Delta'")
    SmoothingConfig(delta=cfg.delta, dim=1, c=cfg.c)  # validates delta and c
    return cfg


def load_config(path) -> ExperimentConfig:
    """Parse and validate a YAML experiment config; unknown keys are errors."""
    with open(path) as fh:
        doc = yaml.safe_load(fh)
    return config_from_dict(doc)


def build_problem(config: ExperimentConfig) -> problems.Problem:
    """Fresh problem instance (zeroed counters) described by the config."""
    if config.instance_path is not None:
        return problems.localization_problem(problems.load_instance(config.instance_path))
    dim = config.problem_dim
    if config.problem_suite == "constant":
        return problems.constant_problem(dim=dim or 2)
    if config.problem_suite == "linear":
        return problems.linear_problem(np.ones(dim or 3))
    if config.problem_suite == "quadratic":
        return problems.quadratic_problem(dim or 10)
    if config.problem_suite == "abs1d":
        return problems.abs1d_problem()
    if config.problem_suite == "worked1d":
        return problems.worked_example_1d()
    raise ConfigError(f"cannot build problem for config {config}")


def resolve_x0(config: ExperimentConfig, problem: problems.Problem, seed: int) -> np.ndarray:
    """Start point per the config: fixed list, origin, or a seed-bound draw."""
    if isinstance(config.x0, tuple):
        x0 = np.array(config.x0, dtype=float)
        if x0.shape != (problem.dim,):
            raise ConfigError(f"x0 has {x0.size} coordinates, problem needs {problem.dim}")
        return x0
    if config.x0 == "origin":
        return np.zeros(problem.dim)
    gen = RngStream(seed, _X0_STREAM).generator
    if config.instance_path is not None:
        inst = problems.load_instance(config.instance_path)
        return problems.initial_point(inst, gen)
    return gen.standard_normal(problem.dim)


# ---------------------------------------------------------------------------
# Execution
# ---------------------------------------------------------------------------

def run_seed(config: ExperimentConfig, seed: int, problem=None) -> RunRecord:
    """Execute one seed of the configured experiment."""
    f = problem if problem is not None else build_problem(config)
    cfg = SmoothingConfig(delta=config.delta, dim=f.dim, c=config.c)
    x0 = resolve_x0(config, f, seed)
    rng = RngStream(seed)
    opts = config.runner_options()
    name = config.algorithm
    if name == "rs_gf":
        return algorithms.rs_gf(f, f.model, cfg, config.theory_params(), x0, rng, opts)
    if name == "rs_ngf":
        return algorithms.rs_ngf(
            f, f.model, cfg, config.theory_params(), x0, rng, opts,
            stepsize=config.stepsize, batch=config.batch,
        )
    if name == "rs_nvrgf":
        return algorithms.rs_nvrgf(
            f, f.model, cfg, config.theory_params(), x0, rng, opts,
            stepsize=config.stepsize, b=config.b, q=config.q, big_batch=config.big_batch,
        )
    if name == "gf":
        return algorithms.gf_baseline(f, cfg, config.stepsize, config.T, x0, rng, opts)
    if name == "vrgf":
        return algorithms.vrgf_baseline(
            f, cfg, config.stepsize, config.T, config.b, config.big_batch, config.q,
            x0, rng, opts,
        )
    raise ConfigError(f"unknown algorithm {name!r}")


def _fmt(v) -> str:
    if v is None:
        return ""
    return "%.12g" % float(v)


def write_trajectory_csv(path, seed: int, record: RunRecord, record_wall_time: bool = False):
    wall = record.wall_time if record_wall_time else 0.0
    lines = [CSV_HEADER]
    for pt in record.trajectory:
        lines.append(
            ",".join(
                [
                    str(seed),
                    str(pt.iter),
                    str(pt.oracle_calls),
                    str(pt.measurement_calls),
                    _fmt(pt.f_value),
                    _fmt(pt.stepsize),
                    _fmt(pt.grad_surrogate),
                    _fmt(wall),
                ]
            )
        )
    Path(path).write_text("\n".join(lines) + "\n")


def read_trajectory_csv(path) -> dict:
    """Parse one trajectory CSV back into column arrays."""
    text = Path(path).read_text().strip().split("\n")
    if not text or text[0] != CSV_HEADER:
        raise ConfigError(f"{path}: missing or malformed header (expected {CSV_HEADER!r})")
    cols = {name: [] for name in CSV_HEADER.split(",")}
    names = CSV_HEADER.split(",")
    for lineno, line in enumerate(text[1:], start=2):
        parts = line.split(",")
        if len(parts) != len(names):
            raise ConfigError(f"{path}:{lineno}: expected {len(names)} fields, got {len(parts)}")
        for name, raw in zip(names, parts):
            if raw == "":
                cols[name].append(math.nan)
            else:
                try:
                    cols[name].append(float(raw))
                except ValueError as err:
                    raise ConfigError(f"{path}:{lineno}: bad value for {name}: {raw!r}") from err
    return {k: np.array(v) for k, v in cols.items()}


@dataclass
class AggregateResult:
    """Cross-seed statistics on a shared oracle-call checkpoint grid."""

    oracle_calls: np.ndarray
    f_mean: np.ndarray
    f_std: np.ndarray
    grad_mean: np.ndarray
    grad_std: np.ndarray
    n_seeds: int = 0

    def write_csv(self, path):
        lines = ["oracle_calls,f_mean,f_std,grad_surrogate_mean,grad_surrogate_std"]
        for i in range(len(self.oracle_calls)):
            lines.append(
                ",".join(
                    [
                        _fmt(self.oracle_calls[i]),
                        _fmt(self.f_mean[i]),
                        _fmt(self.f_std[i]),
                        "" if math.isnan(self.grad_mean[i]) else _fmt(self.grad_mean[i]),
                        "" if math.isnan(self.grad_std[i]) else _fmt(self.grad_std[i]),
                    ]
                )
            )
        Path(path).write_text("\n".join(lines) + "\n")


def _step_interp(grid, calls, values):
    """Last-value interpolation of a step trajectory onto a checkpoint grid."""
    out = np.full(len(grid), math.nan)
    order = np.argsort(calls, kind="stable")
    calls = np.asarray(calls)[order]
    values = np.asarray(values)[order]
    finite = ~np.isnan(values)
    calls, values = calls[finite], values[finite]
    if len(calls) == 0:
        return out
    idx = np.searchsorted(calls, grid, side="right") - 1
    valid = idx >= 0
    out[valid] = values[idx[valid]]
    return out


def aggregate_records(trajectories: list, n_checkpoints: int = 200) -> AggregateResult:
    """Aggregate per-seed column dicts onto a common oracle-call grid.

    The grid spans 0 to the largest oracle count seen; seeds that stopped
    earlier contribute their last value at later checkpoints.
    """
    if not trajectories:
        raise ConfigError("nothing to aggregate")
    top = max(float(t["oracle_calls"].max()) for t in trajectories)
    grid = np.linspace(0.0, top, n_checkpoints)
    F = np.stack([_step_interp(grid, t["oracle_calls"], t["f_value"]) for t in trajectories])
    G = np.stack(
        [_step_interp(grid, t["oracle_calls"], t["grad_surrogate"]) for t in trajectories]
    )
    # checkpoints before the first measurement have no surrogate for any
    # seed, and diverged seeds can log non-finite objective values
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", category=RuntimeWarning)
        g_mean = np.nanmean(G, axis=0)
        g_std = np.nanstd(G, axis=0)
        f_mean = F.mean(axis=0)
        f_std = F.std(axis=0)
    return AggregateResult(
        oracle_calls=grid,
        f_mean=f_mean,
        f_std=f_std,
        grad_mean=g_mean,
        grad_std=g_std,
        n_seeds=len(trajectories),
    )


def aggregate(run_dir, n_checkpoints: int = 200, write: bool = True) -> AggregateResult:
    """Aggregate all per-seed CSVs in a run directory; optionally write CSV."""
    run_dir = Path(run_dir)
    files = sorted(run_dir.glob("seed_*.csv"))
    if not files:
        raise ConfigError(f"no seed_*.csv files in {run_dir}")
    result = aggregate_records([read_trajectory_csv(p) for p in files], n_checkpoints)
    if write:
        result.write_csv(run_dir / "aggregate.csv")
    return result


def run(config: ExperimentConfig, output_dir=None) -> dict:
    """Execute every seed, write CSVs, manifest and aggregate; return manifest."""
    out = Path(output_dir or config.output_dir or os.environ.get("RSZERO_OUTPUT_DIR", "results"))
    out.mkdir(parents=True, exist_ok=True)
    records = {}
    for seed in config.seeds:
        rec = run_seed(config, seed)
        records[seed] = rec
        write_trajectory_csv(out / f"seed_{seed}.csv", seed, rec, config.record_wall_time)
    aggregate(out, write=True)
    manifest = {
        "config": _config_echo(config),
        "versions": {
            "package": _pkg_version,
            "numpy": np.__version__,
            "python": platform.python_version(),
        },
        "seeds": {
            str(seed): {
                "diverged": rec.diverged,
                "iterations": rec.iterations_run,
                "warnings": rec.warnings,
                "wall_time_s": rec.wall_time,
                "final_f": rec.trajectory[-1].f_value if rec.trajectory else None,
                "output_point": None if rec.output_point is None else rec.output_point.tolist(),
            }
            for seed, rec in records.items()
        },
        "diverged": any(rec.diverged for rec in records.values()),
        "files": [f"seed_{s}.csv" for s in config.seeds] + ["aggregate.csv"],
    }
    with open(out / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=1, default=float)
        fh.write("\n")
    manifest["output_dir"] = str(out)
    manifest["records"] = records
    return manifest


def _config_echo(config: ExperimentConfig) -> dict:
    doc = {
        "problem": {
            k: v
            for k, v in (
                ("suite", config.problem_suite),
                ("instance", config.instance_path),
                ("dim", config.problem_dim),
            )
            if v is not None
        },
        "algorithm": {
            k: v
            for k, v in (
                ("name", config.algorithm),
                ("Delta", config.Delta),
                ("T", config.T),
                ("p", config.p),
                ("epsilon", config.epsilon),
                ("stepsize", config.stepsize),
                ("batch", config.batch),
                ("b", config.b),
                ("q", config.q),
                ("big_batch", config.big_batch),
            )
            if v is not None
        },
        "smoothing": {"delta": config.delta, "c": config.c},
        "seeds": list(config.seeds),
        "oracle_budget": config.oracle_budget,
        "measure_points": config.measure_points,
        "measure_every": config.measure_every,
        "b_eval": config.b_eval,
        "x0": list(config.x0) if isinstance(config.x0, tuple) else config.x0,
        "record_wall_time": config.record_wall_time,
    }
    return doc


# ---------------------------------------------------------------------------
# Measurement and tuning
# ---------------------------------------------------------------------------

def measure_stationarity(f, x, cfg: SmoothingConfig, B_eval: int, rng: RngStream) -> float:
    """Norm of the large-batch smoothed-gradient reference at ``x``.

    Oracle calls are charged to the measurement counter.
    """
    if B_eval < 1:
        raise ValueError(f"B_eval must be >= 1, got {B_eval}")
    ref = smoothed_grad_reference(f, x, cfg, B_eval, rng, measurement=True)
    return float(np.linalg.norm(ref.vector))


def tune(
    config: ExperimentConfig,
    grid: Optional[list] = None,
    batches: Optional[list] = None,
) -> tuple[ExperimentConfig, dict]:
    """Grid-search a constant stepsize (and optional batch size).

    Each grid point runs the config's seeds; ranking is by median final
    objective (median best objective is recorded too).  Ties prefer the
    smaller stepsize, then the smaller batch.  Diverged seeds count as
    infinite; a grid point where all seeds diverge is infinite overall.
    """
    grid = list(grid) if grid is not None else stepsize_grid()
    if not grid:
        raise ConfigError("empty tuning grid")
    # without a batch grid, keep whatever batch the config already fixes
    batch_axis = sorted(batches) if batches else [config.batch]
    entries = []
    for eta in sorted(grid):
        for B in batch_axis:
            trial = replace(config, stepsize=float(eta), batch=B)
            finals, bests, diverged = [], [], 0
            for seed in config.seeds:
                rec = run_seed(trial, seed)
                fs = [pt.f_value for pt in rec.trajectory if np.isfinite(pt.f_value)]
                if rec.diverged or not fs:
                    diverged += 1
                    finals.append(math.inf)
                    bests.append(math.inf)
                else:
                    finals.append(rec.trajectory[-1].f_value)
                    bests.append(min(fs))
            entries.append(
                {
                    "stepsize": float(eta),
                    "batch": B,
                    "median_final": statistics.median(finals),
                    "median_best": statistics.median(bests),
                    "n_diverged": diverged,
                }
            )
    # sorted iteration order already prefers smaller stepsize, then batch
    best = min(entries, key=lambda e: e["median_final"])
    if not np.isfinite(best["median_final"]):
        raise DivergenceError("every tuning grid point diverged on every seed")
    best_config = replace(config, stepsize=best["stepsize"], batch=best["batch"])
    report = {"best": best, "entries": entries}
    return best_config, report


# ---------------------------------------------------------------------------
# Self-check suite
# ---------------------------------------------------------------------------

def _check_estimator_norm_bound():
    from .growth import estimate_norm_bound
    from .smoothing import sample_sphere, single_sample_estimates

    f = problems.quadratic_problem(6)
    cfg = SmoothingConfig(delta=0.05, dim=6)
    rng = RngStream(11)
    ok = True
    for _ in range(5):
        x = rng.generator.standard_normal(6)
        W = sample_sphere(6, rng, 2000)
        G = single_sample_estimates(f, x, cfg, W)
        bound = estimate_norm_bound(f.model, cfg, x)
        ok &= bool(np.all(np.linalg.norm(G, axis=1) <= bound * (1 + 1e-12)))
    return ok, "single-sample estimate norms within d(alpha + beta(x, 3 delta))"


def _check_unbiasedness():
    f = problems.quadratic_problem(5)
    cfg = SmoothingConfig(delta=0.01, dim=5)
    rng = RngStream(12)
    x = np.array([1.0, -0.5, 0.3, 0.0, 2.0])
    ref = smoothed_grad_reference(f, x, cfg, 200_000, rng)
    err = np.linalg.norm(ref.vector - f.grad_fdelta(x, cfg.delta))
    return bool(err <= 5 * ref.stderr), "estimator mean matches analytic smoothed gradient"


def _check_growth_calculus():
    from . import growth

    gam = lambda t: t ** 2 + 1.0
    direct = growth.radial(gam)
    via = growth.compose(growth.radial(gam), growth.lipschitz(1.0), lambda x: x)
    rng = np.random.default_rng(13)
    ok = True
    for _ in range(200):
        x = rng.standard_normal(3)
        r = float(rng.uniform(0, 2))
        ok &= math.isclose(direct.alpha(x), via.alpha(x), rel_tol=1e-12)
        ok &= math.isclose(direct.beta(x, r), via.beta(x, r), rel_tol=1e-12)
    return ok, "composition with a 1-Lipschitz inner map reproduces the radial bound"


def _check_value_gap():
    from .growth import validate_model

    ok = True
    for f in (problems.quadratic_problem(4), problems.abs1d_problem()):
        ok &= bool(validate_model(f.model, f, n_pairs=2000, seed=3))
    return ok, "declared bounds imply the local Lipschitz inequality on samples"


def _check_descent_inequality():
    from .growth import smoothness_modulus

    f = problems.quadratic_problem(5)
    cfg = SmoothingConfig(delta=0.05, dim=5)
    rng = np.random.default_rng(14)
    ok = True
    for _ in range(2000):
        x = rng.standard_normal(5)
        y = x + rng.uniform(0, 1) * _unit(rng, 5)
        r = float(np.linalg.norm(y - x))
        lhs = f.fdelta(y, cfg.delta) - f.fdelta(x, cfg.delta) - float(
            f.grad_fdelta(x, cfg.delta) @ (y - x)
        )
        ok &= lhs <= 0.5 * smoothness_modulus(f.model, cfg, x, r) * r ** 2 + 1e-9
    return ok, "smoothed objective satisfies the local descent inequality"


def _unit(rng, d):
    v = rng.standard_normal(d)
    return v / np.linalg.norm(v)


_CHECKS = {
    "estimator_norm_bound": _check_estimator_norm_bound,
    "unbiasedness": _check_unbiasedness,
    "growth_calculus": _check_growth_calculus,
    "value_gap": _check_value_gap,
    "descent_inequality": _check_descent_inequality,
}


def check(suite: Optional[list] = None) -> dict:
    """Run named numerical self-checks; failures are report content.

    ``suite=None`` runs everything; an explicit empty list yields an empty,
    passing report.
    """
    names = list(_CHECKS) if suite is None else list(suite)
    unknown = [n for n in names if n not in _CHECKS]
    if unknown:
        raise ConfigError(f"unknown check(s): {unknown}; available: {sorted(_CHECKS)}")
    results = []
    for name in names:
        passed, detail = _CHECKS[name]()
        results.append({"name": name, "passed": bool(passed), "detail": detail})
    return {"passed": all(r["passed"] for r in results), "checks": results}
