"""Randomized-smoothing optimizers for nonsmooth black-box objectives.

Three methods share the same estimator machinery:

* ``rs_gf``   -- single-sample gradient descent with a stepsize adapted to
  the local growth bound.
* ``rs_ngf``  -- batched, normalized steps (the update has length exactly
  ``eta_t``), with batch size adapted to the local noise/smoothness ratio.
* ``rs_nvrgf`` -- normalized steps driven by a variance-reduced gradient
  tracker: a periodic big-batch refresh plus paired small-batch corrections
  that reuse the same sample set at the current and previous iterate.

``gf_baseline`` and ``vrgf_baseline`` are the constant-stepsize,
un-normalized counterparts used for benchmarking.

All stepsize/batch schedules are closed-form functions of the declared
growth bound at the current iterate; denominators are floor-guarded at
1e-12 so degenerate bounds still yield finite steps.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .exceptions import EvaluationError
from .growth import (
    GrowthModel,
    SmoothingConfig,
    noise_scale,
    smoothness_modulus,
)
from .smoothing import (
    RngStream,
    grad_estimate,
    sample_sphere,
    single_sample_estimates,
    smoothed_grad_reference,
)

__all__ = [
    "TheoryParams",
    "RunnerOptions",
    "TrajectoryPoint",
    "RunRecord",
    "coefficient_rs_gf",
    "coefficient_rs_ngf",
    "coefficient_rs_nvrgf",
    "stepsize_rs_gf",
    "stepsize_rs_ngf",
    "stepsize_rs_nvrgf",
    "batch_rs_ngf",
    "schedule_rs_nvrgf",
    "rs_gf",
    "rs_ngf",
    "rs_nvrgf",
    "gf_baseline",
    "vrgf_baseline",
    "select_output",
]

_FLOOR = 1e-12


@dataclass(frozen=True)
class TheoryParams:
    """Inputs of the theory-driven schedules.

    ``Delta`` upper-bounds the smoothed-objective gap at the start point,
    ``T`` is the iteration budget, ``p`` the admissible failure probability
    and ``epsilon`` the target stationarity (it sets the refresh period of
    the variance-reduced method).
    """

    Delta: float
    T: int
    p: float = 0.1
    epsilon: float = 0.1

    def __post_init__(self):
        if not (np.isfinite(self.Delta) and self.Delta > 0):
            raise ValueError(f"Delta must be positive, got {self.Delta}")
        if self.T < 1 or int(self.T) != self.T:
            raise ValueError(f"T must be a positive integer, got {self.T}")
        if not (0.0 < self.p < 1.0):
            raise ValueError(f"p must lie in (0, 1), got {self.p}")
        if not (np.isfinite(self.epsilon) and self.epsilon > 0):
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")


@dataclass
class RunnerOptions:
    """Shared knobs of the algorithm runners."""

    oracle_budget: Optional[int] = None  # stop before exceeding this many algorithm calls
    measure_points: int = 20  # stationarity measurements per run (0 disables)
    measure_every: Optional[int] = None  # fixed period override for measurements
    b_eval: int = 10_000  # samples per stationarity measurement
    log_points: int = 200  # trajectory rows per run (endpoints always logged)
    guard_radius: float = 1e6  # iterate-norm diagnostic threshold
    batch_cap: int = 10_000_000
    move_on_refresh: bool = True  # take the normalized step on refresh iterations too
    keep_iterates: bool = False  # retain every iterate (and tracker) in the record
    measure_stream_offset: int = 1_000_000  # stream id offset for measurement draws


@dataclass
class TrajectoryPoint:
    iter: int
    oracle_calls: int
    measurement_calls: int
    f_value: float
    stepsize: float
    grad_surrogate: Optional[float] = None


@dataclass
class RunRecord:
    """Full account of one optimizer run."""

    algorithm: str
    trajectory: list = field(default_factory=list)
    output_point: Optional[np.ndarray] = None
    final_point: Optional[np.ndarray] = None
    seeds: tuple = ()
    wall_time: float = 0.0
    diverged: bool = False
    warnings: list = field(default_factory=list)
    measured: list = field(default_factory=list)  # (iter, point, surrogate)
    batch_log: list = field(default_factory=list)  # per-iteration batch sizes, where batched
    refresh_count: int = 0
    iterations_run: int = 0
    iterates: list = field(default_factory=list)  # populated only with keep_iterates
    trackers: list = field(default_factory=list)  # per-iteration gradient tracker, ditto


# ---------------------------------------------------------------------------
# Stepsize and batch schedules
# ---------------------------------------------------------------------------

def _log_factor(params: TheoryParams) -> float:
    return math.log(2.0 * params.T / params.p) * math.sqrt(params.T)


def coefficient_rs_gf(model: GrowthModel, cfg: SmoothingConfig, params: TheoryParams, x) -> float:
    """Stepsize coefficient of the single-sample method at ``x``."""
    d = cfg.dim
    delta = cfg.delta
    a = model.alpha(x)
    c3 = a + model.beta(x, 3.0 * delta)
    c1 = a + model.beta(x, delta)
    t1 = params.Delta / (2.0 * (d + 1) * (c3 + 1.0) ** 2)
    t2 = (math.sqrt(6.0) / 12.0) * params.Delta / max(noise_scale(model, cfg, x) * c1, _FLOOR)
    r3 = params.Delta / (d * (c3 + 1.0) * math.sqrt(params.T))
    ell = smoothness_modulus(model, cfg, x, r3)
    t3 = math.sqrt(params.Delta / max(ell, _FLOOR)) / max(d * c3, _FLOOR)
    return min(t1, t2, t3)


def stepsize_rs_gf(model, cfg, params, x) -> float:
    return coefficient_rs_gf(model, cfg, params, x) / _log_factor(params)


def coefficient_rs_ngf(model, cfg, params, x) -> float:
    """Stepsize coefficient of the normalized batched method at ``x``."""
    delta = cfg.delta
    c1 = model.alpha(x) + model.beta(x, delta)
    r = params.Delta / ((c1 + 1.0) * math.sqrt(params.T))
    ell = smoothness_modulus(model, cfg, x, r)
    t1 = params.Delta / (12.0 * (c1 + 1.0))
    t2 = math.sqrt(params.Delta / max(3.0 * ell, _FLOOR))
    t3 = 2.0 * params.Delta / max(math.sqrt(max(ell, 0.0)), _FLOOR)
    return min(t1, t2, t3)


def stepsize_rs_ngf(model, cfg, params, x) -> float:
    return coefficient_rs_ngf(model, cfg, params, x) / _log_factor(params)


def batch_rs_ngf(model, cfg, params, x, cap: int = 10_000_000) -> int:
    """Batch size of the normalized method: noise over local smoothness."""
    c1 = model.alpha(x) + model.beta(x, cfg.delta)
    r = params.Delta / ((c1 + 1.0) * math.sqrt(params.T))
    ell = smoothness_modulus(model, cfg, x, r)
    sig = noise_scale(model, cfg, x)
    raw = params.T * sig ** 2 / max(ell, _FLOOR)
    return int(min(max(math.ceil(raw), 1), cap))


def coefficient_rs_nvrgf(model, cfg, params, x) -> float:
    """Stepsize coefficient of the variance-reduced normalized method."""
    d = cfg.dim
    delta = cfg.delta
    a = model.alpha(x)
    c1 = a + model.beta(x, delta)
    sqrtT = math.sqrt(params.T)
    t1 = math.sqrt(delta) / d ** 0.25
    t2 = params.Delta / (24.0 * (c1 + 1.0))
    shifted = a + model.beta(x, delta + params.Delta / (sqrtT * (c1 + 1.0)))
    t3 = params.Delta * math.sqrt(delta) / (d ** 0.25 * max(shifted, _FLOOR))
    ell = smoothness_modulus(model, cfg, x, params.Delta / ((c1 + 1.0) * sqrtT))
    t4 = math.sqrt(2.0 * params.Delta / max(3.0 * ell, _FLOOR))
    return min(t1, t2, t3, t4)


def stepsize_rs_nvrgf(model, cfg, params, x) -> float:
    return coefficient_rs_nvrgf(model, cfg, params, x) / _log_factor(params)


def schedule_rs_nvrgf(model, cfg, params, x_refresh, cap: int = 10_000_000) -> tuple[int, int, int]:
    """(big batch, small batch, refresh period) for the variance-reduced method.

    The big batch is recomputed at every refresh point from the noise scale
    there; the small batch and period are fixed by the target stationarity.
    """
    q = max(int(math.ceil(1.0 / params.epsilon)), 1)
    b = int(min(max(math.ceil(72.0 * q * cfg.dim), 1), cap))
    sig = noise_scale(model, cfg, x_refresh)
    raw = 72.0 * sig ** 2 * params.T * cfg.delta / math.sqrt(cfg.dim)
    B = int(min(max(math.ceil(raw), 1), cap))
    return B, b, q


# ---------------------------------------------------------------------------
# Run recording
# ---------------------------------------------------------------------------

class _Recorder:
    """Trajectory logging, stationarity measurement and guard diagnostics."""

    def __init__(self, algorithm, f, cfg, opts, rng, T):
        self.f = f
        self.cfg = cfg
        self.opts = opts
        self.record = RunRecord(algorithm=algorithm, seeds=(rng.seed, rng.stream_id))
        self.measure_rng = rng.spawn(rng.stream_id + opts.measure_stream_offset)
        if opts.measure_every is not None and opts.measure_every >= 1:
            self.measure_iters = set(range(opts.measure_every, T + 1, opts.measure_every)) | {T}
        else:
            self.measure_iters = self._spread(T, opts.measure_points)
        self.log_iters = self._spread(T, opts.log_points)
        self._warned_radius = False
        self._last = None  # (iter, x, stepsize) of the latest executed iteration
        self._t0 = time.perf_counter()

    @staticmethod
    def _spread(T, k):
        if k <= 0:
            return set()
        return {max(1, int(round(i * T / k))) for i in range(1, k + 1)} | {T}

    def maybe_measure(self, t, x):
        if t in self.measure_iters:
            ref = smoothed_grad_reference(
                self.f, x, self.cfg, self.opts.b_eval, self.measure_rng, measurement=True
            )
            surrogate = float(np.linalg.norm(ref.vector))
            self.record.measured.append((t, np.array(x, copy=True), surrogate))
            return surrogate
        return None

    def log(self, t, x, stepsize, surrogate=None, force=False):
        if t == 0 and self.opts.keep_iterates:
            self.record.iterates.append(np.array(x, copy=True))
        if t != 0 and not force:
            self._last = (t, np.array(x, copy=True), float(stepsize))
            if t not in self.log_iters:
                return True
        fx = self.f.eval(x, measurement=True)
        self.record.trajectory.append(
            TrajectoryPoint(
                iter=t,
                oracle_calls=self.f.oracle_count,
                measurement_calls=self.f.measurement_count,
                f_value=fx,
                stepsize=float(stepsize),
                grad_surrogate=surrogate,
            )
        )
        return np.isfinite(fx)

    def check_iterate(self, t, x):
        """True if the run can continue from iterate ``x``."""
        if not np.all(np.isfinite(x)):
            self.record.diverged = True
            self.record.warnings.append(f"non-finite iterate at iteration {t}")
            return False
        if self.opts.keep_iterates:
            self.record.iterates.append(np.array(x, copy=True))
        if not self._warned_radius and float(np.linalg.norm(x)) > self.opts.guard_radius:
            self._warned_radius = True
            self.record.warnings.append(
                f"iterate norm exceeded guard radius {self.opts.guard_radius:g} at iteration {t};"
                " level-boundedness may fail here"
            )
        return True

    def abort(self, t, err: EvaluationError):
        self.record.diverged = True
        self.record.warnings.append(f"objective evaluation failed at iteration {t}: {err}")

    def finish(self, x, iterations):
        # a budget stop can land between checkpoints; always log the state
        # the run actually ended in
        if self._last is not None and self.record.trajectory:
            if self.record.trajectory[-1].iter < self._last[0]:
                self.log(self._last[0], self._last[1], self._last[2], force=True)
        self.record.final_point = np.array(x, copy=True)
        self.record.iterations_run = iterations
        self.record.wall_time = time.perf_counter() - self._t0
        self.record.output_point = select_output(self.record)
        return self.record


def select_output(record: RunRecord) -> np.ndarray:
    """Iterate with the smallest measured stationarity surrogate.

    Ties break toward the earliest iteration; with no measurements the
    final iterate is returned and a warning flag recorded.
    """
    if record.measured:
        best = min(record.measured, key=lambda m: (m[2], m[0]))
        return np.array(best[1], copy=True)
    if record.final_point is None:
        raise ValueError("run record has neither measurements nor a final point")
    if "no stationarity measurements; returning final iterate" not in record.warnings:
        record.warnings.append("no stationarity measurements; returning final iterate")
    return np.array(record.final_point, copy=True)


def _budget_left(f, opts, cost):
    return opts.oracle_budget is None or f.oracle_count + cost <= opts.oracle_budget


# ---------------------------------------------------------------------------
# Optimizers
# ---------------------------------------------------------------------------

def rs_gf(
    f,
    model: GrowthModel,
    cfg: SmoothingConfig,
    params: TheoryParams,
    x0,
    rng: RngStream,
    opts: Optional[RunnerOptions] = None,
) -> RunRecord:
    """Single-sample descent with the locally adapted stepsize schedule."""
    opts = opts or RunnerOptions()
    x = np.array(x0, dtype=float)
    rec = _Recorder("RS-GF", f, cfg, opts, rng, params.T)
    rec.log(0, x, 0.0)
    t = 0
    for t in range(1, params.T + 1):
        if not _budget_left(f, opts, 2):
            t -= 1
            break
        surrogate = rec.maybe_measure(t, x)
        eta = stepsize_rs_gf(model, cfg, params, x)
        try:
            est = grad_estimate(f, x, cfg, 1, rng)
        except EvaluationError as err:
            rec.abort(t, err)
            break
        x = x - eta * est.vector
        if f.projection is not None:
            x = f.projection(x)
        if not rec.check_iterate(t, x):
            break
        rec.log(t, x, eta, surrogate)
    return rec.finish(x, t)


def gf_baseline(
    f,
    cfg: SmoothingConfig,
    stepsize: float,
    T: int,
    x0,
    rng: RngStream,
    opts: Optional[RunnerOptions] = None,
) -> RunRecord:
    """Constant-stepsize single-sample descent (no growth bound needed)."""
    if not (np.isfinite(stepsize) and stepsize > 0):
        raise ValueError(f"stepsize must be positive, got {stepsize}")
    opts = opts or RunnerOptions()
    x = np.array(x0, dtype=float)
    rec = _Recorder("GF", f, cfg, opts, rng, T)
    rec.log(0, x, 0.0)
    t = 0
    for t in range(1, T + 1):
        if not _budget_left(f, opts, 2):
            t -= 1
            break
        surrogate = rec.maybe_measure(t, x)
        try:
            est = grad_estimate(f, x, cfg, 1, rng)
        except EvaluationError as err:
            rec.abort(t, err)
            break
        x = x - stepsize * est.vector
        if f.projection is not None:
            x = f.projection(x)
        if not rec.check_iterate(t, x):
            break
        rec.log(t, x, stepsize, surrogate)
    return rec.finish(x, t)


def rs_ngf(
    f,
    model: GrowthModel,
    cfg: SmoothingConfig,
    params: TheoryParams,
    x0,
    rng: RngStream,
    opts: Optional[RunnerOptions] = None,
    stepsize: Optional[float] = None,
    batch: Optional[int] = None,
) -> RunRecord:
    """Normalized batched descent; every taken step has length ``eta_t``.

    ``stepsize``/``batch`` override the theory schedules with constants
    (used for tuned benchmark runs).
    """
    opts = opts or RunnerOptions()
    x = np.array(x0, dtype=float)
    rec = _Recorder("RS-NGF", f, cfg, opts, rng, params.T)
    rec.log(0, x, 0.0)
    t = 0
    for t in range(1, params.T + 1):
        B = batch if batch is not None else batch_rs_ngf(model, cfg, params, x, opts.batch_cap)
        if batch is None and B == opts.batch_cap:
            if "batch size capped" not in " ".join(rec.record.warnings):
                rec.record.warnings.append(f"batch size capped at {opts.batch_cap} from iteration {t}")
        if not _budget_left(f, opts, 2 * B):
            t -= 1
            break
        surrogate = rec.maybe_measure(t, x)
        eta = stepsize if stepsize is not None else stepsize_rs_ngf(model, cfg, params, x)
        try:
            est = grad_estimate(f, x, cfg, B, rng)
        except EvaluationError as err:
            rec.abort(t, err)
            break
        rec.record.batch_log.append(B)
        norm = float(np.linalg.norm(est.vector))
        if norm > 0.0:
            x = x - eta * est.vector / norm
            if f.projection is not None:
                x = f.projection(x)
        if not rec.check_iterate(t, x):
            break
        rec.log(t, x, eta, surrogate)
    return rec.finish(x, t)


def _spider_loop(
    algorithm,
    f,
    model,
    cfg,
    params,
    x0,
    rng,
    opts,
    *,
    normalized,
    stepsize=None,
    b=None,
    q=None,
    big_batch=None,
    T=None,
):
    """Shared variance-reduced recursion.

    Refresh iterations (t = 1 mod q) rebuild the tracker from a big batch;
    other iterations correct it with paired estimates that reuse one sample
    set at the current and previous iterate (2 big-batch calls per sample at
    refresh, 4 small-batch calls otherwise).
    """
    opts = opts or RunnerOptions()
    T = T if T is not None else params.T
    x = np.array(x0, dtype=float)
    x_prev = x.copy()
    m = np.zeros_like(x)
    if q is None or b is None:
        _, b_th, q_th = schedule_rs_nvrgf(model, cfg, params, x, opts.batch_cap)
        b = b if b is not None else b_th
        q = q if q is not None else q_th
    rec = _Recorder(algorithm, f, cfg, opts, rng, T)
    rec.log(0, x, 0.0)
    t = 0
    for t in range(1, T + 1):
        refresh = (t - 1) % q == 0
        if refresh:
            if big_batch is not None:
                B = big_batch
            else:
                B, _, _ = schedule_rs_nvrgf(model, cfg, params, x, opts.batch_cap)
                if B == opts.batch_cap and "big batch capped" not in " ".join(rec.record.warnings):
                    rec.record.warnings.append(f"big batch capped at {opts.batch_cap} from iteration {t}")
            cost = 2 * B
        else:
            cost = 4 * b
        if not _budget_left(f, opts, cost):
            t -= 1
            break
        surrogate = rec.maybe_measure(t, x)
        if stepsize is not None:
            eta = stepsize
        elif normalized:
            eta = stepsize_rs_nvrgf(model, cfg, params, x)
        else:
            raise ValueError("un-normalized recursion requires an explicit stepsize")
        try:
            if refresh:
                est = grad_estimate(f, x, cfg, B, rng)
                m = est.vector
                rec.record.refresh_count += 1
                rec.record.batch_log.append(B)
            else:
                W = sample_sphere(cfg.dim, rng, b)
                g_now = single_sample_estimates(f, x, cfg, W).mean(axis=0)
                g_prev = single_sample_estimates(f, x_prev, cfg, W).mean(axis=0)
                m = m + g_now - g_prev
                rec.record.batch_log.append(b)
        except EvaluationError as err:
            rec.abort(t, err)
            break
        if opts.keep_iterates:
            rec.record.trackers.append(np.array(m, copy=True))
        x_prev = x
        if opts.move_on_refresh or not refresh:
            if normalized:
                norm = float(np.linalg.norm(m))
                if norm > 0.0:
                    x = x - eta * m / norm
            else:
                x = x - eta * m
            if f.projection is not None:
                x = f.projection(x)
        if not rec.check_iterate(t, x):
            break
        rec.log(t, x, eta, surrogate)
    return rec.finish(x, t)


def rs_nvrgf(
    f,
    model: GrowthModel,
    cfg: SmoothingConfig,
    params: TheoryParams,
    x0,
    rng: RngStream,
    opts: Optional[RunnerOptions] = None,
    stepsize: Optional[float] = None,
    b: Optional[int] = None,
    q: Optional[int] = None,
    big_batch: Optional[int] = None,
) -> RunRecord:
    """Variance-reduced normalized descent with periodic big-batch refresh."""
    return _spider_loop(
        "RS-NVRGF",
        f,
        model,
        cfg,
        params,
        x0,
        rng,
        opts,
        normalized=True,
        stepsize=stepsize,
        b=b,
        q=q,
        big_batch=big_batch,
    )


def vrgf_baseline(
    f,
    cfg: SmoothingConfig,
    stepsize: float,
    T: int,
    b: int,
    B: int,
    q: int,
    x0,
    rng: RngStream,
    opts: Optional[RunnerOptions] = None,
) -> RunRecord:
    """Constant-stepsize, un-normalized variance-reduced descent."""
    if not (np.isfinite(stepsize) and stepsize > 0):
        raise ValueError(f"stepsize must be positive, got {stepsize}")
    return _spider_loop(
        "VRGF",
        f,
        None,
        cfg,
        None,
        x0,
        rng,
        opts,
        normalized=False,
        stepsize=stepsize,
        b=b,
        q=q,
        big_batch=B,
        T=T,
    )
