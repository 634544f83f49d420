"""Uniform sphere/ball sampling and the central-difference gradient estimator.

The gradient of the ball-smoothed objective is estimated from paired
function values at antipodal sphere perturbations:

    g = mean_i  d * (f(x + delta w_i) - f(x - delta w_i)) / (2 delta) * w_i

with ``w_i`` i.i.d. uniform on the unit sphere.  The estimate is unbiased
for the smoothed gradient and costs two oracle calls per sample.  A forward
difference variant is available behind ``method="forward"``; it halves the
per-sample cost but has no theory-stepsize support here.

Monte-Carlo reference estimators of the smoothed value and gradient are
provided for measurement; their oracle calls are charged to the problem's
measurement counter when requested.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .exceptions import EvaluationError
from .growth import SmoothingConfig

__all__ = [
    "RngStream",
    "GradientEstimate",
    "GradReference",
    "sample_sphere",
    "sample_ball",
    "single_sample_estimates",
    "grad_estimate",
    "smoothed_value_estimate",
    "smoothed_grad_reference",
]


@dataclass
class RngStream:
    """A seeded, stateful random stream.

    Identical (seed, stream_id, draw order) reproduces identical samples
    within one build of this package.  Use :meth:`spawn` for independent
    substreams (parallel seeds, measurement draws).
    """

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        self._gen = np.random.default_rng([int(self.seed) & 0xFFFFFFFFFFFFFFFF, int(self.stream_id)])

    @property
    def generator(self) -> np.random.Generator:
        return self._gen

    def spawn(self, stream_id: int) -> "RngStream":
        return RngStream(self.seed, stream_id)


@dataclass
class GradientEstimate:
    """A gradient estimate plus the sampling metadata that produced it."""

    vector: np.ndarray
    batch_size: int
    oracle_calls: int


@dataclass
class GradReference:
    """Large-batch reference gradient with a per-coordinate error estimate."""

    vector: np.ndarray
    stderr: float
    coord_stderr: np.ndarray = field(repr=False, default=None)


def sample_sphere(d: int, rng: RngStream, n: Optional[int] = None) -> np.ndarray:
    """Uniform samples on the unit sphere in ``d`` dimensions.

    Returns shape ``(d,)`` for ``n=None``, else ``(n, d)``.  Gaussian
    direction, normalized; the measure-zero zero vector is re-drawn.
    """
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    squeeze = n is None
    m = 1 if squeeze else int(n)
    w = rng.generator.standard_normal((m, d))
    norms = np.linalg.norm(w, axis=1)
    while np.any(norms == 0.0):
        bad = norms == 0.0
        w[bad] = rng.generator.standard_normal((int(bad.sum()), d))
        norms = np.linalg.norm(w, axis=1)
    w /= norms[:, None]
    return w[0] if squeeze else w


def sample_ball(d: int, rng: RngStream, n: Optional[int] = None) -> np.ndarray:
    """Uniform samples in the closed unit ball: sphere direction times U^(1/d)."""
    squeeze = n is None
    m = 1 if squeeze else int(n)
    w = sample_sphere(d, rng, m)
    u = 1.0 - rng.generator.random(m)  # in (0, 1]
    w *= (u ** (1.0 / d))[:, None]
    return w[0] if squeeze else w


def _check_finite(values: np.ndarray, points: np.ndarray):
    bad = ~np.isfinite(values)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise EvaluationError(
            f"objective returned {values[i]} during estimation", point=points[i].copy()
        )


def single_sample_estimates(
    problem,
    x: np.ndarray,
    cfg: SmoothingConfig,
    directions: np.ndarray,
    method: str = "central",
    measurement: bool = False,
) -> np.ndarray:
    """Per-sample gradient estimates for given sphere directions.

    ``directions`` has shape (B, d); the result has the same shape.  Central
    differences consume 2B oracle calls; forward differences B + 1 (one base
    value).  Rows are independent of evaluation order, so batches may be
    fanned out if the objective is safe for concurrent calls.
    """
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("query point must be finite")
    W = np.atleast_2d(np.asarray(directions, dtype=float))
    d = cfg.dim
    if W.shape[1] != d or x.shape != (d,):
        raise ValueError(f"dimension mismatch: x {x.shape}, directions {W.shape}, dim {d}")
    delta = cfg.delta
    plus = x[None, :] + delta * W
    f_plus = problem.eval_many(plus, measurement=measurement)
    _check_finite(f_plus, plus)
    if method == "central":
        minus = x[None, :] - delta * W
        f_minus = problem.eval_many(minus, measurement=measurement)
        _check_finite(f_minus, minus)
        coeff = d * (f_plus - f_minus) / (2.0 * delta)
    elif method == "forward":
        f0 = problem.eval(x, measurement=measurement)
        if not np.isfinite(f0):
            raise EvaluationError(f"objective returned {f0}", point=x.copy())
        coeff = d * (f_plus - f0) / delta
    else:
        raise ValueError(f"unknown difference method {method!r}")
    return coeff[:, None] * W


def grad_estimate(
    problem,
    x: np.ndarray,
    cfg: SmoothingConfig,
    B: int,
    rng: RngStream,
    method: str = "central",
    measurement: bool = False,
) -> GradientEstimate:
    """Batch gradient estimate: the mean of B single-sample estimates."""
    if B < 1:
        raise ValueError(f"batch size must be >= 1, got {B}")
    W = sample_sphere(cfg.dim, rng, B)
    G = single_sample_estimates(problem, x, cfg, W, method=method, measurement=measurement)
    calls = 2 * B if method == "central" else B + 1
    return GradientEstimate(vector=G.mean(axis=0), batch_size=int(B), oracle_calls=calls)


def smoothed_value_estimate(
    problem,
    x: np.ndarray,
    cfg: SmoothingConfig,
    N: int,
    rng: RngStream,
    measurement: bool = False,
) -> tuple[float, float]:
    """Monte-Carlo estimate of the ball-smoothed value at ``x``.

    Returns (mean, standard error) over N uniform-ball perturbations.
    """
    if N < 2:
        raise ValueError(f"need N >= 2 samples, got {N}")
    x = np.asarray(x, dtype=float)
    W = sample_ball(cfg.dim, rng, N)
    pts = x[None, :] + cfg.delta * W
    vals = problem.eval_many(pts, measurement=measurement)
    _check_finite(vals, pts)
    mean = float(vals.mean())
    stderr = float(vals.std(ddof=1) / np.sqrt(N))
    return mean, stderr


def smoothed_grad_reference(
    problem,
    x: np.ndarray,
    cfg: SmoothingConfig,
    N: int,
    rng: RngStream,
    measurement: bool = False,
) -> GradReference:
    """Large-batch gradient of the smoothed objective, for measurement.

    The returned ``stderr`` is the Euclidean norm of the per-coordinate
    standard errors of the N-sample mean.
    """
    if N < 2:
        raise ValueError(f"need N >= 2 samples, got {N}")
    W = sample_sphere(cfg.dim, rng, N)
    G = single_sample_estimates(problem, x, cfg, W, measurement=measurement)
    vec = G.mean(axis=0)
    coord_stderr = G.std(axis=0, ddof=1) / np.sqrt(N)
    return GradReference(vector=vec, stderr=float(np.linalg.norm(coord_stderr)), coord_stderr=coord_stderr)
