"""Calculus of (alpha, beta) subgradient-growth bounds.

A growth bound is a pair of callables: ``alpha(x)`` bounds the norm of every
subgradient of the objective at ``x``, while ``beta(x, r)`` bounds how much
``alpha`` may vary between ``x`` and any point within distance ``r``.
``beta`` must be non-decreasing in ``r``.

The constructors below cover the common function classes (globally Lipschitz,
gradient-Lipschitz, radially bounded subgradients) and the combinators
propagate bounds exactly through sums and compositions.  Given a bound and a
smoothing radius, the constants driving every optimizer in this package
follow in closed form: the local smoothness modulus of the smoothed
objective, the second-moment scale of the single-sample gradient estimate,
and the hard norm bound on any single-sample estimate.

All bound functions are pure; concurrent read-only evaluation is safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .exceptions import EvaluationError

__all__ = [
    "GrowthModel",
    "SmoothingConfig",
    "ValidationReport",
    "lipschitz",
    "smooth_gradient",
    "radial",
    "add",
    "scale",
    "compose",
    "smoothed",
    "smoothness_modulus",
    "noise_scale",
    "estimate_norm_bound",
    "validate_model",
]

# sqrt(16 * sqrt(2 * pi)); multiplied by sqrt(d) * (alpha + beta(x, 2 delta))
# it bounds the root second moment of a single-sample gradient estimate.
_NOISE_CONST = math.sqrt(16.0 * math.sqrt(2.0 * math.pi))

_DENOM_FLOOR = 1e-12


@dataclass(frozen=True)
class GrowthModel:
    """A pointwise subgradient-norm bound and its variation bound.

    ``alpha(x) -> float`` and ``beta(x, r) -> float`` with ``x`` an ndarray
    point and ``r >= 0`` a radius.  Both must return nonnegative finite
    values; ``beta`` must be non-decreasing in ``r``.
    """

    alpha: Callable[[np.ndarray], float]
    beta: Callable[[np.ndarray, float], float]


@dataclass(frozen=True)
class SmoothingConfig:
    """Parameters of the uniform-ball smoothing of the objective.

    ``delta`` is the smoothing radius, ``dim`` the ambient dimension and
    ``c`` the universal constant entering the smoothness modulus (kept
    configurable; 1.0 by default).
    """

    delta: float
    dim: int
    c: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.delta) and self.delta > 0):
            raise ValueError(f"delta must be positive and finite, got {self.delta}")
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"dim must be a positive integer, got {self.dim}")
        if not (np.isfinite(self.c) and self.c > 0):
            raise ValueError(f"c must be positive and finite, got {self.c}")


def lipschitz(L: float) -> GrowthModel:
    """Bound for an L-Lipschitz function: constant alpha, zero beta."""
    if not (np.isfinite(L) and L >= 0):
        raise ValueError(f"Lipschitz constant must be finite and >= 0, got {L}")
    L = float(L)
    return GrowthModel(alpha=lambda x: L, beta=lambda x, r: 0.0)


def smooth_gradient(grad_norm: Callable[[np.ndarray], float], L: float) -> GrowthModel:
    """Bound for a differentiable function with L-Lipschitz gradient.

    ``alpha(x)`` is the gradient norm at ``x`` and ``beta(x, r) = L * r``.
    """
    if not (np.isfinite(L) and L >= 0):
        raise ValueError(f"gradient Lipschitz constant must be finite and >= 0, got {L}")
    L = float(L)

    def alpha(x):
        g = float(grad_norm(x))
        if not np.isfinite(g) or g < 0:
            raise EvaluationError(f"grad_norm returned {g}", point=np.asarray(x))
        return g

    return GrowthModel(alpha=alpha, beta=lambda x, r: L * float(r))


def radial(gamma: Callable[[float], float]) -> GrowthModel:
    """Bound from a non-decreasing radial subgradient envelope.

    If every subgradient norm at ``x`` is at most ``gamma(||x||)`` with
    ``gamma`` non-decreasing, then ``alpha(x) = gamma(||x||)`` and the
    variation within radius ``r`` is at most ``gamma(||x||) + gamma(||x|| + r)``.
    Monotonicity of ``gamma`` is the caller's contract (spot-checked by
    :func:`validate_model`).
    """

    def alpha(x):
        return float(gamma(float(np.linalg.norm(x))))

    def beta(x, r):
        t = float(np.linalg.norm(x))
        return float(gamma(t)) + float(gamma(t + float(r)))

    return GrowthModel(alpha=alpha, beta=beta)


def add(g: GrowthModel, h: GrowthModel) -> GrowthModel:
    """Bound for a sum of two functions: both components add pointwise."""
    return GrowthModel(
        alpha=lambda x: g.alpha(x) + h.alpha(x),
        beta=lambda x, r: g.beta(x, r) + h.beta(x, r),
    )


def scale(model: GrowthModel, w: float) -> GrowthModel:
    """Bound for ``w * f`` with ``w > 0``."""
    if not (np.isfinite(w) and w > 0):
        raise ValueError(f"scale factor must be positive and finite, got {w}")
    w = float(w)
    return GrowthModel(
        alpha=lambda x: w * model.alpha(x),
        beta=lambda x, r: w * model.beta(x, r),
    )


def compose(
    outer: GrowthModel,
    inner: GrowthModel,
    inner_eval: Callable[[np.ndarray], np.ndarray],
    outer_dim: Optional[int] = None,
) -> GrowthModel:
    """Bound for ``g(h(x))`` from bounds on ``g`` and ``h``.

    ``inner_eval`` is the inner map ``h``; the outer bound is queried at
    ``h(x)``.  Each ``beta`` query evaluates ``h`` once (never the objective).
    """

    def _hx(x):
        hx = np.atleast_1d(np.asarray(inner_eval(x), dtype=float))
        if outer_dim is not None and hx.shape != (outer_dim,):
            raise ValueError(
                f"inner map returned shape {hx.shape}, outer bound expects ({outer_dim},)"
            )
        return hx

    def alpha(x):
        return inner.alpha(x) * outer.alpha(_hx(x))

    def beta(x, r):
        hx = _hx(x)
        a_h = inner.alpha(x)
        b_h = inner.beta(x, r)
        return (a_h + b_h) * outer.beta(hx, (a_h + b_h) * float(r)) + b_h * outer.alpha(hx)

    return GrowthModel(alpha=alpha, beta=beta)


def smoothed(model: GrowthModel, cfg: SmoothingConfig) -> GrowthModel:
    """Bound satisfied by the ball-smoothed objective.

    ``alpha`` picks up the variation over one smoothing radius and ``beta``
    is shifted by it.
    """
    delta = cfg.delta
    return GrowthModel(
        alpha=lambda x: model.alpha(x) + model.beta(x, delta),
        beta=lambda x, r: model.beta(x, float(r) + delta),
    )


def smoothness_modulus(model: GrowthModel, cfg: SmoothingConfig, x: np.ndarray, r: float) -> float:
    """Local gradient-Lipschitz modulus of the smoothed objective.

    Bounds the gradient variation of the smoothed function between ``x`` and
    any point within distance ``r``:
    ``c * sqrt(d) * (2 alpha(x) + beta(x, delta) + beta(x, r + delta)) / (2 delta)``.
    """
    if r < 0:
        raise ValueError(f"radius must be >= 0, got {r}")
    d = cfg.dim
    delta = cfg.delta
    return (
        cfg.c
        * math.sqrt(d)
        * (2.0 * model.alpha(x) + model.beta(x, delta) + model.beta(x, float(r) + delta))
        / (2.0 * delta)
    )


def noise_scale(model: GrowthModel, cfg: SmoothingConfig, x: np.ndarray) -> float:
    """Root second-moment bound of a single-sample gradient estimate at ``x``."""
    return _NOISE_CONST * math.sqrt(cfg.dim) * (model.alpha(x) + model.beta(x, 2.0 * cfg.delta))


def estimate_norm_bound(model: GrowthModel, cfg: SmoothingConfig, x: np.ndarray) -> float:
    """Hard norm bound on any single-sample gradient estimate at ``x``."""
    return cfg.dim * (model.alpha(x) + model.beta(x, 3.0 * cfg.delta))


@dataclass
class ValidationReport:
    """Outcome of an empirical falsification run of a declared bound."""

    passed: bool
    n_checked: int
    failure_kind: Optional[str] = None  # "beta_monotonicity" or "value_gap"
    failure_detail: Optional[dict] = None

    def __bool__(self):
        return self.passed


def validate_model(
    model: GrowthModel,
    problem,
    n_pairs: int = 100_000,
    seed: int = 0,
    clip_radius: float = 10.0,
    max_step: float = 2.0,
) -> ValidationReport:
    """Empirically falsification-test a declared growth bound for a problem.

    Two checks on random samples: (a) ``beta(x, r)`` is non-decreasing in
    ``r``; (b) the implied local Lipschitz bound
    ``|f(x) - f(y)| <= (alpha(x) + beta(x, ||y - x||)) * ||y - x||``.
    Base points are standard normal, clipped to ``||x|| <= clip_radius``;
    displacements have radius uniform in ``(0, max_step]``.  A counterexample
    is a result, not an error: the report carries the first one found.
    """
    rng = np.random.default_rng(seed)
    d = problem.dim
    xs = rng.standard_normal((n_pairs, d))
    norms = np.linalg.norm(xs, axis=1)
    over = norms > clip_radius
    if np.any(over):
        xs[over] *= (clip_radius / norms[over])[:, None]

    # (a) monotonicity of beta in the radius
    r_pairs = np.sort(rng.uniform(0.0, max_step, size=(n_pairs, 2)), axis=1)
    for i in range(n_pairs):
        b1 = model.beta(xs[i], r_pairs[i, 0])
        b2 = model.beta(xs[i], r_pairs[i, 1])
        if b1 < 0 or b2 < 0 or b1 > b2 + 1e-12 * max(1.0, abs(b2)):
            return ValidationReport(
                passed=False,
                n_checked=i + 1,
                failure_kind="beta_monotonicity",
                failure_detail={
                    "x": xs[i].copy(),
                    "r1": float(r_pairs[i, 0]),
                    "r2": float(r_pairs[i, 1]),
                    "beta_r1": float(b1),
                    "beta_r2": float(b2),
                },
            )

    # (b) local Lipschitz bound implied by (alpha, beta)
    dirs = rng.standard_normal((n_pairs, d))
    dn = np.linalg.norm(dirs, axis=1)
    dn[dn == 0] = 1.0
    radii = rng.uniform(0.0, max_step, size=n_pairs)
    radii[radii == 0.0] = max_step
    ys = xs + dirs * (radii / dn)[:, None]
    fx = problem.eval_many(xs, measurement=True)
    fy = problem.eval_many(ys, measurement=True)
    gaps = np.abs(fx - fy)
    for i in range(n_pairs):
        dist = float(np.linalg.norm(ys[i] - xs[i]))
        bound = (model.alpha(xs[i]) + model.beta(xs[i], dist)) * dist
        if gaps[i] > bound + 1e-9 * max(1.0, bound):
            return ValidationReport(
                passed=False,
                n_checked=i + 1,
                failure_kind="value_gap",
                failure_detail={
                    "x": xs[i].copy(),
                    "y": ys[i].copy(),
                    "gap": float(gaps[i]),
                    "bound": float(bound),
                },
            )

    return ValidationReport(passed=True, n_checked=n_pairs)
