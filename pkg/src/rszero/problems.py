"""Benchmark objectives with declared growth bounds.

The main family is a planar localization objective: recover n points from
noisy-free distance targets between point pairs and to fixed anchor points,
with a per-residual transform ``r`` that controls how badly non-Lipschitz
the objective is (``u**5``, ``exp(u**3)`` or plain ``|u|``).  Each problem
carries an oracle-call counter (separate tallies for algorithm calls and
measurement calls), a declared growth bound, and optionally a feasible-box
projection.

A small analytic suite (constant, linear, quadratic, 1-d absolute value)
with closed-form smoothed values/gradients backs the estimator tests.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import growth
from .growth import GrowthModel

__all__ = [
    "Problem",
    "LocalizationInstance",
    "R_KINDS",
    "localization_problem",
    "generate_instance",
    "initial_point",
    "save_instance",
    "load_instance",
    "worked_example_1d",
    "constant_problem",
    "linear_problem",
    "quadratic_problem",
    "abs1d_problem",
    "analytic_suite",
    "box_projection",
]


class Problem:
    """A black-box objective with oracle accounting.

    ``eval`` / ``eval_many`` increment the oracle counter, or the separate
    measurement counter when called with ``measurement=True`` so that
    algorithm-only budgets stay clean.  Evaluation is deterministic for a
    fixed point; counter updates are the only mutation, so concurrent use
    requires external aggregation of counts.
    """

    def __init__(
        self,
        dim: int,
        fn: Callable[[np.ndarray], float],
        batch_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None,
        model: Optional[GrowthModel] = None,
        projection: Optional[Callable[[np.ndarray], np.ndarray]] = None,
        name: str = "",
        fdelta: Optional[Callable[[np.ndarray, float], float]] = None,
        grad_fdelta: Optional[Callable[[np.ndarray, float], np.ndarray]] = None,
    ):
        self.dim = int(dim)
        self._fn = fn
        self._batch_fn = batch_fn
        self.model = model
        self.projection = projection
        self.name = name
        self.fdelta = fdelta  # closed-form smoothed value, if known
        self.grad_fdelta = grad_fdelta  # closed-form smoothed gradient, if known
        self.oracle_count = 0
        self.measurement_count = 0

    def eval(self, x: np.ndarray, measurement: bool = False) -> float:
        x = np.asarray(x, dtype=float)
        if measurement:
            self.measurement_count += 1
        else:
            self.oracle_count += 1
        with np.errstate(over="ignore", invalid="ignore"):
            return float(self._fn(x))

    def eval_many(self, X: np.ndarray, measurement: bool = False) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        n = X.shape[0]
        if measurement:
            self.measurement_count += n
        else:
            self.oracle_count += n
        with np.errstate(over="ignore", invalid="ignore"):
            if self._batch_fn is not None:
                return np.asarray(self._batch_fn(X), dtype=float)
            return np.array([float(self._fn(X[i])) for i in range(n)])

    def reset_counters(self):
        self.oracle_count = 0
        self.measurement_count = 0

    def copy(self) -> "Problem":
        """Fresh instance sharing the objective but with zeroed counters."""
        return Problem(
            self.dim,
            self._fn,
            batch_fn=self._batch_fn,
            model=self.model,
            projection=self.projection,
            name=self.name,
            fdelta=self.fdelta,
            grad_fdelta=self.grad_fdelta,
        )


# ---------------------------------------------------------------------------
# Localization family
# ---------------------------------------------------------------------------

def _r_pow5(u):
    return u ** 5


def _r_exp_cube(u):
    return np.exp(u ** 3)


def _r_abs(u):
    return u


def _gamma_pow5(t):
    return 5.0 * t ** 4


def _gamma_exp_cube(t):
    return 3.0 * t ** 2 * np.exp(t ** 3)


R_KINDS = {
    "pow5": (_r_pow5, _gamma_pow5),
    "exp_cube": (_r_exp_cube, _gamma_exp_cube),
    "abs": (_r_abs, None),  # 1-Lipschitz outer transform, zero variation bound
}


@dataclass
class LocalizationInstance:
    """One draw of the localization benchmark: geometry, pairs and targets."""

    variables: np.ndarray  # (n, 2) ground-truth positions
    anchors: np.ndarray  # (m, 2) fixed reference positions
    pairs_xx: list  # [(i, j)] variable-variable, deduplicated, i < j
    targets_xx: np.ndarray
    pairs_ax: list  # [(i, j)] anchor-variable, deduplicated
    targets_ax: np.ndarray
    r_kind: str = "pow5"
    scale: float = 1.0

    def __post_init__(self):
        self.variables = np.asarray(self.variables, dtype=float)
        self.anchors = np.asarray(self.anchors, dtype=float).reshape(-1, 2)
        self.targets_xx = np.asarray(self.targets_xx, dtype=float)
        self.targets_ax = np.asarray(self.targets_ax, dtype=float)
        if self.r_kind not in R_KINDS:
            raise ValueError(f"unknown r_kind {self.r_kind!r}")
        n = len(self.variables)
        m = len(self.anchors)
        if len(set(self.pairs_xx)) != len(self.pairs_xx) or len(set(self.pairs_ax)) != len(self.pairs_ax):
            raise ValueError("pair lists must be deduplicated")
        for i, j in self.pairs_xx:
            if not (0 <= i < n and 0 <= j < n and i != j):
                raise ValueError(f"variable pair ({i},{j}) out of range")
        for i, j in self.pairs_ax:
            if not (0 <= i < m and 0 <= j < n):
                raise ValueError(f"anchor pair ({i},{j}) out of range")
        if np.any(self.targets_xx < 0) or np.any(self.targets_ax < 0):
            raise ValueError("distance targets must be nonnegative")

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def n_pairs(self) -> int:
        return len(self.pairs_xx) + len(self.pairs_ax)


def generate_instance(
    n: int = 10,
    m: int = 4,
    n_xx: int = 100,
    n_ax: int = 50,
    r_kind: str = "pow5",
    seed: int = 0,
    noise: float = 0.0,
) -> LocalizationInstance:
    """Random localization instance.

    Points are uniform in the square [-0.5, 0.5]^2; anchors sit at
    (+-0.45, +-0.45).  Pairs are sampled uniformly with replacement and then
    deduplicated; targets are the true distances (plus optional additive
    noise).  For ``exp_cube`` all coordinates are divided by 10 to keep the
    exponential transform on a sane scale.
    """
    if m > 4:
        raise ValueError("at most 4 anchor positions are defined")
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-0.5, 0.5, size=(n, 2))
    corners = np.array([[0.45, 0.45], [0.45, -0.45], [-0.45, 0.45], [-0.45, -0.45]])
    anchors = corners[:m]
    scale = 1.0
    if r_kind == "exp_cube":
        scale = 0.1
        pts = pts * scale
        anchors = anchors * scale

    pairs_xx = []
    seen = set()
    if n >= 2:
        for _ in range(n_xx):
            i, j = rng.integers(0, n, size=2)
            while i == j:
                i, j = rng.integers(0, n, size=2)
            p = (min(int(i), int(j)), max(int(i), int(j)))
            if p not in seen:
                seen.add(p)
                pairs_xx.append(p)
    pairs_ax = []
    seen = set()
    if m >= 1:
        for _ in range(n_ax):
            i = int(rng.integers(0, m))
            j = int(rng.integers(0, n))
            if (i, j) not in seen:
                seen.add((i, j))
                pairs_ax.append((i, j))
    if not pairs_xx and not pairs_ax:
        raise ValueError("instance has no measurement pairs")

    targets_xx = np.array(
        [np.linalg.norm(pts[i] - pts[j]) for i, j in pairs_xx], dtype=float
    )
    targets_ax = np.array(
        [np.linalg.norm(anchors[i] - pts[j]) for i, j in pairs_ax], dtype=float
    )
    if noise > 0:
        targets_xx = np.abs(targets_xx + noise * rng.standard_normal(len(targets_xx)))
        targets_ax = np.abs(targets_ax + noise * rng.standard_normal(len(targets_ax)))
    return LocalizationInstance(
        variables=pts,
        anchors=anchors,
        pairs_xx=pairs_xx,
        targets_xx=targets_xx,
        pairs_ax=pairs_ax,
        targets_ax=targets_ax,
        r_kind=r_kind,
        scale=scale,
    )


def initial_point(instance: LocalizationInstance, rng: np.random.Generator) -> np.ndarray:
    """Random start: every coordinate uniform in the (scaled) unit square."""
    return rng.uniform(-0.5 * instance.scale, 0.5 * instance.scale, size=2 * instance.n)


def _residuals(instance: LocalizationInstance, X: np.ndarray) -> np.ndarray:
    """Absolute distance residuals for a batch of flattened decision vectors.

    ``X`` has shape (N, 2n); the result has shape (N, K) over all pairs.
    """
    P = X.reshape(X.shape[0], instance.n, 2)
    cols = []
    if instance.pairs_xx:
        I = np.array([p[0] for p in instance.pairs_xx])
        J = np.array([p[1] for p in instance.pairs_xx])
        dist = np.linalg.norm(P[:, I, :] - P[:, J, :], axis=2)
        cols.append(np.abs(dist - instance.targets_xx[None, :]))
    if instance.pairs_ax:
        A = instance.anchors[np.array([p[0] for p in instance.pairs_ax])]
        J = np.array([p[1] for p in instance.pairs_ax])
        dist = np.linalg.norm(A[None, :, :] - P[:, J, :], axis=2)
        cols.append(np.abs(dist - instance.targets_ax[None, :]))
    return np.concatenate(cols, axis=1)


def _localization_model(instance: LocalizationInstance) -> GrowthModel:
    """Growth bound assembled by the chain rule over the residual terms.

    Each term is ``r(u(x))`` with the residual map ``u`` 1-Lipschitz with
    zero variation bound; composing the radial bound of ``r`` through it and
    averaging gives, per term, ``gamma(u)`` for alpha and
    ``gamma(u) + gamma(u + r)`` for beta (zero for the 1-Lipschitz ``abs``
    transform).  Evaluated vectorized over terms; tests cross-check against
    the generic compose/add combinators.
    """
    if instance.r_kind == "abs":
        return growth.lipschitz(1.0)
    _, gamma = R_KINDS[instance.r_kind]
    w = 1.0 / instance.n_pairs

    def alpha(x):
        u = _residuals(instance, np.asarray(x, dtype=float)[None, :])[0]
        with np.errstate(over="ignore"):
            return w * float(np.sum(gamma(u)))

    def beta(x, r):
        u = _residuals(instance, np.asarray(x, dtype=float)[None, :])[0]
        with np.errstate(over="ignore"):
            return w * float(np.sum(gamma(u) + gamma(u + float(r))))

    return GrowthModel(alpha=alpha, beta=beta)


def localization_problem(instance: LocalizationInstance) -> Problem:
    """Averaged transformed-residual objective for a localization instance."""
    if instance.n_pairs == 0:
        raise ValueError("instance has no measurement pairs")
    transform, _ = R_KINDS[instance.r_kind]
    w = 1.0 / instance.n_pairs

    def batch_fn(X):
        return w * np.sum(transform(_residuals(instance, X)), axis=1)

    def fn(x):
        return batch_fn(x[None, :])[0]

    return Problem(
        dim=2 * instance.n,
        fn=fn,
        batch_fn=batch_fn,
        model=_localization_model(instance),
        name=f"localization-{instance.r_kind}",
    )


# ---------------------------------------------------------------------------
# Instance serialization (plain-text JSON schema, shareable across runs)
# ---------------------------------------------------------------------------

def save_instance(instance: LocalizationInstance, path):
    doc = {
        "points": instance.variables.tolist(),
        "anchors": instance.anchors.tolist(),
        "pairs_xx": [list(p) for p in instance.pairs_xx],
        "targets_xx": instance.targets_xx.tolist(),
        "pairs_ax": [list(p) for p in instance.pairs_ax],
        "targets_ax": instance.targets_ax.tolist(),
        "r_kind": instance.r_kind,
        "scale": instance.scale,
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_instance(path) -> LocalizationInstance:
    with open(path) as fh:
        doc = json.load(fh)
    return LocalizationInstance(
        variables=np.array(doc["points"], dtype=float),
        anchors=np.array(doc["anchors"], dtype=float),
        pairs_xx=[tuple(p) for p in doc["pairs_xx"]],
        targets_xx=np.array(doc["targets_xx"], dtype=float),
        pairs_ax=[tuple(p) for p in doc["pairs_ax"]],
        targets_ax=np.array(doc["targets_ax"], dtype=float),
        r_kind=doc["r_kind"],
        scale=float(doc.get("scale", 1.0)),
    )


# ---------------------------------------------------------------------------
# Worked 1-d example and analytic sanity suite
# ---------------------------------------------------------------------------

def worked_example_1d() -> Problem:
    """exp(|x|) - x^3 in one dimension, with its radial growth bound."""

    def fn(x):
        t = float(x[0]) if np.ndim(x) else float(x)
        return np.exp(abs(t)) - t ** 3

    def batch_fn(X):
        t = X[:, 0]
        return np.exp(np.abs(t)) - t ** 3

    return Problem(
        dim=1,
        fn=fn,
        batch_fn=batch_fn,
        model=growth.radial(lambda t: np.exp(t) + 3.0 * t ** 2),
        name="worked-example-1d",
    )


def constant_problem(value: float = 7.0, dim: int = 2) -> Problem:
    v = float(value)
    return Problem(
        dim=dim,
        fn=lambda x: v,
        batch_fn=lambda X: np.full(X.shape[0], v),
        model=growth.lipschitz(0.0),
        name="constant",
        fdelta=lambda x, delta: v,
        grad_fdelta=lambda x, delta: np.zeros(dim),
    )


def linear_problem(a) -> Problem:
    a = np.asarray(a, dtype=float)
    return Problem(
        dim=a.size,
        fn=lambda x: float(a @ x),
        batch_fn=lambda X: X @ a,
        model=growth.lipschitz(float(np.linalg.norm(a))),
        name="linear",
        fdelta=lambda x, delta: float(a @ x),
        grad_fdelta=lambda x, delta: a.copy(),
    )


def quadratic_problem(dim: int = 10) -> Problem:
    # Ball smoothing of ||x||^2 / 2 adds the constant delta^2 d / (2 (d + 2)).
    def fdelta(x, delta):
        return 0.5 * float(x @ x) + delta ** 2 * dim / (2.0 * (dim + 2.0))

    return Problem(
        dim=dim,
        fn=lambda x: 0.5 * float(x @ x),
        batch_fn=lambda X: 0.5 * np.sum(X * X, axis=1),
        model=growth.smooth_gradient(lambda x: float(np.linalg.norm(x)), 1.0),
        name="quadratic",
        fdelta=fdelta,
        grad_fdelta=lambda x, delta: np.asarray(x, dtype=float).copy(),
    )


def abs1d_problem() -> Problem:
    def fdelta(x, delta):
        t = float(x[0]) if np.ndim(x) else float(x)
        if abs(t) >= delta:
            return abs(t)
        return (t * t + delta * delta) / (2.0 * delta)

    def grad_fdelta(x, delta):
        t = float(x[0]) if np.ndim(x) else float(x)
        return np.array([np.clip(t / delta, -1.0, 1.0)])

    return Problem(
        dim=1,
        fn=lambda x: abs(float(x[0]) if np.ndim(x) else float(x)),
        batch_fn=lambda X: np.abs(X[:, 0]),
        model=growth.lipschitz(1.0),
        name="abs-1d",
        fdelta=fdelta,
        grad_fdelta=grad_fdelta,
    )


def analytic_suite() -> list:
    """Sanity problems with exact growth bounds and known smoothed forms."""
    return [
        constant_problem(7.0, dim=2),
        linear_problem(np.array([1.0, -2.0, 0.5])),
        quadratic_problem(10),
        abs1d_problem(),
    ]


def box_projection(kappa: float) -> Callable[[np.ndarray], np.ndarray]:
    """Coordinatewise clamp onto the box [-kappa, kappa]."""
    if not (np.isfinite(kappa) and kappa > 0):
        raise ValueError(f"kappa must be positive and finite, got {kappa}")

    def project(x):
        return np.clip(np.asarray(x, dtype=float), -kappa, kappa)

    return project
