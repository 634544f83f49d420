"""A tour of the core pieces: growth bounds, the estimator, one optimizer run.

Run with: python3 demos/quickstart.py
"""

import numpy as np

from rszero import (
    RngStream,
    RunnerOptions,
    SmoothingConfig,
    TheoryParams,
    grad_estimate,
    problems,
    rs_gf,
)
from rszero.growth import noise_scale, smoothness_modulus, validate_model

# The benchmark objective exp(|x|) - x^3 is neither smooth nor globally
# Lipschitz, but its subgradient norms are bounded by gamma(|x|) with
# gamma(t) = exp(t) + 3 t^2, which is all the optimizers need.
f = problems.worked_example_1d()
cfg = SmoothingConfig(delta=0.01, dim=1)

x = np.array([0.5])
print("objective at x:", f.eval(x))
print("declared subgradient bound:", f.model.alpha(x))
print("local smoothness of the smoothed objective:", smoothness_modulus(f.model, cfg, x, 0.1))
print("estimator noise scale:", noise_scale(f.model, cfg, x))

# A cheap falsification pass over random pairs; a declared bound that is
# wrong for the objective is caught here, not deep inside a run.
report = validate_model(f.model, f, n_pairs=5000, seed=0)
print("bound validation passed:", report.passed)

# One batched gradient estimate: 2 oracle calls per sample.
est = grad_estimate(f, x, cfg, B=64, rng=RngStream(0))
print("gradient estimate:", est.vector, "using", est.oracle_calls, "oracle calls")

# Run the single-sample method with its adaptive stepsize schedule.
params = TheoryParams(Delta=2.0, T=2000, p=0.1)
opts = RunnerOptions(measure_points=10, b_eval=2000)
record = rs_gf(f.copy(), f.model, cfg, params, x0=np.array([0.5]), rng=RngStream(1), opts=opts)
print("final objective:", record.trajectory[-1].f_value)
print("selected output point:", record.output_point)
print("best measured stationarity:", min(s for _, _, s in record.measured))
