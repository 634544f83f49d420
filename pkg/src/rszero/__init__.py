"""Gradient-free optimization of nonsmooth objectives via randomized smoothing.

The package is organized around a declared growth bound (``growth``), the
sphere-sampling gradient estimator (``smoothing``), three optimizers with
theory-driven schedules plus constant-step baselines (``algorithms``),
benchmark objectives with exact bounds (``problems``) and a reproducible
experiment runner (``harness``).
"""

__version__ = "0.1.0"

from .exceptions import ConfigError, DivergenceError, EvaluationError
from .growth import (
    GrowthModel,
    SmoothingConfig,
    ValidationReport,
    add,
    compose,
    estimate_norm_bound,
    lipschitz,
    noise_scale,
    radial,
    scale,
    smooth_gradient,
    smoothed,
    smoothness_modulus,
    validate_model,
)
from .smoothing import (
    GradientEstimate,
    GradReference,
    RngStream,
    grad_estimate,
    sample_ball,
    sample_sphere,
    single_sample_estimates,
    smoothed_grad_reference,
    smoothed_value_estimate,
)
from .algorithms import (
    RunnerOptions,
    RunRecord,
    TheoryParams,
    batch_rs_ngf,
    gf_baseline,
    rs_gf,
    rs_ngf,
    rs_nvrgf,
    schedule_rs_nvrgf,
    select_output,
    stepsize_rs_gf,
    stepsize_rs_ngf,
    stepsize_rs_nvrgf,
    vrgf_baseline,
)
from .problems import (
    LocalizationInstance,
    Problem,
    abs1d_problem,
    analytic_suite,
    box_projection,
    constant_problem,
    generate_instance,
    initial_point,
    linear_problem,
    load_instance,
    localization_problem,
    quadratic_problem,
    save_instance,
    worked_example_1d,
)
from .harness import (
    AggregateResult,
    ExperimentConfig,
    aggregate,
    batch_grid,
    check,
    load_config,
    measure_stationarity,
    run,
    stepsize_grid,
    tune,
)
