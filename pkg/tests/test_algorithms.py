"""Optimizer schedules, runners, accounting and output selection."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rszero import algorithms, growth, problems
from rszero.algorithms import (
    RunnerOptions,
    RunRecord,
    TheoryParams,
    batch_rs_ngf,
    coefficient_rs_gf,
    coefficient_rs_ngf,
    coefficient_rs_nvrgf,
    gf_baseline,
    rs_gf,
    rs_ngf,
    rs_nvrgf,
    schedule_rs_nvrgf,
    select_output,
    stepsize_rs_gf,
    vrgf_baseline,
)
from rszero.growth import SmoothingConfig
from rszero.smoothing import RngStream

# Frozen reference values for the lipschitz(1), d=2, delta=0.1, Delta=1,
# T=100, p=0.1, c=1 configuration, computed independently from the schedule
# formulas.
REF = {
    "gf_C": 0.02279157945980705,
    "gf_eta": 0.00029985359740006625,
    "ngf_C": 0.041666666666666664,
    "ngf_B": 568,
    "ngf_eta": 0.0005481805205164661,
    "nvrgf_C": 0.020833333333333332,
    "nvrgf_eta": 0.00027409026025823304,
    "nvrgf_term1": 0.26591479484724945,
    "big_B": 40838,
}

CFG = SmoothingConfig(delta=0.1, dim=2)
PARAMS = TheoryParams(Delta=1.0, T=100, p=0.1, epsilon=0.1)
LIP1 = growth.lipschitz(1.0)
X0 = np.zeros(2)


class TestTheoryParams:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"Delta": 0.0, "T": 10},
            {"Delta": -1.0, "T": 10},
            {"Delta": 1.0, "T": 0},
            {"Delta": 1.0, "T": 10, "p": 0.0},
            {"Delta": 1.0, "T": 10, "p": 1.0},
            {"Delta": 1.0, "T": 10, "epsilon": 0.0},
        ],
    )
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(ValueError):
            TheoryParams(**kwargs)


class TestStepsizeSchedules:
    def test_rs_gf_frozen_values(self):
        assert coefficient_rs_gf(LIP1, CFG, PARAMS, X0) == pytest.approx(REF["gf_C"], rel=1e-12)
        assert stepsize_rs_gf(LIP1, CFG, PARAMS, X0) == pytest.approx(REF["gf_eta"], rel=1e-12)

    def test_rs_ngf_frozen_values(self):
        assert coefficient_rs_ngf(LIP1, CFG, PARAMS, X0) == pytest.approx(REF["ngf_C"], rel=1e-12)
        assert batch_rs_ngf(LIP1, CFG, PARAMS, X0) == REF["ngf_B"]

    def test_rs_nvrgf_frozen_values(self):
        assert coefficient_rs_nvrgf(LIP1, CFG, PARAMS, X0) == pytest.approx(
            REF["nvrgf_C"], rel=1e-12
        )
        B, b, q = schedule_rs_nvrgf(LIP1, CFG, PARAMS, X0)
        assert (B, b, q) == (REF["big_B"], 1440, 10)

    def test_degenerate_model_finite(self):
        zero = growth.lipschitz(0.0)
        for coeff in (coefficient_rs_gf, coefficient_rs_ngf, coefficient_rs_nvrgf):
            v = coeff(zero, CFG, PARAMS, X0)
            assert np.isfinite(v) and v > 0
        assert coefficient_rs_gf(zero, CFG, PARAMS, X0) == pytest.approx(1.0 / 6.0)
        assert coefficient_rs_ngf(zero, CFG, PARAMS, X0) == pytest.approx(1.0 / 12.0)
        assert batch_rs_ngf(zero, CFG, PARAMS, X0) == 1

    def test_rs_gf_delta_scaling_first_term(self):
        # make the first term active with a large alpha, then double Delta
        big = growth.lipschitz(50.0)
        p1 = TheoryParams(Delta=1e-6, T=100, p=0.1)
        p2 = TheoryParams(Delta=2e-6, T=100, p=0.1)
        c1 = coefficient_rs_gf(big, CFG, p1, X0)
        c2 = coefficient_rs_gf(big, CFG, p2, X0)
        assert c2 == pytest.approx(2 * c1, rel=1e-9)

    @given(st.floats(0.1, 20.0), st.floats(0.01, 5.0))
    @settings(max_examples=100, deadline=None)
    def test_coefficients_nonincreasing_in_alpha(self, a, bump):
        lo = growth.lipschitz(a)
        hi = growth.lipschitz(a + bump)
        for coeff in (coefficient_rs_gf, coefficient_rs_ngf, coefficient_rs_nvrgf):
            assert coeff(hi, CFG, PARAMS, X0) <= coeff(lo, CFG, PARAMS, X0) + 1e-15

    def test_positive_on_benchmark_iterates(self):
        inst = problems.generate_instance(n=4, n_xx=8, n_ax=4, seed=1)
        f = problems.localization_problem(inst)
        cfg = SmoothingConfig(delta=1e-4, dim=f.dim)
        gen = np.random.default_rng(2)
        for _ in range(20):
            x = gen.uniform(-0.5, 0.5, size=f.dim)
            for coeff in (coefficient_rs_gf, coefficient_rs_ngf, coefficient_rs_nvrgf):
                v = coeff(f.model, cfg, PARAMS, x)
                assert np.isfinite(v) and v > 0


class TestRunners:
    def test_rs_gf_constant_objective_stays_put(self):
        f = problems.constant_problem(7.0, dim=2)
        opts = RunnerOptions(measure_points=0, keep_iterates=True)
        rec = rs_gf(f, f.model, CFG, PARAMS, np.array([0.3, -0.4]), RngStream(0), opts)
        assert all(np.array_equal(x, rec.iterates[0]) for x in rec.iterates)
        assert f.oracle_count == 2 * PARAMS.T

    def test_rs_gf_oracle_accounting(self):
        f = problems.quadratic_problem(2)
        opts = RunnerOptions(measure_points=0)
        rs_gf(f, f.model, CFG, PARAMS, X0, RngStream(0), opts)
        assert f.oracle_count == 2 * PARAMS.T

    def test_rs_ngf_constant_objective_skips_steps(self):
        f = problems.constant_problem(1.0, dim=2)
        opts = RunnerOptions(measure_points=0, keep_iterates=True)
        rec = rs_ngf(f, f.model, CFG, PARAMS, np.ones(2), RngStream(0), opts, batch=3)
        assert all(np.array_equal(x, np.ones(2)) for x in rec.iterates)

    def test_rs_ngf_step_length_identity(self):
        f = problems.quadratic_problem(3)
        cfg = SmoothingConfig(delta=0.05, dim=3)
        params = TheoryParams(Delta=1.0, T=40, p=0.1)
        opts = RunnerOptions(measure_points=0, keep_iterates=True)
        rec = rs_ngf(f, f.model, cfg, params, np.ones(3), RngStream(1), opts, batch=4)
        etas = {pt.iter: pt.stepsize for pt in rec.trajectory}
        moved = 0
        for t in range(1, len(rec.iterates)):
            step = np.linalg.norm(rec.iterates[t] - rec.iterates[t - 1])
            if step > 0:
                moved += 1
                assert step == pytest.approx(etas[t], abs=1e-12)
        assert moved > 0

    def test_rs_ngf_oracle_accounting(self):
        f = problems.quadratic_problem(2)
        opts = RunnerOptions(measure_points=0)
        rec = rs_ngf(f, f.model, CFG, PARAMS, np.ones(2), RngStream(0), opts, batch=5)
        assert f.oracle_count == 2 * sum(rec.batch_log)
        assert rec.batch_log == [5] * PARAMS.T

    def test_rs_nvrgf_oracle_accounting(self):
        f = problems.quadratic_problem(2)
        opts = RunnerOptions(measure_points=0)
        rec = rs_nvrgf(
            f, f.model, CFG, PARAMS, np.ones(2), RngStream(0),
            opts, b=3, q=7, big_batch=11,
        )
        refreshes = rec.refresh_count
        others = rec.iterations_run - refreshes
        assert refreshes == math.ceil(PARAMS.T / 7)
        assert f.oracle_count == 2 * 11 * refreshes + 4 * 3 * others

    def test_rs_nvrgf_q1_matches_rs_ngf(self):
        # with q = 1 every iteration refreshes, so the tracker is exactly the
        # batch estimate and the two normalized methods coincide draw for draw
        params = TheoryParams(Delta=1.0, T=30, p=0.1)
        opts = RunnerOptions(measure_points=0, keep_iterates=True)
        f1 = problems.quadratic_problem(3)
        cfg = SmoothingConfig(delta=0.05, dim=3)
        r1 = rs_ngf(f1, f1.model, cfg, params, np.ones(3), RngStream(5), opts,
                    stepsize=0.01, batch=8)
        f2 = problems.quadratic_problem(3)
        r2 = rs_nvrgf(f2, f2.model, cfg, params, np.ones(3), RngStream(5), opts,
                      stepsize=0.01, b=1, q=1, big_batch=8)
        assert len(r1.iterates) == len(r2.iterates)
        for a, b in zip(r1.iterates, r2.iterates):
            assert np.array_equal(a, b)

    def test_vrgf_unnormalized_step(self):
        f = problems.quadratic_problem(3)
        cfg = SmoothingConfig(delta=0.05, dim=3)
        opts = RunnerOptions(measure_points=0, keep_iterates=True)
        rec = vrgf_baseline(f, cfg, 0.05, 20, 4, 16, 5, np.ones(3), RngStream(2), opts)
        # steps are eta * m, so their lengths vary with the tracker norm
        steps = [
            np.linalg.norm(rec.iterates[t] - rec.iterates[t - 1])
            for t in range(1, len(rec.iterates))
        ]
        assert len(set(np.round(steps, 15))) > 1
        for t in range(1, len(rec.iterates)):
            expect = 0.05 * np.linalg.norm(rec.trackers[t - 1])
            assert steps[t - 1] == pytest.approx(expect, abs=1e-12)

    def test_gf_baseline_rejects_bad_stepsize(self):
        f = problems.abs1d_problem()
        cfg = SmoothingConfig(delta=0.01, dim=1)
        with pytest.raises(ValueError):
            gf_baseline(f, cfg, 0.0, 10, np.array([1.0]), RngStream(0))

    def test_gf_baseline_oscillates_near_zero(self):
        f = problems.abs1d_problem()
        cfg = SmoothingConfig(delta=0.01, dim=1)
        opts = RunnerOptions(measure_points=0, keep_iterates=True)
        rec = gf_baseline(f, cfg, 0.01, 2000, np.array([1.0]), RngStream(3), opts)
        tail = [abs(float(x[0])) for x in rec.iterates[-100:]]
        assert max(tail) <= 0.05

    def test_budget_stops_run(self):
        f = problems.quadratic_problem(2)
        opts = RunnerOptions(measure_points=0, oracle_budget=10)
        rec = rs_gf(f, f.model, CFG, PARAMS, X0, RngStream(0), opts)
        assert rec.iterations_run == 5
        assert f.oracle_count == 10

    def test_divergence_flagged_not_raised(self):
        # objective undefined outside |x| <= 1: stepping far produces nan
        def fn(x):
            return float(np.sqrt(1.0 - x[0] ** 2))

        f = problems.Problem(dim=1, fn=fn, batch_fn=lambda X: np.sqrt(1.0 - X[:, 0] ** 2))
        cfg = SmoothingConfig(delta=0.01, dim=1)
        opts = RunnerOptions(measure_points=0)
        rec = gf_baseline(f, cfg, 50.0, 100, np.array([0.9]), RngStream(1), opts)
        assert rec.diverged
        assert rec.warnings

    def test_guard_radius_warning(self):
        f = problems.linear_problem(np.array([1.0, 1.0]))
        cfg = SmoothingConfig(delta=0.1, dim=2)
        opts = RunnerOptions(measure_points=0, guard_radius=1.0)
        rec = gf_baseline(f, cfg, 1.0, 50, np.zeros(2), RngStream(2), opts)
        assert any("guard radius" in w for w in rec.warnings)
        assert not rec.diverged

    def test_projection_applied(self):
        f = problems.linear_problem(np.array([1.0, 1.0]))
        f.projection = problems.box_projection(0.5)
        cfg = SmoothingConfig(delta=0.1, dim=2)
        opts = RunnerOptions(measure_points=0, keep_iterates=True)
        rec = gf_baseline(f, cfg, 1.0, 50, np.zeros(2), RngStream(2), opts)
        for x in rec.iterates:
            assert np.all(np.abs(x) <= 0.5 + 1e-15)

    def test_measurement_separate_counter(self):
        f = problems.quadratic_problem(2)
        opts = RunnerOptions(measure_points=4, b_eval=50, log_points=0)
        params = TheoryParams(Delta=1.0, T=20, p=0.1)
        rec = rs_gf(f, f.model, CFG, params, X0, RngStream(0), opts)
        assert f.oracle_count == 2 * params.T
        # 4 measurements at 2*b_eval calls each, plus the f logs of the
        # start point and the forced final trajectory row
        assert f.measurement_count == len(rec.measured) * 100 + 2
        assert len(rec.measured) == 4

    def test_trajectory_oracle_calls_increase(self):
        f = problems.quadratic_problem(2)
        rec = rs_gf(f, f.model, CFG, PARAMS, X0, RngStream(0), RunnerOptions(measure_points=0))
        calls = [pt.oracle_calls for pt in rec.trajectory]
        assert calls == sorted(calls)
        assert all(b > a for a, b in zip(calls, calls[1:]))


class TestSelectOutput:
    def _record(self, surrogates):
        rec = RunRecord(algorithm="RS-GF")
        for i, s in enumerate(surrogates):
            rec.measured.append((i + 1, np.array([float(i)]), s))
        rec.final_point = np.array([99.0])
        return rec

    def test_min_surrogate(self):
        rec = self._record([3.0, 1.0, 2.0])
        assert select_output(rec)[0] == 1.0

    def test_earliest_tie(self):
        rec = self._record([1.0, 1.0, 5.0])
        assert select_output(rec)[0] == 0.0

    def test_fallback_with_warning(self):
        rec = self._record([])
        out = select_output(rec)
        assert out[0] == 99.0
        assert any("final iterate" in w for w in rec.warnings)


@given(
    st.lists(st.floats(-10, 10, allow_nan=False), min_size=3, max_size=3),
    st.lists(st.floats(-10, 10, allow_nan=False), min_size=3, max_size=3),
)
@settings(max_examples=300, deadline=None)
def test_normalized_inner_product_inequality(xs, ys):
    # <x, y>/||y|| >= ||x|| - 2 ||x - y|| for y != 0
    x = np.array(xs)
    y = np.array(ys)
    ny = np.linalg.norm(y)
    if ny == 0.0:
        return
    lhs = float(x @ y) / ny
    rhs = np.linalg.norm(x) - 2.0 * np.linalg.norm(x - y)
    assert lhs >= rhs - 1e-9
