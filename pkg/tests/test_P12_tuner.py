import math

import numpy as np
import pytest

from processes.P06_class_items import ConfigError, EvalRecord, SimulationFault
from processes.P09_closed_loop import tuning_sim_spec
from processes.P12_tuner import (
    Evaluator, TuneSpec, evaluate, rank_key, sweep, tune, tune_schedule, violation,
)


def product_surrogate(nu, dt):
    """ε = 1/(νΔT): feasible for β1 = 1e-4 once νΔT ≥ 1e4."""
    return (math.inf if nu * dt == 0 else 1.0 / (nu * dt)), 0


def banded_surrogate(nu, dt):
    """ε = 1/(νΔT), |F| = ⌊ν/100⌋: with β = (2e-4, 0) only 50 ≤ ν < 100 is feasible at ΔT = 100."""
    return (math.inf if nu * dt == 0 else 1.0 / (nu * dt)), math.floor(nu / 100.0)


def binding_surrogate(nu, dt):
    """ε = ΔT/(1 + ν/250): with β1 = 10 the largest feasible ΔT is 50, at ν = 1000."""
    return dt / (1.0 + nu / 250.0), 0


class CountingFn:

    def __init__(self, fn):
        self.fn = fn
        self.calls = []

    def __call__(self, nu, dt):
        self.calls.append((nu, dt))
        return self.fn(nu, dt)


class TestTuneSpec:

    def test_default_bounds(self):
        spec = TuneSpec()
        assert spec.nu_bounds == (0.0, 1e3)
        assert spec.dt_range == (5e-3, 100.0)

    def test_scaled_coordinates(self):
        spec = TuneSpec()
        assert spec.to_scaled(0.0, 5e-3) == (0.0, 0.0)
        assert spec.to_scaled(1e3, 100.0) == pytest.approx((1.0, 1.0))
        nu, dt = spec.from_scaled(*spec.to_scaled(150.0, 47.5))
        assert (nu, dt) == (pytest.approx(150.0), pytest.approx(47.5))

    def test_from_scaled_clamps(self):
        nu, dt = TuneSpec().from_scaled(1.5, -0.5)
        assert (nu, dt) == (1e3, 5e-3)

    @pytest.mark.parametrize("kwargs", [
        {"beta1": 0.0},
        {"nu_bounds": (10.0, 1.0)},
        {"dt_bounds": (0.0, 10.0)},
        {"initial": (2000.0, 50.0)},
        {"budget": 0},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ConfigError):
            TuneSpec(**kwargs)


class TestRanking:

    def test_feasible_beats_infeasible(self):
        spec = TuneSpec(beta1=10.0, beta2=5.0)
        good = EvalRecord(nu=1.0, dt=1.0, epsilon=5.0, oscillations=0, feasible=True)
        bad = EvalRecord(nu=1.0, dt=90.0, epsilon=11.0, oscillations=0, feasible=False)
        assert rank_key(good, spec) < rank_key(bad, spec)

    def test_larger_sampling_time_wins(self):
        spec = TuneSpec(beta1=10.0, beta2=5.0)
        slow = EvalRecord(nu=1.0, dt=20.0, epsilon=9.0, oscillations=3, feasible=True)
        fast = EvalRecord(nu=1.0, dt=10.0, epsilon=1.0, oscillations=0, feasible=True)
        assert rank_key(slow, spec) < rank_key(fast, spec)

    def test_violation(self):
        spec = TuneSpec(beta1=10.0, beta2=4.0)
        rec = EvalRecord(nu=1.0, dt=1.0, epsilon=15.0, oscillations=6, feasible=False)
        assert violation(rec, spec) == pytest.approx(0.5 + 0.5)
        faulted = EvalRecord(nu=1.0, dt=1.0, epsilon=math.nan, oscillations=None, feasible=False, fault="x")
        assert violation(faulted, spec) == math.inf


class TestEvaluator:

    def test_memo_hits_are_free(self):
        fn = CountingFn(product_surrogate)
        evaluator = Evaluator(TuneSpec(budget=2), fn)
        evaluator(1.0, 1.0)
        evaluator(1.0, 1.0)
        evaluator(2.0, 1.0)
        assert evaluator.evaluations == 2
        assert len(fn.calls) == 2
        assert evaluator(1.0, 1.0).epsilon == 1.0

    def test_budget_exhausted(self):
        evaluator = Evaluator(TuneSpec(budget=1), product_surrogate)
        evaluator(1.0, 1.0)
        with pytest.raises(ConfigError):
            evaluator(2.0, 2.0)

    def test_fault_becomes_infeasible_record(self):
        def faulty(nu, dt):
            raise SimulationFault(3.0, "non-physical state")

        record = Evaluator(TuneSpec(), faulty)(1.0, 1.0)
        assert not record.feasible
        assert math.isnan(record.epsilon)
        assert record.oscillations is None
        assert "non-physical" in record.fault


class TestTune:

    def test_reaches_largest_sampling_time(self):
        result = tune(TuneSpec(beta1=1e-4, beta2=3.0), product_surrogate)
        assert result.feasible
        assert result.dt_star == pytest.approx(100.0, rel=1e-9)
        assert result.nu_star * result.dt_star >= 1e4
        assert result.evaluations <= 100

    def test_binding_threshold(self):
        result = tune(TuneSpec(beta1=10.0, beta2=3.0, budget=300), binding_surrogate)
        assert result.feasible
        assert result.nu_star == pytest.approx(1e3)
        assert 45.0 <= result.dt_star <= 50.0

    def test_infeasible_everywhere(self):
        result = tune(TuneSpec(beta1=1.0, beta2=3.0), lambda nu, dt: (1e6, 0))
        assert not result.feasible
        assert result.dt_star == pytest.approx(100.0, rel=1e-9)

    def test_faults_are_avoided(self):
        def fn(nu, dt):
            if dt > 60.0:
                raise SimulationFault(0.0, "integrator failed")
            return product_surrogate(nu, dt)

        result = tune(TuneSpec(beta1=1e-4, beta2=3.0, budget=200), fn)
        assert result.feasible
        assert result.dt_star <= 60.0
        assert any(r.fault is not None and r.oscillations is None for r in result.eval_log)

    def test_matches_exhaustive_grid(self):
        spec = TuneSpec(beta1=2e-4, beta2=0.0, budget=400)
        cell = 1.0 / 199.0
        grid = [spec.from_scaled(a, b) for a in np.linspace(0.0, 1.0, 200) for b in np.linspace(0.0, 1.0, 200)]
        records = []
        for nu, dt in grid:
            epsilon, count = banded_surrogate(nu, dt)
            feasible = epsilon <= spec.beta1 and count <= spec.beta2
            records.append(EvalRecord(nu=nu, dt=dt, epsilon=epsilon, oscillations=count, feasible=feasible))
        best = min(records, key=lambda r: rank_key(r, spec))
        assert best.feasible

        result = tune(spec, banded_surrogate)
        assert result.feasible
        s_result, s_best = spec.to_scaled(result.nu_star, result.dt_star), spec.to_scaled(best.nu, best.dt)
        assert abs(s_result[1] - s_best[1]) <= cell
        assert 50.0 <= result.nu_star < 100.0
        returned = next(r for r in result.eval_log if (r.nu, r.dt) == (result.nu_star, result.dt_star))
        assert all(rank_key(returned, spec) <= rank_key(r, spec) for r in result.eval_log)

    def test_result_is_best_of_log(self):
        spec = TuneSpec(beta1=10.0, beta2=3.0)
        result = tune(spec, binding_surrogate)
        best = min(result.eval_log, key=lambda r: rank_key(r, spec))
        assert (result.nu_star, result.dt_star) == (best.nu, best.dt)
        assert len(result.eval_log) == result.evaluations

    def test_budget_is_respected(self):
        fn = CountingFn(binding_surrogate)
        result = tune(TuneSpec(beta1=10.0, beta2=3.0, budget=7), fn)
        assert result.evaluations <= 7
        assert len(fn.calls) == len(set(fn.calls)) == result.evaluations


class TestSchedule:

    def test_empty(self):
        with pytest.raises(ConfigError):
            tune_schedule([], TuneSpec(), evaluate_fn=product_surrogate)

    def test_warm_start_seeds_next_pair(self):
        results = tune_schedule([(1e-4, 3.0), (5e-5, 3.0)], TuneSpec(), warm_start=True,
                                evaluate_fn=product_surrogate)
        assert [(r.beta1, r.beta2) for r in results] == [(1e-4, 3.0), (5e-5, 3.0)]
        first_point = results[1].eval_log[0]
        assert (first_point.nu, first_point.dt) == (results[0].nu_star, results[0].dt_star)

    def test_cold_start_uses_initial_guess(self):
        results = tune_schedule([(1e-4, 3.0), (5e-5, 3.0)], TuneSpec(), evaluate_fn=product_surrogate)
        assert (results[1].eval_log[0].nu, results[1].eval_log[0].dt) == (0.1, 50.0)


class TestSweep:

    def test_order_and_columns(self):
        grid = sweep([1.0, 10.0], [0.5, 5.0, 50.0], TuneSpec(), product_surrogate)
        assert list(grid.columns) == ["nu", "dt", "epsilon", "oscillations"]
        assert list(zip(grid["nu"], grid["dt"])) == [
            (1.0, 0.5), (1.0, 5.0), (1.0, 50.0), (10.0, 0.5), (10.0, 5.0), (10.0, 50.0),
        ]
        assert grid["epsilon"].iloc[0] == pytest.approx(2.0)

    def test_parallel_matches_serial(self):
        serial = sweep([1.0, 10.0, 100.0], [0.5, 5.0], TuneSpec(jobs=1), binding_surrogate)
        parallel = sweep([1.0, 10.0, 100.0], [0.5, 5.0], TuneSpec(jobs=3), binding_surrogate)
        assert serial.equals(parallel)

    def test_out_of_bounds(self):
        with pytest.raises(ConfigError):
            sweep([2000.0], [1.0], TuneSpec(), product_surrogate)
        with pytest.raises(ConfigError):
            sweep([1.0], [150.0], TuneSpec(), product_surrogate)

    def test_empty_axis(self):
        with pytest.raises(ConfigError):
            sweep([], [1.0], TuneSpec(), product_surrogate)


class TestClosedLoopEvaluation:

    def test_frozen_controller_baseline(self, params):
        spec = TuneSpec(params=params, sim=tuning_sim_spec(dt_out=0.1))
        epsilon, count = evaluate(0.1, 50.0, spec)
        assert 140.0 <= epsilon <= 180.0
        assert count == 0

    def test_zero_gain_matches_frozen_bound(self, params):
        spec = TuneSpec(params=params, sim=tuning_sim_spec(dt_out=0.1))
        epsilon, _ = evaluate(0.0, 47.5, spec)
        assert epsilon == pytest.approx(162.0, rel=0.02)

    def test_single_cell_sweep(self, params):
        grid = sweep([150.0], [47.5], TuneSpec(params=params, sim=tuning_sim_spec(dt_out=0.1)))
        assert len(grid) == 1
        assert grid["epsilon"].iloc[0] < 162.0

    @pytest.mark.slow
    def test_tune_first_threshold_pair(self, params):
        spec = TuneSpec(beta1=150.0, beta2=50.0, params=params, sim=tuning_sim_spec(dt_out=0.1))
        result = tune(spec)
        assert result.feasible
        assert result.dt_star >= 90.0
        assert result.epsilon_star <= 150.0


@pytest.mark.slow
class TestParameterTrends:

    def test_crossings_grow_with_gain_at_fast_sampling(self, params):
        grid = sweep([0.001, 0.1, 1.0, 10.0, 1000.0], [0.05], TuneSpec(params=params))
        counts = list(grid["oscillations"])
        assert counts[0] == counts[1] == 0
        assert all(a <= b for a, b in zip(counts, counts[1:]))

    def test_slow_sampling_tracks_worse(self, params):
        grid = sweep([1.0], [0.05, 50.0], TuneSpec(params=params))
        assert grid["epsilon"].iloc[1] > grid["epsilon"].iloc[0]
