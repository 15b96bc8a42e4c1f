import numpy as np
import pytest

from processes.P06_class_items import MetricConfig, Trace
from processes.P09_closed_loop import make_setpoint
from processes.P11_metrics import (
    beta1_baseline, beta2_baseline, count_sign_changes, ise, metrics_summary, oscillations,
)


def residual_trace(t, residual, ysp=92500.0):
    n = len(t)
    ones = np.ones(n)
    return Trace(
        t=np.asarray(t, dtype=float), ps=ysp + np.asarray(residual, dtype=float), pd=1.868e5 * ones,
        m=60.45 * ones, omega=647.2 * ones, u_applied=323.6 * ones, ysp=ysp * ones,
    )


class TestIntegratedSquaredError:

    def test_constant_offset(self):
        t = np.linspace(0.0, 200.0, 20001)
        assert ise(residual_trace(t, np.full_like(t, 9000.0)), MetricConfig()) == pytest.approx(162.0)

    def test_zero_residual(self):
        t = np.linspace(0.0, 200.0, 2001)
        assert ise(residual_trace(t, np.zeros_like(t)), MetricConfig()) == 0.0

    def test_sinusoid(self):
        t = np.linspace(0.0, 2 * np.pi, 10001)
        assert ise(residual_trace(t, np.sin(t)), MetricConfig(gamma1=3.0)) == pytest.approx(3.0 * np.pi, rel=1e-6)

    def test_linear_in_scaling(self):
        t = np.linspace(0.0, 10.0, 101)
        trace = residual_trace(t, 100.0 * np.cos(t))
        assert ise(trace, MetricConfig(gamma1=2e-8)) == pytest.approx(2.0 * ise(trace, MetricConfig()))


class TestSignChanges:

    def test_full_period(self):
        t = np.linspace(0.0, 2 * np.pi, 10001)
        assert count_sign_changes(np.sin(t), deadband=0.0) == 2
        assert oscillations(residual_trace(t, 1000.0 * np.sin(t)), MetricConfig()) == 2

    def test_shifted_period(self):
        t = np.linspace(0.5, 2 * np.pi + 0.5, 10001)
        assert oscillations(residual_trace(t, 1000.0 * np.sin(t)), MetricConfig()) == 2

    @pytest.mark.parametrize("deadband, expected", [(10.0, 0), (1.0, 2)])
    def test_small_alternation(self, deadband, expected):
        assert count_sign_changes(np.array([5.0, -5.0, 5.0]), deadband=deadband) == expected

    def test_ending_inside_band_is_not_a_crossing(self):
        assert count_sign_changes(np.array([20.0, 5.0]), deadband=10.0) == 0

    def test_scaling_never_decreases_count(self):
        t = np.linspace(0.0, 2 * np.pi, 2001)
        residual = 30.0 * np.sin(t) * np.exp(-t / 4.0)
        counts = [count_sign_changes(c * residual, deadband=10.0) for c in (1.0, 2.0, 10.0)]
        assert counts == sorted(counts)

    def test_empty(self):
        assert count_sign_changes(np.array([]), deadband=10.0) == 0

    def test_noise_inside_deadband(self):
        rng = np.random.default_rng(5)
        assert count_sign_changes(rng.uniform(-5.0, 5.0, 1000), deadband=10.0) == 0

    def test_zero_start_does_not_count(self):
        assert count_sign_changes(np.array([0.0, 20.0, 30.0, 0.0, 20.0]), deadband=10.0) == 0

    def test_alternating(self):
        assert count_sign_changes(np.array([20.0, -20.0] * 5), deadband=10.0) == 9

    def test_chatter_inside_band_is_ignored(self):
        residual = np.array([20.0, 5.0, -5.0, 5.0, -5.0, -20.0, -5.0, 5.0, -30.0])
        assert count_sign_changes(residual, deadband=10.0) == 1

    def test_zero_deadband(self):
        assert count_sign_changes(np.array([1.0, -1.0, 0.0, 1.0]), deadband=0.0) == 2


class TestBaselines:

    def test_frozen_constant(self):
        assert beta1_baseline(1.015e5, make_setpoint("constant"), MetricConfig()) == pytest.approx(162.0, rel=1e-9)

    def test_frozen_step(self):
        assert beta1_baseline(1.015e5, make_setpoint("step"), MetricConfig()) == pytest.approx(69.5, abs=0.02)

    def test_oscillation_threshold(self):
        assert beta2_baseline(200.0) == 100.0

    def test_summary_keys(self):
        t = np.linspace(0.0, 200.0, 2001)
        summary = metrics_summary(residual_trace(t, np.full_like(t, 9000.0)), 1.015e5,
                                  make_setpoint("constant"), MetricConfig())
        assert set(summary) == {"epsilon", "oscillations", "beta1_baseline"}
        assert summary["oscillations"] == 0
