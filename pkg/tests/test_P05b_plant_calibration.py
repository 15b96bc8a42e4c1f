import numpy as np
import pytest

from processes.P05a_plant_dynamics import derivatives, settling_time_at
from processes.P05b_plant_calibration import (
    calibrate, calibration_report, default_targets, target_state,
)
from processes.P06_class_items import CalibrationError


class TestCalibrate:

    def test_steady_state_residual(self, params, targets):
        state = target_state(targets)
        rates = derivatives(state, targets.tau, params)
        assert np.max(np.abs(rates) / state.scale()) < 1e-8

    def test_torque_coefficient_refit(self, params):
        assert params.delta == pytest.approx(0.5 / 60.45, rel=1e-12)

    def test_settling_goal_met(self, params, targets):
        t_s = settling_time_at(target_state(targets), targets.tau, params)
        assert t_s == pytest.approx(47.5, abs=1e-3)

    def test_map_passes_through_target_ratio(self, params, targets):
        c1, c2, c3, c4, c5, c6 = params.map_coeffs
        ratio = c1 + c2 * targets.m + c6 * targets.omega ** 2
        assert ratio == pytest.approx(targets.pd / targets.ps, rel=1e-12)
        assert (c3, c4, c5) == (0.0, 0.0, 0.0)

    def test_deterministic(self, targets):
        assert calibrate(targets) == calibrate(targets)


class TestCalibrationErrors:

    def test_pinned_valve_gain_mismatch(self):
        targets = default_targets().model_copy(update={"kin": 1.0})
        with pytest.raises(CalibrationError) as info:
            calibrate(targets)
        assert "m_in" in str(info.value)

    def test_pressure_ratio_not_above_one(self):
        targets = default_targets().model_copy(update={"pd": 0.9e5})
        with pytest.raises(CalibrationError):
            calibrate(targets)

    def test_zero_valve_drop(self):
        targets = default_targets().model_copy(update={"ps": 1.05e5})
        with pytest.raises(CalibrationError):
            calibrate(targets)

    def test_unreachable_settling_goal(self):
        targets = default_targets().model_copy(update={"settling_goal": 1e7})
        with pytest.raises(CalibrationError) as info:
            calibrate(targets)
        assert info.value.report


class TestReport:

    def test_report_lists_parameters_and_dynamics(self, params, targets):
        text = calibration_report(params, targets)
        assert "settling time" in text
        assert "c6" in text
        assert "domega" in text
