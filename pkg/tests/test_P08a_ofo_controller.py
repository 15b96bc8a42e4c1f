import numpy as np
import pytest

from processes.P06_class_items import ControllerState, OfoConfig, QpConfig
from processes.P08a_ofo_controller import (
    controller_step, descent_direction, objective, objective_gradient, saturate,
)

SENS = -408.0     # Pa/Nm, close to the calibrated plant at the operating point


def const_sens(value):
    return lambda u: value


class TestObjective:

    def test_values(self):
        assert objective(1.0, 1.0) == 0.0
        assert objective(1.1, 1.0) == pytest.approx(1e-4)

    def test_gradient(self):
        assert objective_gradient(1.1, 1.0) == (0.0, pytest.approx(0.002))

    def test_gradient_matches_central_difference(self):
        rng = np.random.default_rng(3)
        for ps, psd in rng.uniform(0.8, 1.2, size=(20, 2)):
            h = 1e-4
            fd = (objective(ps + h, psd) - objective(ps - h, psd)) / (2 * h)
            assert objective_gradient(ps, psd)[1] == pytest.approx(fd, rel=1e-8, abs=1e-12)


class TestDescentDirection:

    def test_unit_example(self):
        cfg = OfoConfig(nu=1.0, dt=1.0)
        # 0.2 bar above the setpoint with unit sensitivity in bar
        assert descent_direction(300.0, 1.2, 1.0, -1.0, cfg) == pytest.approx(0.004)

    def test_linear_in_gain(self):
        a = descent_direction(0.0, 1.0, 0.9, SENS, OfoConfig(nu=2.0, dt=1.0))
        b = descent_direction(0.0, 1.0, 0.9, SENS, OfoConfig(nu=6.0, dt=1.0))
        assert b == pytest.approx(3.0 * a)

    def test_zero_gain(self):
        assert descent_direction(0.0, 1.0, 0.9, SENS, OfoConfig(nu=0.0, dt=1.0)) == 0.0

    def test_saturate(self):
        cfg = OfoConfig(nu=1.0, dt=1.0)
        assert saturate(2000.0, cfg) == 1000.0
        assert saturate(-2000.0, cfg) == -300.0
        assert saturate(5.0, cfg) == 5.0


class TestControllerStep:

    def test_pressure_above_setpoint_raises_torque(self):
        cfg = OfoConfig(nu=150.0, dt=47.5)
        nxt = controller_step(ControllerState(u=323.6, k=0), 1.015e5, 0.925e5, const_sens(SENS), cfg)
        # −150 · (−408) · 0.02 · 0.09 bar
        assert nxt.u == pytest.approx(323.6 + 110.16)
        assert nxt.k == 1

    def test_on_setpoint_keeps_input(self):
        cfg = OfoConfig(nu=150.0, dt=47.5)
        nxt = controller_step(ControllerState(u=323.6, k=4), 0.925e5, 0.925e5, const_sens(SENS), cfg)
        assert nxt.u == 323.6
        assert nxt.k == 5

    def test_saturates_at_upper_bound(self):
        cfg = OfoConfig(nu=1000.0, dt=1.0)
        nxt = controller_step(ControllerState(u=900.0), 1.5e5, 0.9e5, const_sens(SENS), cfg)
        assert nxt.u == 1000.0

    def test_pascal_gradient_unit(self):
        bar = OfoConfig(nu=1.0, dt=1.0)
        pa = OfoConfig(nu=1.0, dt=1.0, gradient_pressure_unit="Pa")
        u_bar = controller_step(ControllerState(u=0.0), 1.0e5, 0.99e5, const_sens(-1e-5), bar).u
        u_pa = controller_step(ControllerState(u=0.0), 1.0e5, 0.99e5, const_sens(-1e-5), pa).u
        assert u_pa == pytest.approx(1e5 * u_bar)


class TestQpPath:

    def test_unconstrained_qp_matches_reduced_update(self):
        reduced = OfoConfig(nu=150.0, dt=47.5)
        qp = OfoConfig(nu=150.0, dt=47.5, qp=QpConfig(alpha=3.0, G=[[3.0 / 150.0]]))
        state = ControllerState(u=323.6)
        a = controller_step(state, 1.0e5, 0.95e5, const_sens(SENS), reduced).u
        b = controller_step(state, 1.0e5, 0.95e5, const_sens(SENS), qp).u
        assert b == pytest.approx(a, rel=1e-10)

    def test_only_ratio_of_alpha_and_metric_matters(self):
        state = ControllerState(u=323.6)
        first = OfoConfig(nu=1.0, dt=1.0, qp=QpConfig(alpha=1.0, G=[[0.01]]))
        second = OfoConfig(nu=1.0, dt=1.0, qp=QpConfig(alpha=50.0, G=[[0.5]]))
        a = controller_step(state, 1.0e5, 0.95e5, const_sens(SENS), first).u
        b = controller_step(state, 1.0e5, 0.95e5, const_sens(SENS), second).u
        assert b == pytest.approx(a, rel=1e-10)

    def test_input_constraint_matches_clip(self):
        qp = QpConfig(alpha=1.0, G=[[1.0 / 1000.0]], A=[[1.0], [-1.0]], b=[400.0, 300.0])
        cfg = OfoConfig(nu=1000.0, dt=1.0, qp=qp)
        nxt = controller_step(ControllerState(u=323.6), 1.2e5, 0.9e5, const_sens(SENS), cfg)
        assert nxt.u == pytest.approx(400.0, abs=1e-8)
