import numpy as np
import pytest

from processes.P06_class_items import QpConfig, QpInfeasible, QpStalled
from processes.P08b_active_set_qp import ActiveSetSolver, qp_direction


def random_spd(rng, p):
    X = rng.normal(size=(p, p))
    return X @ X.T + p * np.eye(p)


def grid_minimum(G, g, lo, hi, n=10001):
    w = np.linspace(lo, hi, n)
    q = 0.5 * G * w ** 2 + g * w
    return w[np.argmin(q)]


class TestActiveSetSolver:

    def test_unconstrained_instances(self):
        rng = np.random.default_rng(10)
        for _ in range(100):
            p = int(rng.integers(1, 5))
            G, g = random_spd(rng, p), rng.normal(size=p)
            w = ActiveSetSolver(G, g, np.zeros((0, p)), np.zeros(0)).solve()
            np.testing.assert_allclose(G @ w, -g, atol=1e-9)

    def test_scalar_box_matches_clip_and_grid(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            G = float(rng.uniform(0.1, 10.0))
            g = float(rng.normal(scale=20.0))
            lo = float(rng.uniform(-5.0, 0.0))
            hi = float(rng.uniform(0.0, 5.0))
            solver = ActiveSetSolver([[G]], [g], [[1.0], [-1.0]], [hi, -lo])
            w = solver.solve()[0]
            assert w == pytest.approx(np.clip(-g / G, lo, hi), abs=1e-9)
            assert abs(w - grid_minimum(G, g, lo, hi)) <= (hi - lo) / 10000 + 1e-12

    def test_two_inputs_against_sampling(self):
        rng = np.random.default_rng(12)
        for _ in range(100):
            G, g = random_spd(rng, 2), rng.normal(scale=5.0, size=2)
            M = rng.normal(size=(3, 2))
            r = rng.uniform(0.1, 1.0, size=3)      # w = 0 is always feasible
            w = ActiveSetSolver(G, g, M, r).solve()
            assert np.all(M @ w <= r + 1e-8)

            samples = rng.uniform(-3.0, 3.0, size=(10_000, 2))
            feasible = samples[np.all(samples @ M.T <= r, axis=1)]
            q_samples = 0.5 * np.einsum("ni,ij,nj->n", feasible, G, feasible) + feasible @ g
            assert 0.5 * w @ G @ w + g @ w <= q_samples.min() + 1e-9

    def test_kkt_conditions(self):
        G = np.array([[2.0, 0.5], [0.5, 1.0]])
        g = np.array([-4.0, -4.0])
        M = np.array([[1.0, 1.0], [1.0, 0.0]])
        r = np.array([1.0, 0.8])
        solver = ActiveSetSolver(G, g, M, r)
        w = solver.solve()
        lam = solver.multipliers
        assert np.all(lam >= -1e-10)
        np.testing.assert_allclose(G @ w + g + M.T @ lam, 0.0, atol=1e-9)
        np.testing.assert_allclose(lam * (M @ w - r), 0.0, atol=1e-9)

    def test_empty_feasible_set(self):
        with pytest.raises(QpInfeasible):
            ActiveSetSolver([[1.0]], [0.0], [[1.0], [-1.0]], [-1.0, -1.0]).solve()

    def test_iteration_cap(self):
        with pytest.raises(QpStalled):
            ActiveSetSolver([[1.0]], [-10.0], [[1.0]], [1.0], max_iter=0).solve()


class TestQpDirection:

    def test_scalar_input_returns_float(self):
        qp = QpConfig(alpha=1.0, G=[[2.0]])
        w = qp_direction(323.6, 1.0e5, (0.0, 0.002), -408.0, qp)
        assert isinstance(w, float)
        assert w == pytest.approx(0.408)

    def test_output_constraint(self):
        # y + α S w ≤ d with S = −400 and y already 500 Pa above d: w ≥ 1.25
        qp = QpConfig(alpha=1.0, G=[[1.0]], C=[[1.0]], d=[1.0e5])
        w = qp_direction(300.0, 1.005e5, (0.0, 0.0), -400.0, qp)
        assert w == pytest.approx(1.25, abs=1e-9)

    def test_shape_mismatch(self):
        qp = QpConfig(alpha=1.0, G=[[1.0, 0.0], [0.0, 1.0]])
        with pytest.raises(ValueError):
            qp_direction(np.zeros(2), 1.0, (0.0, 1.0), [[1.0, 2.0, 3.0]], qp)
