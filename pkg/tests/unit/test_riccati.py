"""Unit tests for the Riccati horosphere solver"""

import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from horocurv.core.errors import NonConvergenceError, RiccatiBlowUpError, WindowError
from horocurv.core.riccati import (
    _derivative,
    initial_shape,
    integrate_riccati,
    riccati_matrix_residual,
    stable_shape_operator,
    trace_derivative,
    traced_riccati_residual,
    trajectory_rows,
)
from horocurv.infrastructure.metrics import HyperbolicSpace
from horocurv.models.config import InitialCondition, RiccatiConfig
from tests.helpers import unit_vector


@pytest.mark.unit
class TestIntegrateRiccati:
    """The low-level kernel over sampled curvature"""

    def test_constant_solution_is_fixed(self):
        """S = k Id stays put under R = -k^2 Id"""
        curv = np.tile(-4.0 * np.eye(3), (21, 1, 1))
        out = integrate_riccati(curv, 2.0 * np.eye(3), 0.01)
        assert out.shape == (11, 3, 3)
        assert_allclose(out, np.tile(2.0 * np.eye(3), (11, 1, 1)), atol=1e-14)

    def test_large_initial_condition_contracts(self):
        """S(-T) = 10 Id approaches Id"""
        curv = np.tile(-np.eye(2), (2001, 1, 1))
        out = integrate_riccati(curv, 10.0 * np.eye(2), 0.01)
        assert_allclose(out[-1], np.eye(2), atol=1e-6)

    def test_even_sample_count_rejected(self):
        """The kernel needs an odd number of samples"""
        with pytest.raises(ValueError):
            integrate_riccati(np.zeros((4, 2, 2)), np.eye(2), 0.1)

    def test_positive_curvature_blows_up(self):
        """Focal points show up as blow-up"""
        curv = np.tile(np.eye(2), (801, 1, 1))
        with pytest.raises(RiccatiBlowUpError):
            integrate_riccati(curv, np.zeros((2, 2)), 0.005)

    def test_output_is_symmetric(self, rng):
        """Every stored matrix is exactly symmetric"""
        a = rng.standard_normal((41, 3, 3))
        curv = -(np.einsum("tij,tkj->tik", a, a) + np.eye(3))
        out = integrate_riccati(curv, 5.0 * np.eye(3), 0.01)
        assert np.all(out == np.transpose(out, (0, 2, 1)))

    def test_comparison_monotonicity(self, rng):
        """Ordered initial conditions give ordered solutions"""
        for _ in range(100):
            a = rng.standard_normal((3, 3))
            base = -(a @ a.T + 0.5 * np.eye(3))
            wobble = 0.1 * rng.standard_normal((101, 3, 3))
            curv = base + 0.5 * (wobble + np.transpose(wobble, (0, 2, 1)))
            bound = float(np.max(np.abs(np.linalg.eigvalsh(curv))))
            c2 = np.sqrt(bound) * rng.uniform(1.0, 3.0)
            c1 = c2 + rng.uniform(0.1, 5.0)
            s1 = integrate_riccati(curv, c1 * np.eye(3), 0.01)[-1]
            s2 = integrate_riccati(curv, c2 * np.eye(3), 0.01)[-1]
            assert np.linalg.eigvalsh(s1 - s2)[0] >= -1e-8

    def test_constant_curvature_guess(self):
        """sqrt(-R) for a negative definite R"""
        r = np.diag([-4.0, -1.0, -9.0])
        assert_allclose(initial_shape(InitialCondition.CONSTANT_CURVATURE, r, 10.0, 9.0), np.diag([2.0, 1.0, 3.0]))
        assert_allclose(initial_shape(InitialCondition.LARGE_MULTIPLE, r, 10.0, 9.0), 30.0 * np.eye(3))


@pytest.mark.unit
class TestStableShapeOperator:
    """Stable solution along model geodesics"""

    def test_hyperbolic_identity(self, h3, fast_riccati):
        """H^3: S(0) = Id"""
        v = unit_vector(h3, [0.2, -0.1, 0.9], [0.3, 0.5, -0.2])
        run = stable_shape_operator(h3, v, cfg=fast_riccati)
        assert_allclose(run.matrix, np.eye(2), atol=1e-6)
        assert run.converged
        assert run.convergence_gap <= fast_riccati.convergence_tol

    def test_hyperbolic_scaled(self, fast_riccati):
        """H^4 with k = 2: S(0) = 2 Id"""
        model = HyperbolicSpace(dimension=4, k=2.0)
        v = unit_vector(model, [0, 0, 0, 1.0], [1.0, 0.0, 0.5, -0.5])
        run = stable_shape_operator(model, v, cfg=fast_riccati)
        assert_allclose(run.matrix, 2.0 * np.eye(3), atol=1e-6)

    def test_complex_hyperbolic_adapted(self, ch2, fast_riccati):
        """CH^2 adapted frame: S(0) = diag(2, 1, 1)"""
        v = unit_vector(ch2, [0.1, 0.2, 0.0, -0.1], [0.4, 0.1, -0.3, 0.6])
        run = stable_shape_operator(ch2, v, cfg=fast_riccati)
        assert_allclose(run.matrix, np.diag([2.0, 1.0, 1.0]), atol=1e-4)
        assert_allclose(run.eigenvalues, [1.0, 1.0, 2.0], atol=1e-4)
        assert run.recenterings >= 1

    def test_perturbed_is_positive_and_bounded(self, perturbed, fast_riccati):
        """Principal curvatures lie in [0, sqrt(max |K|)] over the past of the geodesic"""
        v = unit_vector(perturbed, perturbed.base_point().coordinates, [0.3, 0.4, 0.5])
        run = stable_shape_operator(perturbed, v, cfg=fast_riccati)
        lam = np.array(run.eigenvalues)
        ceiling = np.sqrt(np.max(np.abs(np.linalg.eigvalsh(run.trajectory.curvature))))
        assert lam[0] >= -1e-8
        assert lam[-1] <= ceiling + 1e-6

    def test_initial_condition_independence(self, perturbed, fast_riccati):
        """Both initial-condition kinds give the same S(0)"""
        v = unit_vector(perturbed, perturbed.base_point().coordinates, [0.0, 1.0, 0.2])
        guess = fast_riccati.model_copy(update={"initial_condition": InitialCondition.CONSTANT_CURVATURE})
        a = stable_shape_operator(perturbed, v, cfg=fast_riccati)
        b = stable_shape_operator(perturbed, v, cfg=guess)
        assert_allclose(a.matrix, b.matrix, atol=2 * fast_riccati.convergence_tol)

    def test_horizon_doubling(self, h3):
        """A short horizon is doubled until the gap closes"""
        cfg = RiccatiConfig(horizon=1.0, step=1e-2, convergence_tol=1e-6, max_horizon=64.0)
        v = unit_vector(h3, [0, 0, 1.0], [1.0, 0, 0])
        run = stable_shape_operator(h3, v, cfg=cfg)
        assert run.horizon_doublings >= 1
        assert run.horizon == pytest.approx(2.0**run.horizon_doublings)
        assert run.converged

    def test_non_convergence(self, perturbed):
        """A gap above tolerance at the largest horizon raises"""
        cfg = RiccatiConfig(horizon=0.2, step=1e-2, convergence_tol=1e-12)
        v = unit_vector(perturbed, perturbed.base_point().coordinates, [1.0, 0.0, 0.0])
        with pytest.raises(NonConvergenceError):
            stable_shape_operator(perturbed, v, cfg=cfg)

    def test_exponential_convergence(self, perturbed):
        """Doubling the horizon shrinks the gap by more than 10x"""
        v = unit_vector(perturbed, perturbed.base_point().coordinates, [0.2, -0.5, 0.4])
        gaps = [
            stable_shape_operator(perturbed, v, T, RiccatiConfig(step=1e-2, convergence_tol=1.0)).convergence_gap
            for T in (2.0, 4.0)
        ]
        assert gaps[1] < 0.1 * gaps[0]

    def test_run_serializes(self, h3, fast_riccati):
        """RiccatiRun dumps to JSON without the stored trajectory"""
        v = unit_vector(h3, [0, 0, 1.0], [0, 1.0, 0])
        run = stable_shape_operator(h3, v, cfg=fast_riccati)
        data = json.loads(run.model_dump_json())
        assert set(data) >= {"matrix", "eigenvalues", "convergence_gap", "horizon", "convergence_tol", "step"}
        assert data["initial_condition_kind"] == "large-multiple-of-identity"
        assert "_trajectory" not in data


@pytest.mark.unit
class TestResiduals:
    """Traced and untraced Riccati residuals"""

    def test_traced_residual_hyperbolic(self, h3, fast_riccati):
        """H^3: trace S constant, tr S^2 = 2, Ric = -2"""
        v = unit_vector(h3, [0, 0, 1.0], [0.6, 0.0, 0.8])
        run = stable_shape_operator(h3, v, cfg=fast_riccati)
        assert traced_riccati_residual(h3, v, run, 2.0) < 1e-8

    def test_traced_residual_complex(self, ch2, fast_riccati):
        """CH^2: tr S^2 = 6, Ric = -6"""
        v = unit_vector(ch2, [0.0, 0.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0])
        run = stable_shape_operator(ch2, v, cfg=fast_riccati)
        assert traced_riccati_residual(ch2, v, run, 2.0) < 1e-6

    def test_traced_residual_perturbed(self, perturbed, fast_riccati):
        """Perturbed model at step 5e-3: residual below 5e-3 over [-2, 0]"""
        v = unit_vector(perturbed, perturbed.base_point().coordinates, [0.3, -0.2, 0.6])
        run = stable_shape_operator(perturbed, v, cfg=fast_riccati.model_copy(update={"step": 5e-3}))
        assert traced_riccati_residual(perturbed, v, run, 2.0) < 5e-3

    def test_matrix_residual_constant_curvature(self, fast_riccati):
        """Full equation holds pointwise on H^4"""
        model = HyperbolicSpace(dimension=4, k=2.0)
        v = unit_vector(model, [0.1, 0, 0, 1.0], [0.0, 1.0, 0.0, 1.0])
        run = stable_shape_operator(model, v, cfg=fast_riccati)
        assert riccati_matrix_residual(run, 2.0) < 1e-8

    def test_window_reaches_final_sample(self, h3, fast_riccati):
        """Derivatives cover every sample of [-window, 0], t = 0 included"""
        v = unit_vector(h3, [0, 0, 1.0], [0.0, 0.6, 0.8])
        run = stable_shape_operator(h3, v, cfg=fast_riccati)
        derivative = trace_derivative(run, 0.5)
        assert derivative.shape == (int(np.count_nonzero(run.trajectory.times >= -0.5 - 1e-12)),)
        assert np.max(np.abs(derivative)) < 1e-8

    def test_stencils_exact_on_quartics(self):
        """Central and one-sided five-point stencils differentiate quartics exactly"""
        t = np.linspace(-1.0, 0.0, 11)
        values = t**4 - 2.0 * t**3 + 0.5 * t
        expected = 4.0 * t**3 - 6.0 * t**2 + 0.5
        derivative = _derivative(values, np.arange(t.size), 0.1)
        assert_allclose(derivative, expected, atol=1e-10)

    def test_window_outside_trajectory(self, h3):
        """Windows longer than the stored run are rejected"""
        cfg = RiccatiConfig(horizon=1.0, step=1e-2, check_convergence=False)
        v = unit_vector(h3, [0, 0, 1.0], [1.0, 0, 0])
        run = stable_shape_operator(h3, v, cfg=cfg)
        with pytest.raises(WindowError):
            traced_riccati_residual(h3, v, run, 5.0)
        with pytest.raises(WindowError):
            riccati_matrix_residual(run, 0.0)

    def test_direction_mismatch(self, h3, fast_riccati):
        """Residuals refuse a run computed for another vector"""
        v = unit_vector(h3, [0, 0, 1.0], [1.0, 0, 0])
        w = unit_vector(h3, [0, 0, 1.0], [0, 1.0, 0])
        run = stable_shape_operator(h3, v, cfg=fast_riccati)
        with pytest.raises(ValueError):
            traced_riccati_residual(h3, w, run, 1.0)

    def test_trajectory_rows(self, h3):
        """One row per Riccati node, ending at t = 0"""
        cfg = RiccatiConfig(horizon=1.0, step=1e-2, check_convergence=False)
        v = unit_vector(h3, [0, 0, 1.0], [1.0, 0, 0])
        rows = trajectory_rows(stable_shape_operator(h3, v, cfg=cfg))
        assert len(rows) == 51
        assert rows[-1]["t"] == 0.0
        assert {"x1", "x2", "x3", "trace_S", "trace_S2", "lambda1", "lambda2"} <= set(rows[0])


@pytest.mark.slow
class TestStepHalving:
    """Step refinement of the traced residual on the perturbed model"""

    def test_residual_shrinks(self, perturbed):
        """Halving the step reduces the residual by at least 4x"""
        v = unit_vector(perturbed, perturbed.base_point().coordinates, [0.3, -0.2, 0.6])
        residuals = []
        for step in (1e-2, 5e-3):
            cfg = RiccatiConfig(horizon=15.0, step=step)
            run = stable_shape_operator(perturbed, v, cfg=cfg)
            residuals.append(traced_riccati_residual(perturbed, v, run, 2.0))
        assert residuals[1] * 4.0 <= residuals[0]
