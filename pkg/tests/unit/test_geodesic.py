"""Unit tests for geodesic transport"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from horocurv.core.errors import ChartDomainError, FrameError
from horocurv.core.geodesic import (
    frame_error,
    geodesic_step,
    initial_state,
    renormalize,
    seed_frame,
    transport_frame,
)
from horocurv.infrastructure.metrics import HyperbolicSpace
from horocurv.infrastructure.metrics.complex_hyperbolic import COMPLEX_STRUCTURE
from horocurv.models.config import IntegrationMethod, IntegratorConfig
from tests.helpers import unit_vector


def _endpoint(model, v, horizon, step, method=IntegrationMethod.RK4):
    cfg = IntegratorConfig(step=step, method=method, renormalize_every=10**9)
    return transport_frame(model, v, None, horizon, cfg)[-1]


@pytest.mark.unit
class TestSeedFrame:
    """Completing a velocity to an orthonormal basis"""

    def test_frame_is_orthonormal_complement(self, h3):
        """Rows are g-orthonormal and g-orthogonal to v"""
        v = unit_vector(h3, [0.2, 0.1, 0.8], [1.0, 2.0, -0.5])
        frame = seed_frame(h3, v)
        g = h3.metric_at(v.base)
        assert frame.shape == (2, 3)
        assert_allclose(frame @ g @ frame.T, np.eye(2), atol=1e-12)
        assert_allclose(frame @ g @ v.components, 0.0, atol=1e-12)

    def test_parallel_axis_skipped(self, h3):
        """An axis nearly parallel to v is not used as a seed"""
        v = unit_vector(h3, [0, 0, 1.0], [0.0, 0.05, 1.0])
        frame = seed_frame(h3, v)
        # The first seeded row comes from the x1 axis
        assert abs(frame[0][0]) == pytest.approx(1.0)

    def test_adapted_frame_leads_with_jv(self, ch2):
        """On CH^2 the adapted frame starts with Jv"""
        v = unit_vector(ch2, [0.1, 0.2, -0.1, 0.3], [0.3, -0.2, 0.5, 0.1])
        frame = seed_frame(ch2, v, adapted=True)
        assert_allclose(frame[0], COMPLEX_STRUCTURE @ v.components, atol=1e-12)

    def test_renormalize_rejects_degenerate_rows(self):
        """Linearly dependent rows raise FrameError"""
        rows = np.array([[1.0, 0, 0], [0, 1.0, 0], [0, 1.0, 0]])
        with pytest.raises(FrameError):
            renormalize(np.eye(3), rows)


@pytest.mark.unit
class TestGeodesicStep:
    """Single integrator steps"""

    def test_vertical_geodesic(self, h3):
        """x_n(t) = e^t along the vertical geodesic"""
        v = unit_vector(h3, [0, 0, 1.0], [0, 0, 1.0])
        end = _endpoint(h3, v, 1.0, 1e-3)
        assert end.position[-1] == pytest.approx(np.e, abs=1e-6)
        assert_allclose(end.position[:-1], 0.0, atol=1e-12)

    def test_vertical_geodesic_rk38(self, h3):
        """The 3/8 rule reaches the same point"""
        v = unit_vector(h3, [0, 0, 1.0], [0, 0, 1.0])
        end = _endpoint(h3, v, 1.0, 1e-3, IntegrationMethod.RK38)
        assert end.position[-1] == pytest.approx(np.e, abs=1e-6)

    def test_zero_step_leaves_state_unchanged(self, ch2):
        """dt = 0 returns the same state"""
        state = initial_state(ch2, unit_vector(ch2, [0.1, 0, 0, 0.2], [1.0, 0, 0, 0]))
        assert geodesic_step(ch2, state, IntegratorConfig(), dt=0.0) is state

    def test_chart_exit_raises(self, h3):
        """Without recentering a geodesic heading to the boundary leaves the chart"""
        v = unit_vector(h3, [0, 0, 1e-4], [0, 0, -1.0])
        cfg = IntegratorConfig(step=1e-2, recenter=False)
        with pytest.raises(ChartDomainError):
            transport_frame(h3, v, None, 10.0, cfg)

    def test_recentering_keeps_the_chart(self, h3):
        """With recentering the same geodesic continues indefinitely"""
        v = unit_vector(h3, [0, 0, 1e-4], [0, 0, -1.0])
        cfg = IntegratorConfig(step=1e-2, recenter=True)
        trajectory = transport_frame(h3, v, None, 10.0, cfg)
        assert trajectory[-1].recenterings >= 1
        assert trajectory[-1].t == pytest.approx(10.0)

    def test_backward_horizon(self, h3):
        """Negative horizons integrate backward in time"""
        v = unit_vector(h3, [0, 0, 1.0], [0, 0, 1.0])
        end = _endpoint(h3, v, -1.0, 1e-3)
        assert end.t == pytest.approx(-1.0)
        assert end.position[-1] == pytest.approx(np.exp(-1.0), abs=1e-6)

    def test_invalid_initial_frame_rejected(self, h3):
        """Non-orthonormal seed frames raise FrameError"""
        v = unit_vector(h3, [0, 0, 1.0], [0, 0, 1.0])
        with pytest.raises(FrameError):
            transport_frame(h3, v, np.array([[1.0, 0, 0], [1.0, 0, 0]]), 1.0, IntegratorConfig())


@pytest.mark.unit
class TestParallelTransport:
    """Frame invariants along the trajectory"""

    def test_frame_stays_orthonormal(self, h3):
        """Gramian within 1e-7 of the identity up to t = 10"""
        v = unit_vector(h3, [0.1, -0.2, 1.0], [0.6, 0.3, 0.2])
        cfg = IntegratorConfig(step=1e-3, recenter=True)
        trajectory = transport_frame(h3, v, None, 10.0, cfg)
        assert max(frame_error(s) for s in trajectory) < 1e-7

    def test_complex_structure_is_parallel(self, ch2):
        """The adapted vector Jc' stays equal to J c'"""
        v = unit_vector(ch2, [0.1, 0.0, -0.2, 0.1], [0.5, 0.2, -0.3, 0.4])
        cfg = IntegratorConfig(step=1e-3, recenter=True)
        trajectory = transport_frame(ch2, v, None, 5.0, cfg, adapted=True)
        for state in trajectory[::100]:
            assert_allclose(state.frame[0], COMPLEX_STRUCTURE @ state.velocity, atol=1e-6)

    def test_round_trip_returns_seed_frame(self, h3):
        """Forward t then backward t recovers the seed frame"""
        v = unit_vector(h3, [0.3, 0.1, 0.9], [0.2, -0.7, 0.4])
        cfg = IntegratorConfig(step=1e-3)
        forward = transport_frame(h3, v, None, 2.0, cfg)
        back = transport_frame(h3, forward[-1].tangent, forward[-1].frame, -2.0, cfg)
        assert_allclose(back[-1].position, v.base.coordinates, atol=1e-6)
        assert_allclose(back[-1].frame, forward[0].frame, atol=1e-6)

    @pytest.mark.slow
    def test_velocity_norm_drift(self, h3):
        """|c'| drifts less than 1e-9 over t in [0, 20] without renormalization"""
        v = unit_vector(h3, [0.0, 0.0, 1.0], [0.8, 0.0, 0.6])
        cfg = IntegratorConfig(step=1e-3, renormalize_every=10**9, recenter=True)
        trajectory = transport_frame(h3, v, None, 20.0, cfg)
        drift = max(
            abs(float(s.velocity @ s.model._metric(s.position) @ s.velocity) - 1.0) for s in trajectory
        )
        assert drift < 1e-9


@pytest.mark.unit
class TestConvergenceOrder:
    """Fourth-order convergence of the fixed-step schemes"""

    @pytest.mark.parametrize("method", [IntegrationMethod.RK4, IntegrationMethod.RK38])
    def test_order_four(self, method):
        """Halving the step shrinks the position error by about 2^4"""
        model = HyperbolicSpace(dimension=3)
        v = unit_vector(model, [0, 0, 1.0], [1.0, 0.0, 0.3])
        horizon = 2.0
        reference = _endpoint(model, v, horizon, 1e-3, method).position
        errors = [
            np.linalg.norm(_endpoint(model, v, horizon, h, method).position - reference)
            for h in (0.1, 0.05, 0.025)
        ]
        orders = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
        assert np.all((orders > 3.5) & (orders < 4.5))
