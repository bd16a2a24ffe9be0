"""
Riccati Horosphere Solver

The shape operator S of the horosphere with inward normal v is the stable
solution of the matrix Riccati equation along the geodesic c through v,

    S' + S^2 + R_c' = 0,

expressed in a parallel orthonormal frame of c'^perp. It is extracted by
integrating forward from a large initial condition at t = -T up to t = 0; the
comparison principle squeezes every such solution onto the stable one at an
exponential rate, measured here by repeating the run from -2T on the same
trajectory.

The geodesic is sampled once, backward, on a uniform grid. The Riccati RK4
advances two grid intervals per step and uses the middle sample as its
half-step stage, so curvature is only ever evaluated at grid points.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field, PrivateAttr
from scipy import linalg as la

from horocurv.core.errors import NonConvergenceError, RiccatiBlowUpError, WindowError
from horocurv.core.geodesic import initial_state, iter_transport
from horocurv.infrastructure.metrics.provider import MetricModel
from horocurv.models.config import InitialCondition, RiccatiConfig
from horocurv.models.geometry import GeodesicState, ShapeOperator, TangentVector

logger = logging.getLogger(__name__)

# Five-point first-derivative stencils: central, then one-sided near the ends
_STENCIL = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_END_STENCILS = {
    0: (np.arange(-4, 1), np.array([3.0, -16.0, 36.0, -48.0, 25.0]) / 12.0),
    1: (np.arange(-3, 2), np.array([-1.0, 6.0, -18.0, 10.0, 3.0]) / 12.0),
}


@dataclass
class RiccatiTrajectory:
    """Samples of the accepted run at the Riccati nodes (every second grid point), ascending in t"""

    times: np.ndarray
    shape: np.ndarray
    curvature: np.ndarray
    states: List[GeodesicState]

    @property
    def trace(self) -> np.ndarray:
        return np.trace(self.shape, axis1=1, axis2=2)

    @property
    def spacing(self) -> float:
        return float(self.times[1] - self.times[0])


class RiccatiRun(BaseModel):
    """Result of a stable Riccati extraction"""

    model: str = Field(..., description="Registry identifier of the model")
    direction: List[float] = Field(..., description="Chart components of v")
    base_point: List[float] = Field(..., description="Chart coordinates of v's base point")
    horizon: float = Field(..., gt=0, description="Accepted backward horizon T")
    step: float = Field(..., gt=0, description="Geodesic grid spacing")
    convergence_tol: float = Field(..., gt=0)
    initial_condition_kind: InitialCondition
    matrix: List[List[float]] = Field(..., description="S(0), row-major")
    eigenvalues: List[float] = Field(..., description="Ascending principal curvatures")
    convergence_gap: Optional[float] = Field(
        default=None, description="Max entry change of S(0) between the -T and -2T runs"
    )
    horizon_doublings: int = Field(default=0, ge=0)
    recenterings: int = Field(default=0, ge=0, description="Chart moves along the stored trajectory")

    _trajectory: Optional[RiccatiTrajectory] = PrivateAttr(default=None)

    @property
    def converged(self) -> bool:
        return self.convergence_gap is None or self.convergence_gap <= self.convergence_tol

    @property
    def shape_operator(self) -> ShapeOperator:
        return ShapeOperator(np.array(self.matrix), at_time=0.0, frame_id=f"{self.model}:{self.direction}")

    @property
    def trajectory(self) -> RiccatiTrajectory:
        if self._trajectory is None:
            raise WindowError("Run carries no stored trajectory")
        return self._trajectory


def _riccati_rhs(s: np.ndarray, r: np.ndarray) -> np.ndarray:
    return -(s @ s) - r


def integrate_riccati(curvatures: np.ndarray, s_init: np.ndarray, grid_step: float, blowup: float = 1e6) -> np.ndarray:
    """Integrate S' = -S^2 - R forward over uniformly sampled curvature matrices.

    Args:
        curvatures: R at grid times t_0 < t_1 < ..., shape (2m + 1, d, d)
        s_init: S(t_0)
        grid_step: Spacing of the curvature samples
        blowup: Entry magnitude treated as blow-up

    Returns:
        S at t_0, t_2, ..., t_2m, shape (m + 1, d, d); symmetrized every step

    Raises:
        RiccatiBlowUpError: An entry exceeded ``blowup`` or became non-finite
    """
    curvatures = np.asarray(curvatures, dtype=float)
    if curvatures.shape[0] % 2 != 1:
        raise ValueError(f"Need an odd number of curvature samples, got {curvatures.shape[0]}")
    h = float(grid_step)
    steps = (curvatures.shape[0] - 1) // 2
    out = np.empty((steps + 1,) + curvatures.shape[1:])
    s = 0.5 * (s_init + s_init.T)
    out[0] = s
    for i in range(steps):
        r0, r1, r2 = curvatures[2 * i], curvatures[2 * i + 1], curvatures[2 * i + 2]
        k1 = _riccati_rhs(s, r0)
        k2 = _riccati_rhs(s + h * k1, r1)
        k3 = _riccati_rhs(s + h * k2, r1)
        k4 = _riccati_rhs(s + 2.0 * h * k3, r2)
        s = s + (h / 3.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        s = 0.5 * (s + s.T)
        peak = float(np.max(np.abs(s)))
        if not np.isfinite(peak) or peak > blowup:
            raise RiccatiBlowUpError(
                f"Riccati solution blew up after {i + 1} steps (max entry {peak:.3e}); "
                "positive curvature along the geodesic or step too large"
            )
        out[i + 1] = s
    return out


def initial_shape(kind: InitialCondition, curvature: np.ndarray, scale: float, bound: float) -> np.ndarray:
    """S(-T) for the requested initial-condition kind"""
    d = curvature.shape[0]
    if kind is InitialCondition.LARGE_MULTIPLE:
        return scale * np.sqrt(bound) * np.eye(d)
    # Stable solution of the frozen constant-coefficient equation: sqrt(-R)
    w, q = la.eigh(-0.5 * (curvature + curvature.T))
    return (q * np.sqrt(np.clip(w, 0.0, None))) @ q.T


class _BackwardGeodesic:
    """Grid samples of the geodesic through v, extended backward on demand"""

    def __init__(self, model: MetricModel, v: TangentVector, cfg: RiccatiConfig, dt: float):
        self.model = model
        self.integrator = cfg.integrator().model_copy(update={"step": dt})
        self.dt = dt
        state = initial_state(model, v, adapted=cfg.adapted_frame)
        self.states: List[GeodesicState] = [state]
        self.curvatures: List[np.ndarray] = [self._curvature(state)]

    @staticmethod
    def _curvature(state: GeodesicState) -> np.ndarray:
        return state.model._curvature_operator(state.position, state.velocity, state.frame)

    def extend_to(self, count: int) -> None:
        """Ensure samples exist down to t = -count * dt"""
        missing = count - (len(self.states) - 1)
        if missing <= 0:
            return
        walker = iter_transport(self.model, self.states[-1], -missing * self.dt, self.integrator)
        next(walker)
        for state in walker:
            self.states.append(state)
            self.curvatures.append(self._curvature(state))

    def ascending(self, count: int) -> np.ndarray:
        """Curvature samples from t = -count * dt up to 0"""
        return np.array(self.curvatures[count::-1])


def _grid(horizon: float, step: float) -> tuple[int, float]:
    count = 2 * int(np.ceil(horizon / (2.0 * step) - 1e-9))
    return count, horizon / count


def stable_shape_operator(
    model: MetricModel,
    v: TangentVector,
    T: Optional[float] = None,
    cfg: Optional[RiccatiConfig] = None,
) -> RiccatiRun:
    """Horosphere shape operator at v's base point.

    Args:
        model: Metric model
        v: Unit tangent vector (the horosphere's inward normal direction)
        T: Backward horizon, overriding cfg.horizon
        cfg: Riccati configuration

    Returns:
        The accepted run, carrying its trajectory for residual checks

    Raises:
        NonConvergenceError: Gap above tolerance at the largest horizon allowed
        RiccatiBlowUpError: Solution blew up
        FrameError: Frame degenerated along the geodesic
        ChartDomainError: v's base point is outside the chart
    """
    cfg = cfg or RiccatiConfig()
    horizon = float(cfg.horizon if T is None else T)
    if not horizon > 0:
        raise ValueError(f"Horizon must be > 0, got {horizon}")
    max_horizon = cfg.max_horizon if cfg.max_horizon is not None else horizon
    count, dt = _grid(horizon, cfg.step)
    geodesic = _BackwardGeodesic(model, v, cfg, dt)
    bound = model.curvature_bound

    def solve(samples: int) -> np.ndarray:
        geodesic.extend_to(samples)
        curv = geodesic.ascending(samples)
        s0 = initial_shape(cfg.initial_condition, curv[0], cfg.initial_scale, bound)
        return integrate_riccati(curv, s0, dt, cfg.blowup_threshold)

    doublings = 0
    while True:
        shapes = solve(count)
        gap: Optional[float] = None
        if cfg.check_convergence:
            longer = solve(2 * count)
            gap = float(np.max(np.abs(longer[-1] - shapes[-1])))
            shapes, used = longer, 2 * count
        else:
            used = count
        if gap is None or gap <= cfg.convergence_tol:
            break
        if 2.0 * horizon > max_horizon:
            raise NonConvergenceError(
                f"{model.name}: Riccati gap {gap:.3e} > tol {cfg.convergence_tol:.1e} at horizon {horizon}"
            )
        logger.warning(f"{model.name}: gap {gap:.3e} at T={horizon}; doubling horizon")
        horizon *= 2.0
        count *= 2
        doublings += 1

    states = geodesic.states[used::-2]
    trajectory = RiccatiTrajectory(
        times=np.array([s.t for s in states]),
        shape=shapes,
        curvature=np.array(geodesic.curvatures[used::-2]),
        states=states,
    )
    s0 = ShapeOperator(shapes[-1])
    run = RiccatiRun(
        model=model.name,
        direction=[float(c) for c in v.components],
        base_point=[float(c) for c in v.base.coordinates],
        horizon=horizon,
        step=dt,
        convergence_tol=cfg.convergence_tol,
        initial_condition_kind=cfg.initial_condition,
        matrix=s0.matrix.tolist(),
        eigenvalues=s0.eigenvalues.tolist(),
        convergence_gap=gap,
        horizon_doublings=doublings,
        recenterings=geodesic.states[used].recenterings,
    )
    run._trajectory = trajectory
    logger.debug(f"{model.name}: S(0) eigenvalues {run.eigenvalues}, gap {gap}, T={horizon}")
    return run


def _window_indices(run: RiccatiRun, window: float) -> np.ndarray:
    traj = run.trajectory
    if not window > 0:
        raise WindowError(f"Window must be > 0, got {window}")
    span = -float(traj.times[0])
    if window > span + 1e-12:
        raise WindowError(f"Window {window} exceeds the stored trajectory [-{span:g}, 0]")
    if len(traj.times) < 5:
        raise WindowError(f"Trajectory too short for a five-point stencil ({len(traj.times)} samples)")
    return np.nonzero(traj.times >= -window - 1e-12)[0]


def _stencil(i: int, last: int) -> tuple[np.ndarray, np.ndarray]:
    if 2 <= i <= last - 2:
        return np.arange(-2, 3), _STENCIL
    if i > last - 2:
        return _END_STENCILS[last - i]
    offsets, coeffs = _END_STENCILS[i]
    return -offsets, -coeffs


def _derivative(values: np.ndarray, idx: np.ndarray, spacing: float) -> np.ndarray:
    """Fourth-order first derivative at idx; one-sided stencils at the two outermost samples"""
    last = len(values) - 1
    rows = []
    for i in idx:
        offsets, coeffs = _stencil(int(i), last)
        rows.append(np.tensordot(coeffs, values[i + offsets], axes=1))
    return np.stack(rows) / spacing


def traced_riccati_residual(model: MetricModel, v: TangentVector, run: RiccatiRun, window: float) -> float:
    """max |d/dt tr S + tr S^2 + Ric(c')| over the samples of [-window, 0].

    The derivative is a five-point difference of the stored trace, one-sided
    at the ends so t = 0 is covered. Ric is evaluated directly from the
    curvature tensor, so the check is independent of the right-hand side used
    to integrate S.

    Raises:
        WindowError: window outside the stored trajectory
    """
    _check_run_direction(run, v)
    traj = run.trajectory
    idx = _window_indices(run, window)
    d_trace = _derivative(traj.trace, idx, traj.spacing)
    residuals = []
    for d, i in zip(d_trace, idx):
        s = traj.shape[i]
        ric, _ = traj.states[i].model.ricci_and_scalar(traj.states[i].tangent)
        residuals.append(abs(d + float(np.sum(s * s)) + ric))
    return float(max(residuals))


def riccati_matrix_residual(run: RiccatiRun, window: float) -> float:
    """max over [-window, 0] of the largest entry of S' + S^2 + R, S' by five-point differences"""
    traj = run.trajectory
    idx = _window_indices(run, window)
    ds = _derivative(traj.shape, idx, traj.spacing)
    s = traj.shape[idx]
    residual = ds + np.einsum("tij,tjk->tik", s, s) + traj.curvature[idx]
    return float(np.max(np.abs(residual)))


def trace_derivative(run: RiccatiRun, window: float) -> np.ndarray:
    """d/dt tr S at every sample of [-window, 0]"""
    traj = run.trajectory
    idx = _window_indices(run, window)
    return _derivative(traj.trace, idx, traj.spacing)


def _check_run_direction(run: RiccatiRun, v: TangentVector) -> None:
    if not (
        np.allclose(run.direction, v.components, atol=1e-12)
        and np.allclose(run.base_point, v.base.coordinates, atol=1e-12)
    ):
        raise ValueError("Run was computed for a different tangent vector")


def trajectory_rows(run: RiccatiRun) -> List[Dict[str, float]]:
    """One row per Riccati node: time, chart position, trace S, trace S^2 and principal curvatures"""
    traj = run.trajectory
    rows = []
    for t, state, s in zip(traj.times, traj.states, traj.shape):
        row: Dict[str, float] = {"t": float(t)}
        for i, c in enumerate(state.position):
            row[f"x{i + 1}"] = float(c)
        row["trace_S"] = float(np.trace(s))
        row["trace_S2"] = float(np.sum(s * s))
        for i, lam in enumerate(la.eigvalsh(s)):
            row[f"lambda{i + 1}"] = float(lam)
        rows.append(row)
    return rows
