"""
Geodesic Transport

Fixed-step integration of unit-speed geodesics together with a parallel
orthonormal frame of the velocity's orthogonal complement. The state is the
chart position x and the matrix V whose first row is the velocity and whose
remaining rows are the frame; geodesic and parallel-transport equations share
one connection evaluation per stage:

    x' = v,    V' = -Gamma(v, V).
"""

import logging
from typing import Iterator, List, Optional

import numpy as np

from horocurv.core.errors import ChartDomainError, FrameError
from horocurv.infrastructure.metrics.provider import MetricModel
from horocurv.models.config import IntegrationMethod, IntegratorConfig
from horocurv.models.geometry import GeodesicState, TangentVector

logger = logging.getLogger(__name__)

# Axes whose normalized g-inner product with v exceeds this are skipped when seeding
SEED_PARALLEL_THRESHOLD = 0.9
DEGENERACY_THRESHOLD = 1e-8

_TABLEAUS = {
    IntegrationMethod.RK4: (
        ((), (0.5,), (0.0, 0.5), (0.0, 0.0, 1.0)),
        (1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0),
    ),
    IntegrationMethod.RK38: (
        ((), (1.0 / 3.0,), (-1.0 / 3.0, 1.0), (1.0, -1.0, 1.0)),
        (0.125, 0.375, 0.375, 0.125),
    ),
}


def _orthonormalize(g: np.ndarray, candidates, basis: List[np.ndarray], want: int) -> List[np.ndarray]:
    for c in candidates:
        if len(basis) >= want:
            break
        w = np.array(c, dtype=float)
        for b in basis:
            w = w - float(b @ g @ w) * b
        norm2 = float(w @ g @ w)
        if norm2 <= DEGENERACY_THRESHOLD**2:
            continue
        basis.append(w / np.sqrt(norm2))
    return basis


def seed_frame(model: MetricModel, v: TangentVector, adapted: bool = False) -> np.ndarray:
    """Complete the unit vector v to a g-orthonormal basis; returns the n-1 complement rows.

    Chart axes nearly parallel to v are skipped. With ``adapted`` the model's
    preferred first vector (Jv on the complex hyperbolic plane) leads.
    """
    x = v.base.coordinates
    g = model._metric(x)
    n = model.dimension
    vel = np.asarray(v.components, dtype=float)
    vel = vel / np.sqrt(float(vel @ g @ vel))

    candidates = []
    if adapted:
        first = model.adapted_first_vector(x, vel)
        if first is not None:
            candidates.append(first)
    for axis in np.eye(n):
        cosine = abs(float(axis @ g @ vel)) / np.sqrt(float(axis @ g @ axis))
        if cosine <= SEED_PARALLEL_THRESHOLD:
            candidates.append(axis)
    # Near-parallel axes are only a fallback
    candidates.extend(np.eye(n))

    basis = _orthonormalize(g, candidates, [vel], n)
    if len(basis) < n:
        raise FrameError(f"Could not complete {vel.tolist()} to a basis")
    return np.array(basis[1:])


def renormalize(g: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Unit velocity, then modified Gram-Schmidt of the frame against it.

    Raises:
        FrameError: A frame vector lost more than all but 1e-8 of its length
    """
    out = np.array(rows, dtype=float)
    for i in range(out.shape[0]):
        w = out[i]
        for j in range(i):
            w = w - float(out[j] @ g @ w) * out[j]
        norm2 = float(w @ g @ w)
        if norm2 <= DEGENERACY_THRESHOLD**2:
            raise FrameError(f"Frame degenerated at row {i} (squared norm {norm2:.3e})")
        out[i] = w / np.sqrt(norm2)
    return out


def initial_state(
    model: MetricModel,
    v: TangentVector,
    frame: Optional[np.ndarray] = None,
    adapted: bool = False,
    t: float = 0.0,
) -> GeodesicState:
    """Validated state at time t for the unit vector v"""
    x = model.check_point(v.base)
    if frame is None:
        frame = seed_frame(model, v, adapted=adapted)
    frame = np.asarray(frame, dtype=float)
    model.check_frame(x, np.asarray(v.components, dtype=float), frame)
    return GeodesicState(
        t=float(t),
        position=np.array(x, dtype=float),
        velocity=np.array(v.components, dtype=float),
        frame=frame.copy(),
        model=model,
    )


def _rk_step(model: MetricModel, x: np.ndarray, rows: np.ndarray, dt: float, method: IntegrationMethod):
    a_rows, weights = _TABLEAUS[method]
    kx: List[np.ndarray] = []
    kv: List[np.ndarray] = []
    for coeffs in a_rows:
        xs = x.copy()
        vs = rows.copy()
        for a, dx, dv in zip(coeffs, kx, kv):
            if a != 0.0:
                xs += (a * dt) * dx
                vs += (a * dt) * dv
        kx.append(vs[0])
        kv.append(-model.connection(xs, vs[0], vs))
    x_new = x + dt * sum(w * k for w, k in zip(weights, kx))
    rows_new = rows + dt * sum(w * k for w, k in zip(weights, kv))
    return x_new, rows_new


def geodesic_step(
    model: MetricModel,
    state: GeodesicState,
    cfg: IntegratorConfig,
    dt: Optional[float] = None,
) -> GeodesicState:
    """Advance the state by one fixed step (dt defaults to cfg.step; negative dt runs backward).

    Raises:
        ChartDomainError: The step left the chart domain
        FrameError: Renormalization found a degenerate frame
    """
    dt = cfg.step if dt is None else float(dt)
    if dt == 0.0:
        return state
    chart = state.model
    rows = np.vstack([state.velocity, state.frame])
    x_new, rows_new = _rk_step(chart, state.position, rows, dt, cfg.method)

    if not np.all(np.isfinite(x_new)) or not chart.in_domain(x_new):
        raise ChartDomainError(
            f"{model.name}: geodesic left the chart at t={state.t + dt:.6g} (position {x_new.tolist()})"
        )

    steps = state.steps + 1
    if steps % cfg.renormalize_every == 0:
        rows_new = renormalize(chart._metric(x_new), rows_new)

    recenterings = state.recenterings
    if cfg.recenter:
        move = chart.recenter(x_new)
        if move is not None:
            recenterings += 1
            logger.debug(f"Recentering {model.name} chart at t={state.t + dt:.6g}")
            chart = move.model
            x_new = move.position
            rows_new = move.push(rows_new)

    return GeodesicState(
        t=state.t + dt,
        position=x_new,
        velocity=rows_new[0],
        frame=rows_new[1:],
        model=chart,
        steps=steps,
        recenterings=recenterings,
    )


def iter_transport(
    model: MetricModel,
    state: GeodesicState,
    horizon: float,
    cfg: IntegratorConfig,
) -> Iterator[GeodesicState]:
    """Yield the state and every subsequent step up to t + horizon on a uniform grid"""
    yield state
    count = int(round(abs(horizon) / cfg.step))
    if count == 0:
        return
    dt = horizon / count
    for _ in range(count):
        state = geodesic_step(model, state, cfg, dt=dt)
        yield state


def transport_frame(
    model: MetricModel,
    initial: TangentVector,
    seed: Optional[np.ndarray],
    horizon: float,
    cfg: IntegratorConfig,
    adapted: bool = False,
) -> List[GeodesicState]:
    """Dense trajectory of the geodesic through ``initial`` with its parallel frame.

    Args:
        model: Metric model
        initial: Unit tangent vector at t = 0
        seed: Orthonormal frame of initial's complement (None seeds one)
        horizon: Flow time to integrate; negative integrates backward
        cfg: Integrator configuration
        adapted: Seed with the model's adapted first vector when seed is None

    Returns:
        Every state on the grid, starting with the initial one
    """
    state = initial_state(model, initial, seed, adapted=adapted)
    trajectory = list(iter_transport(model, state, horizon, cfg))
    logger.debug(f"Transported frame over t={horizon} in {len(trajectory) - 1} steps on {model.name}")
    return trajectory


def frame_error(state: GeodesicState) -> float:
    """Max deviation of [velocity; frame] from a g-orthonormal system"""
    rows = np.vstack([state.velocity, state.frame])
    g = state.model._metric(state.position)
    return float(np.max(np.abs(rows @ g @ rows.T - np.eye(rows.shape[0]))))
