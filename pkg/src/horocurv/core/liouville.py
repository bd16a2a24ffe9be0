"""
Liouville Harness

Monte-Carlo averages over the unit sphere of a tangent space (the fiber factor
of the Liouville measure), and the integral identities that reduce to such
averages on locally symmetric models.

Samples come from counter-based Philox streams: stream i of seed s is fixed
by (s, i) alone, streams have a fixed size, and chunk results are concatenated
in stream order before reduction. Any worker count therefore gives the same
bits.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field
from scipy import linalg as la

from horocurv.config.settings import settings
from horocurv.core.errors import CapabilityError
from horocurv.core.riccati import RiccatiRun, stable_shape_operator, trace_derivative
from horocurv.infrastructure.metrics.provider import MetricModel
from horocurv.models.config import RiccatiConfig
from horocurv.models.geometry import Point, TangentVector

logger = logging.getLogger(__name__)

STREAM_SIZE = 8192
MIN_SPHERE_COUNT = 100


def stream_generator(seed: int, stream: int) -> np.random.Generator:
    """Philox generator for (seed, stream)"""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(stream,))))


@dataclass(frozen=True)
class SphereSampler:
    """Uniform unit vectors at ``base`` in the model metric"""

    rng_seed: int
    n: int
    base: Point
    count: int
    stream_size: int = STREAM_SIZE

    def streams(self) -> List[Tuple[int, int]]:
        """(stream index, sample count) pairs covering ``count``"""
        full, rest = divmod(self.count, self.stream_size)
        sizes = [self.stream_size] * full + ([rest] if rest else [])
        return list(enumerate(sizes))

    def draw_stream(self, model: MetricModel, stream: int, size: int) -> np.ndarray:
        x = model.check_point(self.base)
        return model.unit_directions(x, stream_generator(self.rng_seed, stream), size)

    def draw(self, model: MetricModel, workers: Optional[int] = None) -> np.ndarray:
        """All samples, shape (count, n), in stream order"""
        if model.dimension != self.n:
            raise ValueError(f"Sampler dimension {self.n} does not match model dimension {model.dimension}")
        chunks = _ordered_map(lambda job: self.draw_stream(model, *job), self.streams(), workers)
        return np.concatenate(chunks) if chunks else np.empty((0, self.n))


def _ordered_map(func, items, workers: Optional[int]) -> list:
    workers = workers or settings.workers
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def _mean_and_error(values: np.ndarray) -> Tuple[float, float]:
    mean = float(np.mean(values))
    if values.size < 2:
        return mean, 0.0
    return mean, float(np.std(values, ddof=1) / np.sqrt(values.size))


def sphere_average(
    model: MetricModel,
    base: Point,
    f: Callable[[TangentVector], float],
    count: int,
    seed: int,
    workers: Optional[int] = None,
) -> Tuple[float, float]:
    """Monte-Carlo mean and standard error of f over uniform unit vectors at base.

    Args:
        model: Metric model
        base: Base point
        f: Scalar function of a unit tangent vector
        count: Number of samples (>= 100)
        seed: Stream seed
        workers: Concurrent streams (defaults to settings.workers)

    Returns:
        (mean, std_error)
    """
    if count < MIN_SPHERE_COUNT:
        raise ValueError(f"count must be >= {MIN_SPHERE_COUNT}, got {count}")
    sampler = SphereSampler(rng_seed=seed, n=model.dimension, base=base, count=count)

    def evaluate(job: Tuple[int, int]) -> np.ndarray:
        vectors = sampler.draw_stream(model, *job)
        return np.array([f(TangentVector(base, u, unit=True)) for u in vectors], dtype=float)

    values = np.concatenate(_ordered_map(evaluate, sampler.streams(), workers))
    return _mean_and_error(values)


def ricci_function(model: MetricModel, base: Point) -> Callable[[TangentVector], float]:
    """v -> Ric(v, v) at base, with the Ricci form evaluated once"""
    ric = model.ricci_form(base)
    return lambda v: float(v.components @ ric @ v.components)


class FubiniResult(BaseModel):
    """Sphere average of Ric against Scal / n"""

    mean: float
    std_error: float = Field(..., ge=0)
    expected: float = Field(..., description="Scal / n")
    count: int
    seed: int

    @property
    def deviation(self) -> float:
        return abs(self.mean - self.expected)

    def within(self, sigmas: float = 3.0) -> bool:
        return self.deviation <= sigmas * self.std_error + 1e-9 * max(1.0, abs(self.expected))


def fubini_check(
    model: MetricModel, base: Point, count: int, seed: int, workers: Optional[int] = None
) -> FubiniResult:
    """Average Ric over the unit sphere at base; should equal Scal / n"""
    x = model.check_point(base)
    ginv = la.inv(model._metric(x))
    scal = float(np.einsum("bc,bc->", ginv, model.ricci_form(base)))
    mean, error = sphere_average(model, base, ricci_function(model, base), count, seed, workers)
    return FubiniResult(mean=mean, std_error=error, expected=scal / model.dimension, count=count, seed=seed)


class IntegratedIdentityResult(BaseModel):
    """Both sides of  mean_v tr(S^2)(v) = -(1/n) Scal"""

    mean_trace_s2: float
    minus_scal_over_n: float
    std_error: float = Field(..., ge=0)
    count: int
    seed: int
    residual: float = Field(..., ge=0)


def verify_integrated_identity(
    model: MetricModel,
    base: Point,
    count: int,
    seed: int,
    riccati_cfg: Optional[RiccatiConfig] = None,
    workers: Optional[int] = None,
) -> IntegratedIdentityResult:
    """Compare the sphere average of tr(S^2) with -Scal/n at base.

    Every sampled direction costs one stable Riccati extraction, so ``count``
    is not bound by the sphere_average floor.

    Raises:
        CapabilityError: The model is not locally symmetric
    """
    if not model.locally_symmetric:
        raise CapabilityError(
            f"{model.name}: integrated identity needs a closed manifold; only checked on locally "
            "symmetric models where the integrands are constant"
        )
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    cfg = riccati_cfg or RiccatiConfig()
    sampler = SphereSampler(rng_seed=seed, n=model.dimension, base=base, count=count)
    vectors = sampler.draw(model, workers)

    def trace_s2(u: np.ndarray) -> float:
        run = stable_shape_operator(model, TangentVector(base, u, unit=True), cfg=cfg)
        s = np.array(run.matrix)
        return float(np.sum(s * s))

    values = np.array(_ordered_map(trace_s2, list(vectors), workers))
    mean, error = _mean_and_error(values)

    x = model.check_point(base)
    ginv = la.inv(model._metric(x))
    scal = float(np.einsum("bc,bc->", ginv, model.ricci_form(base)))
    target = -scal / model.dimension
    logger.info(f"{model.name}: mean tr(S^2) = {mean:.8g} vs -Scal/n = {target:.8g} over {count} directions")
    return IntegratedIdentityResult(
        mean_trace_s2=mean,
        minus_scal_over_n=target,
        std_error=error,
        count=count,
        seed=seed,
        residual=abs(mean - target),
    )


def flow_derivative_check(model: MetricModel, v: TangentVector, run: RiccatiRun, window: float = 2.0) -> float:
    """max |d/dt tr S| over [-window, 0] of a stored run.

    Vanishes on locally symmetric models; a diagnostic elsewhere.
    """
    derivative = trace_derivative(run, window)
    value = float(np.max(np.abs(derivative)))
    if not model.locally_symmetric:
        logger.debug(f"{model.name}: flow derivative {value:.3e} (diagnostic only)")
    return value
