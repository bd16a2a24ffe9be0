"""Real Hyperbolic Half-Space

Upper half-space chart {x_n > 0} with g = |dx|^2 / (k^2 x_n^2), sectional
curvature -k^2. The conformal machinery here (g = e^{2f} |dx|^2) is shared by
the perturbed family.
"""

import logging
from abc import abstractmethod
from typing import Optional

import numpy as np

from horocurv.core.errors import ModelRegistrationError
from horocurv.infrastructure.metrics.provider import ChartMove, CurvatureMode, MetricModel
from horocurv.models.geometry import Point

logger = logging.getLogger(__name__)

# Recenter once the point is about two hyperbolic units from the reference point
_RECENTER_LOW = float(np.exp(-2.0))
_RECENTER_HIGH = float(np.exp(2.0))
_RECENTER_SHEAR = 4.0


class ConformalHalfSpace(MetricModel):
    """Half-space chart metric g = e^{2f(x)} |dx|^2.

    Subclasses supply f with its flat gradient and Hessian via ``_log_factor``.
    """

    @abstractmethod
    def _log_factor(self, x: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
        """f(x), its flat gradient and its flat Hessian"""

    def _metric(self, x: np.ndarray) -> np.ndarray:
        f, _, _ = self._log_factor(x)
        return np.exp(2.0 * f) * np.eye(self.dimension)

    def boundary_distance(self, x: np.ndarray) -> float:
        return float(x[-1])

    def reference_point(self) -> Point:
        x = np.zeros(self.dimension)
        x[-1] = 1.0
        return Point(x)

    def _metric_derivative(self, x: np.ndarray) -> Optional[np.ndarray]:
        f, df, _ = self._log_factor(x)
        return 2.0 * np.exp(2.0 * f) * np.einsum("m,ij->mij", df, np.eye(self.dimension))

    def connection(self, x: np.ndarray, u: np.ndarray, rows: np.ndarray) -> np.ndarray:
        if self.curvature_mode is not CurvatureMode.CLOSED_FORM:
            return super().connection(x, u, rows)
        # Gamma(u, w) = (df.w) u + (df.u) w - (u.w) grad f, all flat
        _, a, _ = self._log_factor(x)
        return (
            np.outer(rows @ a, u)
            + rows * float(a @ u)
            - np.outer(rows @ u, a)
        )

    def _curvature_closed(self, x: np.ndarray) -> Optional[np.ndarray]:
        # rm = -e^{2f} (B kn delta), B = Hess f - df df + |df|^2/2 delta
        f, df, hess = self._log_factor(x)
        n = self.dimension
        eye = np.eye(n)
        b = hess - np.outer(df, df) + 0.5 * float(df @ df) * eye
        kn = (
            np.einsum("ad,bc->abcd", b, eye)
            + np.einsum("bc,ad->abcd", b, eye)
            - np.einsum("ac,bd->abcd", b, eye)
            - np.einsum("bd,ac->abcd", b, eye)
        )
        return -np.exp(2.0 * f) * kn

    def sample_points(self, rng: np.random.Generator, count: int) -> np.ndarray:
        pts = np.empty((count, self.dimension))
        pts[:, :-1] = rng.uniform(-1.0, 1.0, size=(count, self.dimension - 1))
        pts[:, -1] = np.exp(rng.uniform(-1.0, 1.0, size=count))
        return pts

    def _rebased(self, shift: np.ndarray, scale: float) -> "ConformalHalfSpace":
        """The same geometry in the chart y = (x - (shift, 0)) / scale"""
        return self

    def recenter(self, x: np.ndarray) -> Optional[ChartMove]:
        height = float(x[-1])
        shear = float(np.linalg.norm(x[:-1])) / height
        if _RECENTER_LOW <= height <= _RECENTER_HIGH and shear <= _RECENTER_SHEAR:
            return None
        shift = np.array(x[:-1], dtype=float)
        return ChartMove(
            model=self._rebased(shift, height),
            position=self.reference_point().coordinates.copy(),
            jacobian=np.eye(self.dimension) / height,
        )


class HyperbolicSpace(ConformalHalfSpace):
    """Real hyperbolic space H^n of constant curvature -k^2"""

    name = "hyperbolic"

    def __init__(
        self,
        dimension: int = 3,
        k: float = 1.0,
        curvature_mode: CurvatureMode = CurvatureMode.CLOSED_FORM,
    ):
        if not k > 0:
            raise ModelRegistrationError(f"hyperbolic: curvature scale k must be > 0, got {k}")
        super().__init__(dimension, {"k": float(k)}, curvature_mode)
        self.k = float(k)

    def _log_factor(self, x: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
        n = self.dimension
        height = float(x[-1])
        df = np.zeros(n)
        df[-1] = -1.0 / height
        hess = np.zeros((n, n))
        hess[-1, -1] = 1.0 / height**2
        return -np.log(self.k * height), df, hess

    def _curvature_closed(self, x: np.ndarray) -> Optional[np.ndarray]:
        g = self._metric(x)
        return -self.k**2 * (np.einsum("bc,ad->abcd", g, g) - np.einsum("ac,bd->abcd", g, g))

    def _curvature_operator(self, x: np.ndarray, v: np.ndarray, frame: np.ndarray) -> np.ndarray:
        if self.curvature_mode is not CurvatureMode.CLOSED_FORM:
            return super()._curvature_operator(x, v, frame)
        g = self._metric(x)
        gv = frame @ g @ v
        op = -self.k**2 * (float(v @ g @ v) * (frame @ g @ frame.T) - np.outer(gv, gv))
        return 0.5 * (op + op.T)

    @property
    def locally_symmetric(self) -> bool:
        return True

    @property
    def curvature_bound(self) -> float:
        return self.k**2

    def expected_shape_spectrum(self) -> Optional[np.ndarray]:
        return np.full(self.dimension - 1, self.k)

    def expected_horosphere_scalar(self) -> Optional[float]:
        return 0.0

    def expected_sectional_spread(self) -> Optional[float]:
        return 0.0
