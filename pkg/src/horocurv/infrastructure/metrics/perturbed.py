"""Conformally Perturbed Half-Space

g = e^{2 eps phi} g_hyp on the upper half-space, with phi a fixed smooth bump
supported in a Euclidean ball. Outside the ball the metric is exactly real
hyperbolic; inside it the curvature varies from point to point and plane to
plane. The admissible amplitude range is not fixed a priori: registration
rejects any parameter set for which a sampled sectional curvature is >= 0.
"""

import logging
from typing import Optional

import numpy as np

from horocurv.core.errors import ModelRegistrationError
from horocurv.infrastructure.metrics.hyperbolic import ConformalHalfSpace
from horocurv.infrastructure.metrics.provider import CurvatureMode
from horocurv.models.geometry import Point

logger = logging.getLogger(__name__)

# Below this value of 1 - q the bump and its derivatives are under 1e-40
_BUMP_CUTOFF = 1e-2


def bump(q: float, height: float) -> tuple[float, float, float]:
    """Profile height * exp(1 - 1/(1 - q)) and its first two q-derivatives (zero for q >= 1)"""
    u = 1.0 - q
    if u <= _BUMP_CUTOFF:
        return 0.0, 0.0, 0.0
    phi = height * np.exp(1.0 - 1.0 / u)
    return phi, -phi / u**2, phi * (1.0 - 2.0 * u) / u**4


class PerturbedHyperbolic(ConformalHalfSpace):
    """Half-space H^n metric multiplied by the conformal factor e^{2 eps phi}"""

    name = "perturbed"

    def __init__(
        self,
        dimension: int = 3,
        amplitude: float = 0.05,
        k: float = 1.0,
        bump_radius: float = 0.5,
        bump_height: float = 0.1,
        bump_center: Optional[np.ndarray] = None,
        curvature_mode: CurvatureMode = CurvatureMode.CLOSED_FORM,
    ):
        if not k > 0:
            raise ModelRegistrationError(f"perturbed: curvature scale k must be > 0, got {k}")
        if not bump_radius > 0:
            raise ModelRegistrationError(f"perturbed: bump radius must be > 0, got {bump_radius}")
        center = np.zeros(dimension)
        center[-1] = 1.0
        if bump_center is not None:
            center = np.array(bump_center, dtype=float)
        if center[-1] - bump_radius <= 0.0:
            raise ModelRegistrationError("perturbed: bump support must stay inside the half-space")
        super().__init__(
            dimension,
            {
                "amplitude": float(amplitude),
                "k": float(k),
                "bump_radius": float(bump_radius),
                "bump_height": float(bump_height),
            },
            curvature_mode,
        )
        self.amplitude = float(amplitude)
        self.k = float(k)
        self.bump_radius = float(bump_radius)
        self.bump_height = float(bump_height)
        self.bump_center = center
        self._bound = self.k**2

    def bump_value(self, x: np.ndarray) -> float:
        """phi(x), evaluated independently of the metric machinery"""
        q = float(np.sum((x - self.bump_center) ** 2)) / self.bump_radius**2
        return bump(q, self.bump_height)[0]

    def conformal_factor(self, x: np.ndarray) -> float:
        """e^{2 eps phi(x)}"""
        return float(np.exp(2.0 * self.amplitude * self.bump_value(x)))

    def _log_factor(self, x: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
        n = self.dimension
        height = float(x[-1])
        offset = x - self.bump_center
        rho2 = self.bump_radius**2
        phi, phi_q, phi_qq = bump(float(offset @ offset) / rho2, self.bump_height)
        grad_q = 2.0 * offset / rho2
        grad_phi = phi_q * grad_q
        hess_phi = phi_qq * np.outer(grad_q, grad_q) + phi_q * (2.0 / rho2) * np.eye(n)

        df = self.amplitude * grad_phi
        df[-1] -= 1.0 / height
        hess = self.amplitude * hess_phi
        hess[-1, -1] += 1.0 / height**2
        return self.amplitude * phi - np.log(self.k * height), df, hess

    def in_support(self, x: np.ndarray) -> bool:
        q = float(np.sum((x - self.bump_center) ** 2)) / self.bump_radius**2
        return q < 1.0

    def base_point(self) -> Point:
        # Off-centre: at the centre the Hessian of phi is isotropic
        x = self.bump_center.copy()
        x[0] += 0.3 * self.bump_radius
        x[-1] += 0.1 * self.bump_radius
        return Point(x)

    def sample_points(self, rng: np.random.Generator, count: int) -> np.ndarray:
        inside = max(1, (3 * count) // 4)
        directions = rng.standard_normal((inside, self.dimension))
        directions /= np.linalg.norm(directions, axis=1)[:, None]
        radii = self.bump_radius * rng.uniform(0.0, 1.0, size=inside) ** (1.0 / self.dimension)
        pts = self.bump_center + directions * radii[:, None]
        return np.vstack([pts, super().sample_points(rng, count - inside)])

    def _rebased(self, shift: np.ndarray, scale: float) -> "PerturbedHyperbolic":
        clone = object.__new__(PerturbedHyperbolic)
        clone.__dict__.update(self.__dict__)
        center = self.bump_center.copy()
        center[:-1] -= shift
        clone.bump_center = center / scale
        clone.bump_radius = self.bump_radius / scale
        return clone

    def register_bound(self, largest: float) -> None:
        self._bound = max(self.k**2, float(largest))

    @property
    def locally_symmetric(self) -> bool:
        return self.amplitude == 0.0

    @property
    def curvature_bound(self) -> float:
        return self._bound

    def expected_shape_spectrum(self) -> Optional[np.ndarray]:
        if self.amplitude == 0.0:
            return np.full(self.dimension - 1, self.k)
        return None

    def expected_horosphere_scalar(self) -> Optional[float]:
        return 0.0 if self.amplitude == 0.0 else None

    def expected_sectional_spread(self) -> Optional[float]:
        return 0.0 if self.amplitude == 0.0 else None
