"""Complex Hyperbolic Plane

CH^2 in the unit-ball chart of C^2, real coordinates (x1, y1, x2, y2) with
z_j = x_j + i y_j, Bergman metric

    g(v, v) = |v|^2 / rho + |<v, z>|^2 / rho^2,   rho = 1 - |z|^2,

normalised to holomorphic sectional curvature -4, so real sectional curvatures
lie in [-4, -1]. The curvature tensor is the closed form built from the complex
structure J (multiplication by i), which is parallel:

    R(X, Y)Z = -( <Y,Z>X - <X,Z>Y + <JY,Z>JX - <JX,Z>JY + 2<X,JY>JZ ).

Chart recentering uses the U(2, 1) action on the projective model.
"""

import logging
from typing import Optional

import numpy as np
from scipy import linalg as la

from horocurv.core.errors import ModelRegistrationError
from horocurv.infrastructure.metrics.provider import ChartMove, CurvatureMode, MetricModel
from horocurv.models.geometry import Point

logger = logging.getLogger(__name__)

HOLOMORPHIC_CURVATURE = -4.0

_RECENTER_RADIUS2 = 0.5
_ETA = np.diag([1.0, 1.0, -1.0])

# Complex structure on (x1, y1, x2, y2): J d/dx = d/dy, J d/dy = -d/dx
COMPLEX_STRUCTURE = np.array(
    [
        [0.0, -1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
    ]
)


def _to_complex(x: np.ndarray) -> np.ndarray:
    return np.array([x[0] + 1j * x[1], x[2] + 1j * x[3]])


def _to_real(z: np.ndarray) -> np.ndarray:
    return np.array([z[0].real, z[0].imag, z[1].real, z[1].imag])


def _realify(d: np.ndarray) -> np.ndarray:
    """Real 4x4 matrix of a complex-linear map of C^2"""
    out = np.empty((4, 4))
    for j in range(2):
        for k in range(2):
            a, b = d[j, k].real, d[j, k].imag
            out[2 * j: 2 * j + 2, 2 * k: 2 * k + 2] = [[a, -b], [b, a]]
    return out


def _hermitian(u: np.ndarray, w: np.ndarray) -> complex:
    """Signature (2, 1) form <u, w> = u1 w1* + u2 w2* - u3 w3*"""
    return complex(np.conj(w) @ _ETA @ u)


def boost_to_origin(z0: np.ndarray) -> np.ndarray:
    """A U(2, 1) matrix whose projective action sends z0 to the origin"""
    rho = 1.0 - float(np.vdot(z0, z0).real)
    x0 = np.append(z0, 1.0) / np.sqrt(rho)
    basis = []
    for e in np.eye(3, dtype=complex)[:2]:
        u = e + _hermitian(e, x0) * x0
        for f in basis:
            u = u - _hermitian(u, f) * f
        basis.append(u / np.sqrt(_hermitian(u, u).real))
    b = np.column_stack(basis + [x0])
    return _ETA @ b.conj().T @ _ETA


class ComplexHyperbolicPlane(MetricModel):
    """CH^2 with holomorphic sectional curvature -4"""

    name = "complex-hyperbolic"

    def __init__(self, curvature_mode: CurvatureMode = CurvatureMode.CLOSED_FORM, dimension: int = 4):
        if dimension != 4:
            raise ModelRegistrationError(
                f"complex-hyperbolic: only the complex plane (real dimension 4) is shipped, got {dimension}"
            )
        super().__init__(4, {"holomorphic_curvature": HOLOMORPHIC_CURVATURE}, curvature_mode)
        self.j = COMPLEX_STRUCTURE

    def _parts(self, x: np.ndarray) -> tuple[float, np.ndarray]:
        return 1.0 - float(x @ x), self.j @ x

    def _metric(self, x: np.ndarray) -> np.ndarray:
        rho, b = self._parts(x)
        return np.eye(4) / rho + (np.outer(x, x) + np.outer(b, b)) / rho**2

    def _metric_derivative(self, x: np.ndarray) -> Optional[np.ndarray]:
        rho, b = self._parts(x)
        eye = np.eye(4)
        aa_bb = np.outer(x, x) + np.outer(b, b)
        # d_k(a_i a_j + b_i b_j) with d_k b_i = J_ik
        d_quad = (
            np.einsum("ik,j->kij", eye, x)
            + np.einsum("i,jk->kij", x, eye)
            + np.einsum("ik,j->kij", self.j, b)
            + np.einsum("i,jk->kij", b, self.j)
        )
        return (
            2.0 * np.einsum("k,ij->kij", x, eye) / rho**2
            + 4.0 * np.einsum("k,ij->kij", x, aa_bb) / rho**3
            + d_quad / rho**2
        )

    def _curvature_closed(self, x: np.ndarray) -> Optional[np.ndarray]:
        g = self._metric(x)
        omega = self.j.T @ g  # omega[a, b] = <J d_a, d_b>
        return -(
            np.einsum("bc,ad->abcd", g, g)
            - np.einsum("ac,bd->abcd", g, g)
            + np.einsum("bc,ad->abcd", omega, omega)
            - np.einsum("ac,bd->abcd", omega, omega)
            + 2.0 * np.einsum("ba,cd->abcd", omega, omega)
        )

    def boundary_distance(self, x: np.ndarray) -> float:
        return 1.0 - float(np.linalg.norm(x))

    def reference_point(self) -> Point:
        return Point(np.zeros(4))

    def sample_points(self, rng: np.random.Generator, count: int) -> np.ndarray:
        directions = rng.standard_normal((count, 4))
        directions /= np.linalg.norm(directions, axis=1)[:, None]
        return directions * rng.uniform(0.0, 0.7, size=count)[:, None]

    def recenter(self, x: np.ndarray) -> Optional[ChartMove]:
        if float(x @ x) <= _RECENTER_RADIUS2:
            return None
        z0 = _to_complex(x)
        boost = boost_to_origin(z0)
        image = boost @ np.append(z0, 1.0)
        # At z0 the image has vanishing C^2 part, so d(W'/W3) = A[:2, :2] dz / W3
        jac = _realify(boost[:2, :2] / image[2])
        return ChartMove(model=self, position=np.zeros(4), jacobian=jac)

    def adapted_first_vector(self, x: np.ndarray, v: np.ndarray) -> Optional[np.ndarray]:
        return self.j @ v

    @property
    def locally_symmetric(self) -> bool:
        return True

    @property
    def curvature_bound(self) -> float:
        return -HOLOMORPHIC_CURVATURE

    def expected_shape_spectrum(self) -> Optional[np.ndarray]:
        return np.array([1.0, 1.0, 2.0])

    def expected_horosphere_scalar(self) -> Optional[float]:
        return -2.0

    def expected_sectional_spread(self) -> Optional[float]:
        return 3.0

    def apply_boost(self, boost: np.ndarray, x: np.ndarray) -> np.ndarray:
        """Projective action of a U(2, 1) matrix on a chart point"""
        image = boost @ np.append(_to_complex(x), 1.0)
        return _to_real(image[:2] / image[2])

    def is_unitary_21(self, boost: np.ndarray, tol: float = 1e-10) -> bool:
        return bool(la.norm(boost.conj().T @ _ETA @ boost - _ETA) < tol)
