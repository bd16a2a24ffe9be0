"""Metric Model Interface

Abstract base class defining the contract for coordinate-chart Riemannian
metrics. Concrete models supply the metric (and, where they have one, closed
forms for its derivative and curvature tensor); everything else - Christoffel
symbols, the curvature operator, Ricci and scalar curvature, sectional
curvatures and the registration checks - is derived here.

Index conventions:
    dg[m, i, j]      = d_m g_ij
    gamma[i, j, k]   = Gamma^i_jk
    rm[a, b, c, d]   = <R(d_a, d_b) d_c, d_d>, with R(X, Y) = [nabla_X, nabla_Y] - nabla_[X, Y]
so that the sectional curvature of span(u, w) is rm(u, w, w, u) / |u ^ w|^2.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence

import numpy as np
from scipy import linalg as la

from horocurv.config.settings import settings
from horocurv.core.errors import ChartDomainError, FrameError, ModelRegistrationError
from horocurv.models.config import CurvatureMode
from horocurv.models.geometry import Point, TangentVector

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChartMove:
    """An isometric change of chart: the same geometry seen from a recentered chart"""

    model: "MetricModel"
    position: np.ndarray
    jacobian: np.ndarray

    def push(self, vectors: np.ndarray) -> np.ndarray:
        """Push row vectors forward through the chart change"""
        return vectors @ self.jacobian.T


def _coords(p) -> np.ndarray:
    if isinstance(p, Point):
        return p.coordinates
    return np.asarray(p, dtype=float)


def christoffel_from_derivative(g: np.ndarray, dg: np.ndarray) -> np.ndarray:
    """Levi-Civita symbols Gamma^i_jk = 1/2 g^il (d_j g_lk + d_k g_lj - d_l g_jk)"""
    ginv = la.inv(g)
    lowered = dg.transpose(1, 0, 2) + dg.transpose(1, 2, 0) - dg
    gamma = 0.5 * np.einsum("il,ljk->ijk", ginv, lowered)
    return 0.5 * (gamma + gamma.transpose(0, 2, 1))


def bianchi_residual(rm: np.ndarray) -> float:
    """Largest entry of the cyclic sum rm_abcd + rm_bcad + rm_cabd"""
    cyclic = rm + np.einsum("bcad->abcd", rm) + np.einsum("cabd->abcd", rm)
    return float(np.max(np.abs(cyclic)))


def lower_riemann(g: np.ndarray, gamma: np.ndarray, dgamma: np.ndarray) -> np.ndarray:
    """Fully covariant curvature tensor from Gamma and dgamma[m, i, j, k] = d_m Gamma^i_jk"""
    # R^i_jkl = d_k Gamma^i_lj - d_l Gamma^i_kj + Gamma^i_km Gamma^m_lj - Gamma^i_lm Gamma^m_kj
    riem = (
        np.einsum("kilj->ijkl", dgamma)
        - np.einsum("likj->ijkl", dgamma)
        + np.einsum("ikm,mlj->ijkl", gamma, gamma)
        - np.einsum("ilm,mkj->ijkl", gamma, gamma)
    )
    # rm[a, b, c, d] = g_di R^i_cab
    return np.einsum("di,icab->abcd", g, riem)


class MetricModel(ABC):
    """Abstract coordinate-chart Riemannian metric of negative sectional curvature.

    Instances are immutable after construction and safe to share between
    threads. ``validate()`` runs the registration checks; the factory calls it
    before handing a model out.
    """

    name: str = "abstract"

    def __init__(
        self,
        dimension: int,
        parameters: Optional[Dict[str, Any]] = None,
        curvature_mode: CurvatureMode = CurvatureMode.CLOSED_FORM,
    ):
        if dimension < 2:
            raise ModelRegistrationError(f"{self.name}: dimension must be >= 2, got {dimension}")
        self.dimension = int(dimension)
        self.parameters: Dict[str, Any] = dict(parameters or {})
        self.curvature_mode = CurvatureMode(curvature_mode)

    # ------------------------------------------------------------------
    # Model-specific pieces
    # ------------------------------------------------------------------

    @abstractmethod
    def _metric(self, x: np.ndarray) -> np.ndarray:
        """Metric matrix at chart coordinates x (no domain check)"""

    @abstractmethod
    def boundary_distance(self, x: np.ndarray) -> float:
        """Signed distance to the chart boundary in chart units (positive inside)"""

    @abstractmethod
    def reference_point(self) -> Point:
        """Canonical base point for checks and recentering"""

    def base_point(self) -> Point:
        """Default base point of verification runs"""
        return self.reference_point()

    @abstractmethod
    def sample_points(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """Chart points used by the registration checks, shape (count, n)"""

    def _metric_derivative(self, x: np.ndarray) -> Optional[np.ndarray]:
        """Closed-form dg[m, i, j], or None to fall back on finite differences"""
        return None

    def _curvature_closed(self, x: np.ndarray) -> Optional[np.ndarray]:
        """Closed-form rm[a, b, c, d], or None to fall back on finite differences"""
        return None

    # ------------------------------------------------------------------
    # Capabilities
    # ------------------------------------------------------------------

    @property
    def locally_symmetric(self) -> bool:
        """Curvature quantities are point- and direction-homogeneous"""
        return False

    @property
    def curvature_bound(self) -> float:
        """Upper bound for |sectional curvature|"""
        return 1.0

    def expected_shape_spectrum(self) -> Optional[np.ndarray]:
        """Ascending principal curvatures of every horosphere, when known in closed form"""
        return None

    def expected_horosphere_scalar(self) -> Optional[float]:
        return None

    def expected_sectional_spread(self) -> Optional[float]:
        return None

    def recenter(self, x: np.ndarray) -> Optional[ChartMove]:
        """Isometric chart change bringing x back near the reference point, if one is due"""
        return None

    def adapted_first_vector(self, x: np.ndarray, v: np.ndarray) -> Optional[np.ndarray]:
        """Preferred first frame vector for v (e.g. Jv on Kaehler models)"""
        return None

    def describe(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "dimension": self.dimension,
            "parameters": dict(self.parameters),
            "curvature_mode": self.curvature_mode.value,
        }

    def with_mode(self, mode: CurvatureMode) -> "MetricModel":
        """Same model evaluated with another curvature mode"""
        clone = object.__new__(type(self))
        clone.__dict__.update(self.__dict__)
        clone.curvature_mode = CurvatureMode(mode)
        return clone

    # ------------------------------------------------------------------
    # Domain handling
    # ------------------------------------------------------------------

    def in_domain(self, x: np.ndarray) -> bool:
        return bool(self.boundary_distance(x) > settings.chart_margin)

    def check_point(self, p) -> np.ndarray:
        x = _coords(p)
        if x.shape != (self.dimension,):
            raise ChartDomainError(
                f"{self.name}: expected {self.dimension} coordinates, got shape {x.shape}"
            )
        if not np.all(np.isfinite(x)) or not self.in_domain(x):
            raise ChartDomainError(f"{self.name}: point {x.tolist()} is outside the chart domain")
        return x

    # ------------------------------------------------------------------
    # Metric and connection
    # ------------------------------------------------------------------

    def metric_at(self, p) -> np.ndarray:
        """Symmetric positive definite metric matrix at p"""
        x = self.check_point(p)
        g = self._metric(x)
        return 0.5 * (g + g.T)

    def metric_derivative_fd(self, x: np.ndarray, h: Optional[float] = None) -> np.ndarray:
        """Central-difference dg[m, i, j]"""
        h = settings.fd_step if h is None else h
        n = self.dimension
        dg = np.empty((n, n, n))
        for m in range(n):
            e = np.zeros(n)
            e[m] = h
            dg[m] = (self._metric(x + e) - self._metric(x - e)) / (2.0 * h)
        return dg

    def metric_derivative_at(self, x: np.ndarray) -> np.ndarray:
        if self.curvature_mode is CurvatureMode.CLOSED_FORM:
            dg = self._metric_derivative(x)
            if dg is not None:
                return dg
        return self.metric_derivative_fd(x)

    def christoffel_fd(self, p) -> np.ndarray:
        """Christoffel symbols from the finite-difference metric derivative"""
        x = _coords(p)
        return christoffel_from_derivative(self._metric(x), self.metric_derivative_fd(x))

    def _christoffel(self, x: np.ndarray) -> np.ndarray:
        return christoffel_from_derivative(self._metric(x), self.metric_derivative_at(x))

    def christoffel_at(self, p) -> np.ndarray:
        """Gamma^i_jk at p, symmetric in (j, k)"""
        return self._christoffel(self.check_point(p))

    def connection(self, x: np.ndarray, u: np.ndarray, rows: np.ndarray) -> np.ndarray:
        """Gamma(u, w) for every row w of ``rows``; the geodesic and transport right-hand side"""
        gamma = self._christoffel(x)
        return np.einsum("ijk,j,ak->ai", gamma, u, rows)

    # ------------------------------------------------------------------
    # Curvature
    # ------------------------------------------------------------------

    def curvature_tensor_fd(self, x: np.ndarray) -> np.ndarray:
        """rm from nested central differences of the finite-difference Christoffel symbols"""
        n = self.dimension
        h = settings.fd_second_step
        dgamma = np.empty((n, n, n, n))
        for m in range(n):
            e = np.zeros(n)
            e[m] = h
            dgamma[m] = (self.christoffel_fd(x + e) - self.christoffel_fd(x - e)) / (2.0 * h)
        return lower_riemann(self._metric(x), self.christoffel_fd(x), dgamma)

    def _curvature(self, x: np.ndarray) -> np.ndarray:
        if self.curvature_mode is CurvatureMode.CLOSED_FORM:
            rm = self._curvature_closed(x)
            if rm is not None:
                return rm
        return self.curvature_tensor_fd(x)

    def curvature_tensor(self, p) -> np.ndarray:
        return self._curvature(self.check_point(p))

    def _curvature_operator(self, x: np.ndarray, v: np.ndarray, frame: np.ndarray) -> np.ndarray:
        rv = np.einsum("abcd,b,c->ad", self._curvature(x), v, v)
        op = frame @ rv @ frame.T
        return 0.5 * (op + op.T)

    def check_frame(self, x: np.ndarray, v: np.ndarray, frame: np.ndarray) -> None:
        """Raise FrameError unless v is unit and frame is g-orthonormal and g-orthogonal to v"""
        tol = settings.frame_tolerance
        g = self._metric(x)
        frame = np.atleast_2d(frame)
        if frame.shape != (self.dimension - 1, self.dimension):
            raise FrameError(
                f"{self.name}: frame must have shape {(self.dimension - 1, self.dimension)}, "
                f"got {frame.shape}"
            )
        if abs(float(v @ g @ v) - 1.0) > tol:
            raise FrameError(f"{self.name}: velocity is not unit (|v|^2 = {float(v @ g @ v)!r})")
        gram_error = np.max(np.abs(frame @ g @ frame.T - np.eye(self.dimension - 1)))
        normal_error = np.max(np.abs(frame @ g @ v))
        if gram_error > tol or normal_error > tol:
            raise FrameError(
                f"{self.name}: frame not orthonormal (gram error {gram_error:.3e}, "
                f"normal error {normal_error:.3e})"
            )

    def curvature_operator(self, v: TangentVector, frame: Sequence[np.ndarray]) -> np.ndarray:
        """Matrix <R(e_i, v) v, e_j> in the given orthonormal frame of v's complement"""
        x = self.check_point(v.base)
        frame_arr = np.asarray(frame, dtype=float)
        self.check_frame(x, v.components, frame_arr)
        return self._curvature_operator(x, v.components, frame_arr)

    def ricci_form(self, p) -> np.ndarray:
        """Ricci tensor Ric_bc = g^ad rm_abcd at p"""
        x = self.check_point(p)
        ginv = la.inv(self._metric(x))
        ric = np.einsum("ad,abcd->bc", ginv, self._curvature(x))
        return 0.5 * (ric + ric.T)

    def ricci_and_scalar(self, v: TangentVector) -> tuple[float, float]:
        """Ric(v) for unit v and the scalar curvature at v's base point"""
        x = self.check_point(v.base)
        ginv = la.inv(self._metric(x))
        ric = np.einsum("ad,abcd->bc", ginv, self._curvature(x))
        return float(v.components @ ric @ v.components), float(np.einsum("bc,bc->", ginv, ric))

    def sectional_curvature(self, p, u: np.ndarray, w: np.ndarray) -> float:
        x = self.check_point(p)
        g = self._metric(x)
        area = float((u @ g @ u) * (w @ g @ w) - (u @ g @ w) ** 2)
        if area <= 0.0:
            raise ValueError("Vectors do not span a 2-plane")
        rm = self._curvature(x)
        return float(np.einsum("abcd,a,b,c,d->", rm, u, w, w, u) / area)

    def complement_basis(self, x: np.ndarray, v: np.ndarray) -> np.ndarray:
        """g-orthonormal basis of v's complement by Gram-Schmidt on the chart axes"""
        from horocurv.core.geodesic import seed_frame

        return seed_frame(self, TangentVector(Point(x), v, unit=True))

    def plane_curvature_extremes(self, x: np.ndarray, u: np.ndarray) -> tuple[float, float]:
        """Min and max sectional curvature over all planes containing the unit vector u"""
        frame = self.complement_basis(x, u)
        eig = la.eigvalsh(self._curvature_operator(x, u, frame))
        return float(eig[0]), float(eig[-1])

    # ------------------------------------------------------------------
    # Registration
    # ------------------------------------------------------------------

    def unit_directions(self, x: np.ndarray, rng: np.random.Generator, count: int) -> np.ndarray:
        """Uniform g-unit vectors at x: whitened standard normals"""
        chol = la.cholesky(self._metric(x), lower=True)
        z = rng.standard_normal((count, self.dimension))
        vecs = la.solve_triangular(chol.T, z.T, lower=False).T
        norms = np.linalg.norm(z, axis=1)
        return vecs / norms[:, None]

    def validate(self) -> float:
        """Registration checks; returns the largest sampled |sectional curvature|.

        Raises:
            ModelRegistrationError: metric not positive definite, curvature
                symmetries violated, or a sampled sectional curvature >= 0
        """
        rng = np.random.default_rng(settings.registration_seed)
        points = self.sample_points(rng, settings.registration_points)
        worst_negative = -np.inf
        largest = 0.0
        for x in points:
            g = self._metric(x)
            try:
                la.cholesky(g, lower=True)
            except la.LinAlgError as e:
                raise ModelRegistrationError(f"{self.name}: metric not positive definite at {x}: {e}")
            rm = self._curvature(x)
            scale = max(1.0, float(np.max(np.abs(rm))))
            asym = max(
                float(np.max(np.abs(rm + rm.transpose(1, 0, 2, 3)))),
                float(np.max(np.abs(rm - rm.transpose(2, 3, 0, 1)))),
                bianchi_residual(rm),
            )
            if asym > 1e-6 * scale:
                raise ModelRegistrationError(
                    f"{self.name}: curvature symmetries violated at {x.tolist()} (error {asym:.3e})"
                )
            for u in self.unit_directions(x, rng, settings.registration_directions):
                lo, hi = self.plane_curvature_extremes(x, u)
                worst_negative = max(worst_negative, hi)
                largest = max(largest, abs(lo), abs(hi))
                if hi >= 0.0:
                    raise ModelRegistrationError(
                        f"{self.name}: non-negative sectional curvature {hi:.6g} sampled at "
                        f"{x.tolist()} with parameters {self.parameters}"
                    )
        logger.info(
            f"Registered {self.name} (n={self.dimension}, mode={self.curvature_mode.value}): "
            f"sampled curvature in [{-largest:.4g}, {worst_negative:.4g}]"
        )
        return largest


# ----------------------------------------------------------------------
# Functional entry points
# ----------------------------------------------------------------------


def metric_at(model: MetricModel, p: Point) -> np.ndarray:
    return model.metric_at(p)


def christoffel_at(model: MetricModel, p: Point) -> np.ndarray:
    return model.christoffel_at(p)


def curvature_operator(model: MetricModel, v: TangentVector, frame) -> np.ndarray:
    return model.curvature_operator(v, frame)


def ricci_and_scalar(model: MetricModel, v: TangentVector) -> tuple[float, float]:
    return model.ricci_and_scalar(v)
