"""
Geometry Value Types

Immutable numeric value types passed between the metric models, the geodesic
integrator and the Riccati solver. These sit on the integration hot path, so
they are plain frozen dataclasses over numpy arrays rather than pydantic models.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Optional

import numpy as np
from scipy import linalg as la

if TYPE_CHECKING:
    from horocurv.infrastructure.metrics.provider import MetricModel


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Point:
    """A point given by its chart coordinates"""

    coordinates: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coordinates", _frozen_array(self.coordinates))
        if self.coordinates.ndim != 1:
            raise ValueError(f"Point coordinates must be a vector, got shape {self.coordinates.shape}")

    @property
    def dim(self) -> int:
        return int(self.coordinates.shape[0])


@dataclass(frozen=True)
class TangentVector:
    """A tangent vector at a base point, in chart components"""

    base: Point
    components: np.ndarray
    unit: bool = False

    def __post_init__(self):
        object.__setattr__(self, "components", _frozen_array(self.components))
        if self.components.shape != self.base.coordinates.shape:
            raise ValueError(
                f"Vector shape {self.components.shape} does not match base point "
                f"shape {self.base.coordinates.shape}"
            )


@dataclass(frozen=True)
class GeodesicState:
    """Position, unit velocity and parallel orthonormal frame at flow time t.

    ``model`` is the chart in which the arrays are expressed. It only differs
    from the caller's model after an isometric chart recentering.
    """

    t: float
    position: np.ndarray
    velocity: np.ndarray
    frame: np.ndarray
    model: "MetricModel"
    steps: int = 0
    recenterings: int = 0

    @property
    def point(self) -> Point:
        return Point(self.position)

    @property
    def tangent(self) -> TangentVector:
        return TangentVector(Point(self.position), self.velocity, unit=True)


@dataclass(frozen=True)
class ShapeOperator:
    """Symmetric (n-1)x(n-1) shape operator matrix in a parallel frame"""

    matrix: np.ndarray
    at_time: float = 0.0
    frame_id: Optional[str] = None
    eigenvalues: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=float)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"Shape operator must be square, got shape {mat.shape}")
        mat = 0.5 * (mat + mat.T)
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "eigenvalues", _frozen_array(la.eigvalsh(mat)))

    @property
    def size(self) -> int:
        return int(self.matrix.shape[0])

    def scaled(self, factor: float) -> "ShapeOperator":
        return ShapeOperator(factor * self.matrix, self.at_time, self.frame_id)

    def conjugated(self, rotation: np.ndarray) -> "ShapeOperator":
        """Express the operator in a rotated orthonormal frame"""
        return ShapeOperator(rotation.T @ self.matrix @ rotation, self.at_time, self.frame_id)
