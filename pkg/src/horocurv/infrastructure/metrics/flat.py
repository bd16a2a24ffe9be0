"""Flat Euclidean Test Metric

Identity metric on R^n. It is not negatively curved, so it never goes through
registration; tests use it to pin the Christoffel and curvature machinery to
exact zeros.
"""

from typing import Optional

import numpy as np

from horocurv.infrastructure.metrics.provider import CurvatureMode, MetricModel
from horocurv.models.geometry import Point


class FlatSpace(MetricModel):
    """Euclidean R^n"""

    name = "flat"

    def __init__(self, dimension: int = 3, curvature_mode: CurvatureMode = CurvatureMode.CLOSED_FORM):
        super().__init__(dimension, {}, curvature_mode)

    def _metric(self, x: np.ndarray) -> np.ndarray:
        return np.eye(self.dimension)

    def _metric_derivative(self, x: np.ndarray) -> Optional[np.ndarray]:
        return np.zeros((self.dimension,) * 3)

    def _curvature_closed(self, x: np.ndarray) -> Optional[np.ndarray]:
        return np.zeros((self.dimension,) * 4)

    def boundary_distance(self, x: np.ndarray) -> float:
        return float("inf")

    def reference_point(self) -> Point:
        return Point(np.zeros(self.dimension))

    def sample_points(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return rng.uniform(-1.0, 1.0, size=(count, self.dimension))
