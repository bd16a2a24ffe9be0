"""Metric model infrastructure.

Coordinate-chart Riemannian metrics behind the MetricModel interface.
"""

from horocurv.infrastructure.metrics.complex_hyperbolic import ComplexHyperbolicPlane
from horocurv.infrastructure.metrics.factory import (
    available_models,
    get_metric_model,
    reset_model_registry,
)
from horocurv.infrastructure.metrics.flat import FlatSpace
from horocurv.infrastructure.metrics.hyperbolic import HyperbolicSpace
from horocurv.infrastructure.metrics.perturbed import PerturbedHyperbolic
from horocurv.infrastructure.metrics.provider import (
    ChartMove,
    CurvatureMode,
    MetricModel,
    christoffel_at,
    bianchi_residual,
    curvature_operator,
    metric_at,
    ricci_and_scalar,
)

__all__ = [
    "available_models",
    "get_metric_model",
    "reset_model_registry",
    "ChartMove",
    "CurvatureMode",
    "MetricModel",
    "bianchi_residual",
    "ComplexHyperbolicPlane",
    "FlatSpace",
    "HyperbolicSpace",
    "PerturbedHyperbolic",
    "christoffel_at",
    "curvature_operator",
    "metric_at",
    "ricci_and_scalar",
]
