"""Metric Model Factory

Registry of the shipped models, addressable by string identifier. Models are
validated once (registration) and cached; the cache is keyed on the full
parameter set, so repeated lookups return the same immutable instance.
"""

import logging
from typing import Any, Callable, Dict, List, Optional, Tuple

from horocurv.core.errors import ConfigError, ModelRegistrationError
from horocurv.infrastructure.metrics.complex_hyperbolic import ComplexHyperbolicPlane
from horocurv.infrastructure.metrics.hyperbolic import HyperbolicSpace
from horocurv.infrastructure.metrics.perturbed import PerturbedHyperbolic
from horocurv.infrastructure.metrics.provider import CurvatureMode, MetricModel

logger = logging.getLogger(__name__)


def _build_hyperbolic(dimension: int, k: float, amplitude: float, mode: CurvatureMode) -> MetricModel:
    return HyperbolicSpace(dimension=dimension, k=k, curvature_mode=mode)


def _build_complex_hyperbolic(
    dimension: int, k: float, amplitude: float, mode: CurvatureMode
) -> MetricModel:
    return ComplexHyperbolicPlane(curvature_mode=mode, dimension=dimension)


def _build_perturbed(dimension: int, k: float, amplitude: float, mode: CurvatureMode) -> MetricModel:
    return PerturbedHyperbolic(dimension=dimension, amplitude=amplitude, k=k, curvature_mode=mode)


_BUILDERS: Dict[str, Callable[[int, float, float, CurvatureMode], MetricModel]] = {
    "hyperbolic": _build_hyperbolic,
    "complex-hyperbolic": _build_complex_hyperbolic,
    "perturbed": _build_perturbed,
}

MODEL_DESCRIPTIONS: Dict[str, Dict[str, Any]] = {
    "hyperbolic": {
        "summary": "Real hyperbolic space H^n, half-space chart, curvature -k^2",
        "parameters": ["dim >= 3", "k > 0"],
        "locally_symmetric": True,
    },
    "complex-hyperbolic": {
        "summary": "Complex hyperbolic plane CH^2, unit-ball chart, holomorphic sectional curvature -4",
        "parameters": ["dim = 4 (fixed)"],
        "locally_symmetric": True,
    },
    "perturbed": {
        "summary": "H^n times a conformal bump factor e^{2 eps phi}, phi supported in a ball",
        "parameters": ["dim >= 3", "k > 0", "amplitude (admissible range checked at registration)"],
        "locally_symmetric": "only when amplitude = 0",
    },
}

_registry: Dict[Tuple[Any, ...], MetricModel] = {}


def available_models() -> List[str]:
    return sorted(_BUILDERS)


def get_metric_model(
    name: str,
    dimension: Optional[int] = None,
    k: float = 1.0,
    amplitude: float = 0.05,
    curvature_mode: CurvatureMode | str = CurvatureMode.CLOSED_FORM,
) -> MetricModel:
    """Get or register a model.

    Args:
        name: Registry identifier ("hyperbolic", "complex-hyperbolic", "perturbed")
        dimension: Chart dimension (defaults to 3, or 4 for the complex model)
        k: Curvature scale of the real hyperbolic background
        amplitude: Perturbation amplitude (perturbed family only)
        curvature_mode: "closed-form" or "finite-difference"

    Returns:
        A validated, immutable MetricModel

    Raises:
        ConfigError: Unknown model identifier
        ModelRegistrationError: Registration checks failed
    """
    if name not in _BUILDERS:
        raise ConfigError(f"Unknown model '{name}' (available: {', '.join(available_models())})")
    if dimension is None:
        dimension = 4 if name == "complex-hyperbolic" else 3
    if dimension < 3:
        raise ModelRegistrationError(f"{name}: dimension must be >= 3, got {dimension}")
    try:
        mode = CurvatureMode(curvature_mode)
    except ValueError:
        raise ConfigError(f"Unknown curvature mode '{curvature_mode}'")

    key = (name, int(dimension), float(k), float(amplitude), mode)
    if key in _registry:
        return _registry[key]

    logger.info(f"Registering model {name}: dim={dimension}, k={k}, amplitude={amplitude}, mode={mode.value}")
    model = _BUILDERS[name](int(dimension), float(k), float(amplitude), mode)
    largest = model.validate()
    if isinstance(model, PerturbedHyperbolic):
        model.register_bound(largest)

    _registry[key] = model
    return model


def reset_model_registry():
    """Reset the registration cache.

    Used for testing or reconfiguration.
    """
    _registry.clear()
    logger.warning("Model registry reset")
