"""Shared fixtures for horocurv tests"""

import numpy as np
import pytest

from horocurv.infrastructure.metrics import (
    ComplexHyperbolicPlane,
    FlatSpace,
    HyperbolicSpace,
    PerturbedHyperbolic,
    reset_model_registry,
)
from horocurv.models.config import RiccatiConfig


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def h3():
    return HyperbolicSpace(dimension=3, k=1.0)


@pytest.fixture
def ch2():
    return ComplexHyperbolicPlane()


@pytest.fixture
def perturbed():
    return PerturbedHyperbolic(dimension=3, amplitude=0.05)


@pytest.fixture
def flat():
    return FlatSpace(dimension=3)


@pytest.fixture
def fast_riccati():
    """Coarse but converged settings for unit-level Riccati runs"""
    return RiccatiConfig(horizon=15.0, step=1e-2, convergence_tol=1e-6)


@pytest.fixture
def clean_registry():
    reset_model_registry()
    yield
    reset_model_registry()
