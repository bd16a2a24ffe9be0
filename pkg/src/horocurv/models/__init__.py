"""Data models for horocurv"""

from .config import (
    CurvatureMode,
    InitialCondition,
    IntegrationMethod,
    IntegratorConfig,
    OutputFormat,
    RiccatiConfig,
    RunConfig,
)
from .geometry import GeodesicState, Point, ShapeOperator, TangentVector
from .reports import (
    SCHEMA_VERSION,
    CheckRecord,
    CheckStatus,
    EquationTag,
    RiccatiDiagnostics,
    SamplingMetadata,
    VerificationReport,
)

__all__ = [
    "CurvatureMode",
    "InitialCondition",
    "IntegrationMethod",
    "IntegratorConfig",
    "OutputFormat",
    "RiccatiConfig",
    "RunConfig",
    "GeodesicState",
    "Point",
    "ShapeOperator",
    "TangentVector",
    "SCHEMA_VERSION",
    "CheckRecord",
    "CheckStatus",
    "EquationTag",
    "RiccatiDiagnostics",
    "SamplingMetadata",
    "VerificationReport",
]
