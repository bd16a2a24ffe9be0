"""
Configuration Models

Pydantic models for integrator, Riccati and run configuration.
"""

from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class CurvatureMode(str, Enum):
    """How Christoffel symbols and the curvature tensor are evaluated"""

    CLOSED_FORM = "closed-form"
    FINITE_DIFFERENCE = "finite-difference"


class IntegrationMethod(str, Enum):
    """Fixed-step 4th-order Runge-Kutta schemes"""
    RK4 = "rk4"
    RK38 = "rk38"


class InitialCondition(str, Enum):
    """Riccati initial condition at t = -T"""
    LARGE_MULTIPLE = "large-multiple-of-identity"
    CONSTANT_CURVATURE = "constant-curvature-guess"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


class IntegratorConfig(BaseModel):
    """Geodesic and parallel-transport integrator settings"""

    model_config = ConfigDict(frozen=True)

    step: float = Field(default=1e-3, gt=0, description="Fixed step in flow time")
    renormalize_every: int = Field(default=10, ge=1, description="Steps between renormalizations")
    method: IntegrationMethod = Field(default=IntegrationMethod.RK4, description="RK scheme identifier")
    recenter: bool = Field(
        default=False, description="Apply isometric chart recentering when the model supports it"
    )


class RiccatiConfig(BaseModel):
    """Stable Riccati solution settings"""

    model_config = ConfigDict(frozen=True)

    horizon: float = Field(default=30.0, gt=0, description="Backward horizon T")
    step: float = Field(default=1e-3, gt=0, le=1e-2, description="Geodesic grid spacing")
    convergence_tol: float = Field(default=1e-6, gt=0, description="Accepted horizon-doubling gap")
    max_horizon: Optional[float] = Field(
        default=None, gt=0, description="Largest horizon tried before declaring non-convergence"
    )
    initial_condition: InitialCondition = Field(default=InitialCondition.LARGE_MULTIPLE)
    initial_scale: float = Field(
        default=10.0, gt=0, description="S(-T) = initial_scale * sqrt(curvature bound) * Id"
    )
    blowup_threshold: float = Field(default=1e6, gt=0)
    check_convergence: bool = Field(default=True, description="Run the doubled horizon for the gap")
    adapted_frame: bool = Field(default=True, description="Seed the frame with the model's adapted vector")
    renormalize_every: int = Field(default=10, ge=1)
    method: IntegrationMethod = Field(default=IntegrationMethod.RK4)

    @model_validator(mode="after")
    def _check_horizons(self) -> "RiccatiConfig":
        if self.max_horizon is not None and self.max_horizon < self.horizon:
            raise ValueError("max_horizon must be >= horizon")
        return self

    def integrator(self) -> IntegratorConfig:
        return IntegratorConfig(
            step=self.step,
            renormalize_every=self.renormalize_every,
            method=self.method,
            recenter=True,
        )


class RunConfig(BaseModel):
    """Effective configuration of a CLI run (defaults < config file < flags)"""

    model_config = ConfigDict(extra="forbid")

    model: str = Field(default="hyperbolic", description="Registry identifier")
    dim: Optional[int] = Field(default=None, ge=3, description="Chart dimension")
    k: float = Field(default=1.0, gt=0, description="Real hyperbolic curvature scale")
    amplitude: float = Field(default=0.05, description="Perturbation amplitude")
    curvature_mode: CurvatureMode = Field(
        default=CurvatureMode.CLOSED_FORM, description="Curvature backend"
    )
    samples: int = Field(default=8, ge=0, description="Sampled directions (scan) / Riccati directions (verify)")
    mc_count: int = Field(default=100000, ge=100, description="Monte-Carlo directions for the Fubini check")
    seed: int = Field(default=0, ge=0)
    step: float = Field(default=1e-3, gt=0, le=1e-2)
    horizon: float = Field(default=30.0, gt=0)
    tol: float = Field(default=1e-6, gt=0)
    window: float = Field(default=2.0, gt=0, description="Trailing window of the traced-Riccati and flow checks")
    spread_samples: int = Field(default=64, ge=2)
    workers: int = Field(default=4, ge=1)
    format: OutputFormat = Field(default=OutputFormat.JSON)
    out: Optional[str] = Field(default=None, description="Output path; stdout when unset")

    def riccati(self) -> RiccatiConfig:
        return RiccatiConfig(horizon=self.horizon, step=self.step, convergence_tol=self.tol)
