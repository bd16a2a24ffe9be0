"""
horocurv Settings

Process-wide numeric defaults using Pydantic settings with environment variable support.
"""

from typing import Optional

from pydantic import AliasChoices, Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """horocurv configuration"""

    # Logging
    log_level: str = Field(default="INFO", description="Root log level")

    # Default run config file (HOROCURV_CONFIG)
    config_file: Optional[str] = Field(
        default=None,
        validation_alias=AliasChoices("HOROCURV_CONFIG", "HOROCURV_CONFIG_FILE"),
        description="Key-value config file applied below CLI flags",
    )

    # Finite-difference stencils
    fd_step: float = Field(default=1e-5, gt=0, description="Central-difference step for metric derivatives")
    fd_second_step: float = Field(
        default=1e-4, gt=0, description="Outer step of the nested central difference for Christoffel derivatives"
    )

    # Chart handling
    chart_margin: float = Field(
        default=1e-6, gt=0, description="Points closer than this to the chart boundary are rejected"
    )
    frame_tolerance: float = Field(
        default=1e-8, gt=0, description="Allowed deviation from g-orthonormality of supplied frames"
    )

    # Model registration
    registration_points: int = Field(default=64, ge=1, description="Sample points for the negativity check")
    registration_directions: int = Field(
        default=16, ge=1, description="Directions per sample point for the negativity check"
    )
    registration_seed: int = Field(default=20240611, description="Seed of the registration sample grid")

    # Concurrency
    workers: int = Field(default=4, ge=1, description="Concurrent per-direction tasks")

    model_config = SettingsConfigDict(
        env_prefix="HOROCURV_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
        populate_by_name=True,
    )


# Global settings instance
settings = Settings()
