"""
Report Models

Pydantic models for verification reports. Everything outside ``timing`` is a
deterministic function of the effective configuration, so identical runs give
byte-identical JSON once timing is dropped.
"""

from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

SCHEMA_VERSION = 1


class EquationTag(str, Enum):
    """Identity a check record verifies"""
    RICCATI = "Eq1"
    TRACED_RICCATI = "Eq3"
    FLOW_INVARIANCE = "Eq4"
    LIOUVILLE = "Eq5-6"
    GAUSS = "Eq7"
    PRINCIPAL_GAP = "Lemma1"
    SCHUR = "Schur"


class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"
    ERROR = "error"


class CheckRecord(BaseModel):
    """One verification check"""

    name: str = Field(..., description="Check identifier")
    equation: EquationTag = Field(..., description="Identity the check verifies")
    residual: Optional[float] = Field(default=None, description="Measured residual (None if not run)")
    tolerance: Optional[float] = Field(default=None, description="Pass threshold; None for diagnostics")
    status: CheckStatus
    value: Optional[float] = Field(default=None, description="Computed quantity behind the residual")
    expected: Optional[float] = Field(default=None, description="Closed-form value, when one exists")
    detail: Optional[str] = Field(default=None, description="Skip reason or error message")

    @property
    def passed(self) -> bool:
        return self.status in (CheckStatus.PASS, CheckStatus.SKIPPED)


class RiccatiDiagnostics(BaseModel):
    """Riccati settings and outcome of the primary direction"""

    horizon: float
    step: float
    convergence_gap: Optional[float]
    convergence_tol: float
    horizon_doublings: int = 0
    recenterings: int = 0
    eigenvalues: List[float] = Field(default_factory=list)


class SamplingMetadata(BaseModel):
    seed: int
    count: int = Field(..., description="Monte-Carlo directions of the Fubini check")
    riccati_directions: int = Field(..., description="Directions of the integrated identity")
    spread_samples: int


class VerificationReport(BaseModel):
    """Result of a verification suite run"""

    schema_version: int = Field(default=SCHEMA_VERSION)
    model: Dict[str, Any] = Field(..., description="Model descriptor and parameters")
    config: Dict[str, Any] = Field(..., description="Effective run configuration")
    records: List[CheckRecord] = Field(default_factory=list)
    riccati: Optional[RiccatiDiagnostics] = None
    sampling: Optional[SamplingMetadata] = None
    complete: bool = Field(default=True, description="False when a hard error aborted the suite")
    timing: Dict[str, float] = Field(default_factory=dict, description="Wall-clock seconds per check")

    @property
    def status(self) -> CheckStatus:
        if self.complete and all(r.passed for r in self.records):
            return CheckStatus.PASS
        return CheckStatus.FAIL

    def deterministic_dump(self) -> Dict[str, Any]:
        """JSON-mode dump without the wall-clock section"""
        data = self.model_dump(mode="json", exclude={"timing"})
        data["status"] = self.status.value
        return data

    def to_json_dict(self) -> Dict[str, Any]:
        data = self.deterministic_dump()
        data["timing"] = dict(self.timing)
        return data

    def csv_rows(self) -> List[Dict[str, Any]]:
        return [
            {
                "name": r.name,
                "equation": r.equation.value,
                "status": r.status.value,
                "residual": r.residual,
                "tolerance": r.tolerance,
                "value": r.value,
                "expected": r.expected,
                "seconds": self.timing.get(r.name),
            }
            for r in self.records
        ]
