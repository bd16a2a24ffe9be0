"""
Horosphere Analysis

Intrinsic scalar curvature of horospheres through the Gauss equation, and the
quantities behind the umbilicity argument: the pairwise gap of the principal
curvatures, their spread, and the spread of ambient sectional curvature at a
point.
"""

import logging
from typing import Dict, List, Sequence, Union

import numpy as np
from pydantic import BaseModel, Field

from horocurv.core.errors import FrameError
from horocurv.infrastructure.metrics.provider import MetricModel
from horocurv.models.geometry import Point, ShapeOperator, TangentVector

logger = logging.getLogger(__name__)

SPREAD_METHODS = ("extremes", "planes")


class HorosphereReport(BaseModel):
    """Horosphere geometry at the base point of v"""

    direction: List[float] = Field(..., description="Chart components of the normal v")
    base_point: List[float] = Field(..., description="Chart coordinates of v's base point")
    s: float = Field(..., description="Intrinsic scalar curvature of the horosphere")
    trace_S: float
    trace_S2: float
    principal_curvatures: List[float] = Field(..., description="Ascending eigenvalues of S")
    umbilicity_deviation: float = Field(..., ge=0)
    lemma_gap: float
    ric_v: float = Field(..., description="Ric(v, v)")
    scal: float = Field(..., description="Ambient scalar curvature at the base point")

    def csv_row(self) -> Dict[str, float]:
        """Flat one-row representation"""
        row: Dict[str, float] = {}
        for i, c in enumerate(self.direction):
            row[f"v{i + 1}"] = c
        row["s"] = self.s
        row["trace_S"] = self.trace_S
        row["trace_S2"] = self.trace_S2
        for i, lam in enumerate(self.principal_curvatures):
            row[f"lambda{i + 1}"] = lam
        row["umbilicity_deviation"] = self.umbilicity_deviation
        row["lemma_gap"] = self.lemma_gap
        row["ric_v"] = self.ric_v
        row["scal"] = self.scal
        return row


def lemma_gap(eigenvalues: Sequence[float]) -> float:
    """sum lambda_i^2 - (1/(n-2)) sum_{i != j} lambda_i lambda_j for the n-1 principal curvatures.

    Evaluated in the equivalent form (1/(n-2)) sum_{i<j} (lambda_i - lambda_j)^2,
    which is exactly non-negative.

    Raises:
        ValueError: Fewer than two principal curvatures (n < 3)
    """
    lam = np.asarray(eigenvalues, dtype=float)
    n = lam.size + 1
    if n < 3:
        raise ValueError(f"Need n >= 3 (at least 2 principal curvatures), got {lam.size}")
    diffs = lam[:, None] - lam[None, :]
    return float(np.sum(np.triu(diffs, 1) ** 2) / (n - 2))


def umbilicity_deviation(S: Union[ShapeOperator, np.ndarray]) -> float:
    """max_{i,j} |lambda_i - lambda_j|"""
    op = S if isinstance(S, ShapeOperator) else ShapeOperator(S)
    lam = op.eigenvalues
    return float(lam[-1] - lam[0])


def gauss_scalar(model: MetricModel, v: TangentVector, S: Union[ShapeOperator, np.ndarray]) -> HorosphereReport:
    """Horosphere scalar curvature s = tr(S)^2 - tr(S^2) - 2 Ric(v) + Scal.

    Args:
        model: Metric model
        v: Unit normal of the horosphere
        S: Shape operator at v's base point

    Returns:
        Fully populated HorosphereReport
    """
    op = S if isinstance(S, ShapeOperator) else ShapeOperator(S)
    x = model.check_point(v.base)
    g = model._metric(x)
    norm2 = float(v.components @ g @ v.components)
    if abs(norm2 - 1.0) > 1e-8:
        raise FrameError(f"{model.name}: normal is not unit (|v|^2 = {norm2!r})")
    if op.size != model.dimension - 1:
        raise ValueError(f"Shape operator must be {model.dimension - 1}x{model.dimension - 1}, got {op.size}")

    ric_v, scal = model.ricci_and_scalar(v)
    lam = op.eigenvalues
    trace_s = float(np.trace(op.matrix))
    trace_s2 = float(np.sum(op.matrix * op.matrix))
    s = trace_s**2 - trace_s2 - 2.0 * ric_v + scal
    return HorosphereReport(
        direction=[float(c) for c in v.components],
        base_point=[float(c) for c in x],
        s=s,
        trace_S=trace_s,
        trace_S2=trace_s2,
        principal_curvatures=lam.tolist(),
        umbilicity_deviation=float(lam[-1] - lam[0]),
        lemma_gap=lemma_gap(lam),
        ric_v=ric_v,
        scal=scal,
    )


def sectional_spread(
    model: MetricModel,
    p: Point,
    samples: int,
    rng_seed: int = 0,
    method: str = "extremes",
) -> float:
    """max - min of sectional curvature at p.

    With ``extremes`` each sampled unit direction u contributes the extreme
    eigenvalues of the curvature operator on u's complement, i.e. the extreme
    curvatures of all planes through u. With ``planes`` each sample is a single
    random 2-plane.

    Raises:
        ValueError: samples < 2 or unknown method
    """
    if samples < 2:
        raise ValueError(f"samples must be >= 2, got {samples}")
    if method not in SPREAD_METHODS:
        raise ValueError(f"Unknown spread method '{method}' (expected one of {SPREAD_METHODS})")
    x = model.check_point(p)
    rng = np.random.default_rng(rng_seed)
    directions = model.unit_directions(x, rng, samples)
    if method == "extremes":
        bounds = np.array([model.plane_curvature_extremes(x, u) for u in directions])
        lo, hi = float(bounds[:, 0].min()), float(bounds[:, 1].max())
    else:
        partners = model.unit_directions(x, rng, samples)
        curvatures = [model.sectional_curvature(x, u, w) for u, w in zip(directions, partners)]
        lo, hi = min(curvatures), max(curvatures)
    logger.debug(f"{model.name}: sectional curvature in [{lo:.6g}, {hi:.6g}] at {x.tolist()}")
    return hi - lo
