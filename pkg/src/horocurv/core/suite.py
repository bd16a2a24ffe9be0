"""
Verification Manager

Runs the verification suite for one model configuration in dependency order
(geodesic transport, Riccati extraction, Gauss equation, Liouville averages)
and tabulates horosphere geometry over sampled directions.
"""

import asyncio
import logging
import time
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from horocurv.core.errors import ConfigError, HorocurvError
from horocurv.core.geodesic import frame_error, transport_frame
from horocurv.core.horosphere import HorosphereReport, gauss_scalar, sectional_spread, umbilicity_deviation
from horocurv.core.liouville import (
    SphereSampler,
    flow_derivative_check,
    fubini_check,
    stream_generator,
    verify_integrated_identity,
)
from horocurv.core.riccati import (
    RiccatiRun,
    riccati_matrix_residual,
    stable_shape_operator,
    traced_riccati_residual,
)
from horocurv.infrastructure.metrics import MetricModel, get_metric_model
from horocurv.models.config import IntegratorConfig, RunConfig
from horocurv.models.geometry import Point, TangentVector
from horocurv.models.reports import (
    CheckRecord,
    CheckStatus,
    EquationTag,
    RiccatiDiagnostics,
    SamplingMetadata,
    VerificationReport,
)

logger = logging.getLogger(__name__)

# Stream index reserved for the primary direction, disjoint from sampling streams
PRIMARY_STREAM = 1 << 20

FRAME_TOL = 1e-7
FRAME_HORIZON = 10.0
SHAPE_TOL = 1e-4
PSD_TOL = 1e-8
UPPER_BOUND_SLACK = 1e-6
MATRIX_RESIDUAL_TOL = 1e-8
SYMMETRIC_TRACE_TOL = 1e-6
PERTURBED_TRACE_TOL = 1e-3
FLOW_TOL = 1e-6
GAUSS_TOL = 1e-3
LEMMA_TOL = 1e-10
SPREAD_TOL = 1e-6
IDENTITY_TOL = 1e-3


def _graded(
    name: str, tag: EquationTag, residual: float, tolerance: Optional[float], **extra
) -> CheckRecord:
    if tolerance is None:
        status = CheckStatus.PASS
    else:
        status = CheckStatus.PASS if residual <= tolerance else CheckStatus.FAIL
    return CheckRecord(
        name=name, equation=tag, residual=residual, tolerance=tolerance, status=status, **extra
    )


def _skipped(name: str, tag: EquationTag, reason: str) -> CheckRecord:
    return CheckRecord(name=name, equation=tag, status=CheckStatus.SKIPPED, detail=reason)


def primary_direction(model: MetricModel, seed: int) -> TangentVector:
    """Deterministic unit vector at the model's base point"""
    base = model.base_point()
    u = model.unit_directions(base.coordinates, stream_generator(seed, PRIMARY_STREAM), 1)[0]
    return TangentVector(base, u, unit=True)


class VerificationManager:
    """Suite orchestration for one run configuration"""

    def __init__(self, config: RunConfig):
        self.config = config
        self.model = get_metric_model(
            config.model,
            dimension=config.dim,
            k=config.k,
            amplitude=config.amplitude,
            curvature_mode=config.curvature_mode,
        )
        self.riccati_cfg = config.riccati()
        self._semaphore = asyncio.Semaphore(config.workers)

    # ------------------------------------------------------------------
    # Individual checks
    # ------------------------------------------------------------------

    def check_parallel_frame(self, v: TangentVector) -> CheckRecord:
        cfg = IntegratorConfig(step=self.config.step, recenter=True)
        trajectory = transport_frame(self.model, v, None, FRAME_HORIZON, cfg, adapted=True)
        worst = max(frame_error(state) for state in trajectory)
        return _graded("parallel_frame", EquationTag.RICCATI, worst, FRAME_TOL)

    def check_convergence(self, run: RiccatiRun) -> CheckRecord:
        gap = run.convergence_gap if run.convergence_gap is not None else 0.0
        return _graded("riccati_convergence", EquationTag.RICCATI, gap, run.convergence_tol)

    def check_shape_spectrum(self, run: RiccatiRun) -> CheckRecord:
        expected = self.model.expected_shape_spectrum()
        if expected is None:
            return _graded(
                "shape_spectrum", EquationTag.RICCATI, 0.0, None,
                value=float(run.eigenvalues[-1]), detail="no closed form",
            )
        error = float(np.max(np.abs(np.array(run.eigenvalues) - np.sort(expected))))
        return _graded(
            "shape_spectrum", EquationTag.RICCATI, error, SHAPE_TOL,
            value=float(run.eigenvalues[-1]), expected=float(np.max(expected)),
        )

    def check_shape_bounds(self, run: RiccatiRun) -> List[CheckRecord]:
        lam = np.array(run.eigenvalues)
        ceiling = float(np.sqrt(self.model.curvature_bound))
        return [
            _graded(
                "shape_nonnegative", EquationTag.RICCATI, max(0.0, -float(lam[0])), PSD_TOL,
                value=float(lam[0]),
            ),
            _graded(
                "shape_upper_bound", EquationTag.RICCATI, max(0.0, float(lam[-1]) - ceiling),
                UPPER_BOUND_SLACK,
                value=float(lam[-1]), expected=ceiling,
            ),
        ]

    def check_matrix_residual(self, run: RiccatiRun) -> CheckRecord:
        residual = riccati_matrix_residual(run, self.config.window)
        tol = MATRIX_RESIDUAL_TOL if self.model.locally_symmetric else None
        return _graded("riccati_matrix_residual", EquationTag.RICCATI, residual, tol)

    def check_traced_riccati(self, v: TangentVector, run: RiccatiRun) -> CheckRecord:
        residual = traced_riccati_residual(self.model, v, run, self.config.window)
        tol = SYMMETRIC_TRACE_TOL if self.model.locally_symmetric else PERTURBED_TRACE_TOL
        return _graded("traced_riccati", EquationTag.TRACED_RICCATI, residual, tol)

    def check_flow_derivative(self, v: TangentVector, run: RiccatiRun) -> CheckRecord:
        value = flow_derivative_check(self.model, v, run, self.config.window)
        tol = FLOW_TOL if self.model.locally_symmetric else None
        return _graded("flow_derivative", EquationTag.FLOW_INVARIANCE, value, tol)

    def check_gauss(self, report: HorosphereReport) -> CheckRecord:
        expected = self.model.expected_horosphere_scalar()
        if expected is None:
            return _graded(
                "horosphere_scalar", EquationTag.GAUSS, 0.0, None, value=report.s, detail="no closed form"
            )
        return _graded(
            "horosphere_scalar", EquationTag.GAUSS, abs(report.s - expected), GAUSS_TOL,
            value=report.s, expected=expected,
        )

    def check_lemma(self, report: HorosphereReport) -> List[CheckRecord]:
        records = [
            _graded(
                "lemma_gap", EquationTag.PRINCIPAL_GAP, max(0.0, -report.lemma_gap), LEMMA_TOL,
                value=report.lemma_gap,
            )
        ]
        spectrum = self.model.expected_shape_spectrum()
        deviation = umbilicity_deviation(np.diag(report.principal_curvatures))
        if spectrum is None:
            records.append(_graded("umbilicity", EquationTag.PRINCIPAL_GAP, 0.0, None, value=deviation))
        else:
            expected = float(np.max(spectrum) - np.min(spectrum))
            records.append(
                _graded(
                    "umbilicity", EquationTag.PRINCIPAL_GAP, abs(deviation - expected), SHAPE_TOL,
                    value=deviation, expected=expected,
                )
            )
        return records

    def check_spread(self, base: Point) -> CheckRecord:
        spread = sectional_spread(self.model, base, self.config.spread_samples, self.config.seed)
        expected = self.model.expected_sectional_spread()
        if expected is None:
            return _graded("sectional_spread", EquationTag.SCHUR, 0.0, None, value=spread)
        return _graded(
            "sectional_spread", EquationTag.SCHUR, abs(spread - expected), SPREAD_TOL,
            value=spread, expected=expected,
        )

    def check_fubini(self, base: Point) -> CheckRecord:
        cfg = self.config
        result = fubini_check(self.model, base, cfg.mc_count, cfg.seed, cfg.workers)
        tol = 3.0 * result.std_error + 1e-9 * max(1.0, abs(result.expected))
        return _graded(
            "fubini_ricci", EquationTag.LIOUVILLE, result.deviation, tol,
            value=result.mean, expected=result.expected,
        )

    def check_integrated_identity(self, base: Point) -> CheckRecord:
        if not self.model.locally_symmetric:
            return _skipped(
                "integrated_identity", EquationTag.LIOUVILLE,
                "model is not locally symmetric; identity needs a closed manifold",
            )
        cfg = self.config
        result = verify_integrated_identity(
            self.model, base, max(1, cfg.samples), cfg.seed, self.riccati_cfg, cfg.workers
        )
        return _graded(
            "integrated_identity", EquationTag.LIOUVILLE, result.residual, IDENTITY_TOL,
            value=result.mean_trace_s2, expected=result.minus_scal_over_n,
        )

    # ------------------------------------------------------------------
    # Suite
    # ------------------------------------------------------------------

    def _plan(self, v: TangentVector, state: Dict[str, Any]) -> List[Tuple[str, Callable[[], object]]]:

        def riccati() -> List[CheckRecord]:
            run = stable_shape_operator(self.model, v, cfg=self.riccati_cfg)
            state["run"] = run
            return [self.check_convergence(run), self.check_shape_spectrum(run), *self.check_shape_bounds(run)]

        def gauss() -> List[CheckRecord]:
            run = state["run"]
            report = gauss_scalar(self.model, v, run.shape_operator)
            state["report"] = report
            return [self.check_gauss(report), *self.check_lemma(report)]

        return [
            ("parallel_frame", lambda: self.check_parallel_frame(v)),
            ("riccati", riccati),
            ("riccati_matrix_residual", lambda: self.check_matrix_residual(state["run"])),
            ("traced_riccati", lambda: self.check_traced_riccati(v, state["run"])),
            ("flow_derivative", lambda: self.check_flow_derivative(v, state["run"])),
            ("gauss", gauss),
            ("sectional_spread", lambda: self.check_spread(v.base)),
            ("fubini_ricci", lambda: self.check_fubini(v.base)),
            ("integrated_identity", lambda: self.check_integrated_identity(v.base)),
        ]

    async def run_suite(self) -> VerificationReport:
        """Run every check in dependency order.

        A hard error stops the suite; the report then carries an error record and
        ``complete = False``.
        """
        v = primary_direction(self.model, self.config.seed)
        report = VerificationReport(
            model=self.model.describe(),
            config=self.config.model_dump(mode="json"),
            sampling=SamplingMetadata(
                seed=self.config.seed,
                count=self.config.mc_count,
                riccati_directions=max(1, self.config.samples),
                spread_samples=self.config.spread_samples,
            ),
        )
        logger.info(f"Starting verification suite for {self.model.name} (n={self.model.dimension})")

        state: Dict[str, Any] = {}
        for name, step in self._plan(v, state):
            started = time.perf_counter()
            try:
                outcome = await asyncio.to_thread(step)
            except HorocurvError as e:
                logger.error(f"Check {name} aborted: {e}")
                report.records.append(
                    CheckRecord(
                        name=name,
                        equation=_ERROR_TAGS.get(name, EquationTag.RICCATI),
                        status=CheckStatus.ERROR,
                        detail=f"{type(e).__name__}: {e}",
                    )
                )
                report.timing[name] = time.perf_counter() - started
                report.complete = False
                break
            records = outcome if isinstance(outcome, list) else [outcome]
            elapsed = time.perf_counter() - started
            for record in records:
                report.records.append(record)
                report.timing[record.name] = elapsed
                if record.status is CheckStatus.FAIL:
                    logger.warning(f"Check {record.name} failed: residual {record.residual} > {record.tolerance}")
                elif record.status is CheckStatus.SKIPPED:
                    logger.warning(f"Check {record.name} skipped: {record.detail}")

        if "run" in state:
            report.riccati = self._diagnostics(state["run"])
        logger.info(f"Verification suite for {self.model.name} finished: {report.status.value}")
        return report

    @staticmethod
    def _diagnostics(run: RiccatiRun) -> RiccatiDiagnostics:
        return RiccatiDiagnostics(
            horizon=run.horizon,
            step=run.step,
            convergence_gap=run.convergence_gap,
            convergence_tol=run.convergence_tol,
            horizon_doublings=run.horizon_doublings,
            recenterings=run.recenterings,
            eigenvalues=run.eigenvalues,
        )

    # ------------------------------------------------------------------
    # Scan
    # ------------------------------------------------------------------

    def _scan_direction(self, v: TangentVector) -> HorosphereReport:
        run = stable_shape_operator(self.model, v, cfg=self.riccati_cfg)
        return gauss_scalar(self.model, v, run.shape_operator)

    async def _bounded(self, func, *args):
        async with self._semaphore:
            return await asyncio.to_thread(func, *args)

    async def scan(self) -> List[HorosphereReport]:
        """Horosphere report per sampled direction at the model's base point, in sample order

        Raises:
            ConfigError: samples < 1
        """
        if self.config.samples < 1:
            raise ConfigError(f"scan needs at least one sample, got {self.config.samples}")
        base = self.model.base_point()
        sampler = SphereSampler(
            rng_seed=self.config.seed, n=self.model.dimension, base=base, count=self.config.samples
        )
        vectors = sampler.draw(self.model, self.config.workers)
        logger.info(f"Scanning {len(vectors)} directions on {self.model.name}")
        tasks = [self._bounded(self._scan_direction, TangentVector(base, u, unit=True)) for u in vectors]
        return list(await asyncio.gather(*tasks))

    async def riccati_detail(self) -> Tuple[TangentVector, RiccatiRun, HorosphereReport]:
        """Single-direction run with its stored trajectory"""
        v = primary_direction(self.model, self.config.seed)
        run = await asyncio.to_thread(stable_shape_operator, self.model, v, None, self.riccati_cfg)
        return v, run, gauss_scalar(self.model, v, run.shape_operator)


_ERROR_TAGS = {
    "riccati": EquationTag.RICCATI,
    "riccati_matrix_residual": EquationTag.RICCATI,
    "traced_riccati": EquationTag.TRACED_RICCATI,
    "flow_derivative": EquationTag.FLOW_INVARIANCE,
    "gauss": EquationTag.GAUSS,
    "sectional_spread": EquationTag.SCHUR,
    "fubini_ricci": EquationTag.LIOUVILLE,
    "integrated_identity": EquationTag.LIOUVILLE,
}
