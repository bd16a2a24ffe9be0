"""
CLI Commands

Subcommands ``models``, ``verify``, ``scan`` and ``riccati``. Each handler
resolves the effective configuration, runs the work and hands the rendered
report to a single sink. Library errors map to exit codes:

    0  every check passed
    1  a check failed
    2  usage, configuration or model registration error
    3  hard error during the run (partial report written where one exists)
"""

import argparse
import logging
from enum import IntEnum
from typing import Any, Dict, List, Optional

from horocurv import __version__
from horocurv.config.loader import load_run_config
from horocurv.core.errors import ConfigError, HorocurvError, ModelRegistrationError
from horocurv.core.riccati import trajectory_rows
from horocurv.core.suite import VerificationManager
from horocurv.infrastructure.metrics.factory import MODEL_DESCRIPTIONS, available_models
from horocurv.infrastructure.metrics.provider import CurvatureMode
from horocurv.infrastructure.reports import get_report_sink, render_csv, render_json
from horocurv.models.config import OutputFormat, RunConfig
from horocurv.models.reports import SCHEMA_VERSION, CheckStatus

logger = logging.getLogger(__name__)


class ExitCode(IntEnum):
    OK = 0
    CHECK_FAILED = 1
    USAGE = 2
    HARD_ERROR = 3


# Flags shared by the run subcommands; None means "not given on the command line"
_RUN_FLAGS = [
    ("--model", dict(help="Model identifier (see `horocurv models`)")),
    ("--dim", dict(type=int, help="Chart dimension (>= 3)")),
    ("--k", dict(type=float, help="Real hyperbolic curvature scale; curvature is -k^2")),
    ("--amplitude", dict(type=float, help="Perturbation amplitude of the perturbed model")),
    ("--curvature-mode", dict(choices=[m.value for m in CurvatureMode], help="Curvature backend")),
    ("--samples", dict(type=int, help="Sampled directions")),
    ("--mc-count", dict(type=int, help="Monte-Carlo directions of the Fubini check")),
    ("--seed", dict(type=int, help="Random seed")),
    ("--step", dict(type=float, help="Integrator step (<= 1e-2)")),
    ("--horizon", dict(type=float, help="Backward Riccati horizon T")),
    ("--tol", dict(type=float, help="Riccati convergence tolerance")),
    ("--window", dict(type=float, help="Trailing window of the trajectory residual checks")),
    ("--spread-samples", dict(type=int, help="Sampled directions of the sectional spread check")),
    ("--workers", dict(type=int, help="Concurrent per-direction tasks")),
    ("--format", dict(choices=[f.value for f in OutputFormat], help="Report format")),
    ("--out", dict(help="Output path (stdout when omitted)")),
]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="horocurv",
        description="Horosphere curvature via the matrix Riccati equation, with verification suites",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help="Log level (default from HOROCURV_LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True)

    models = sub.add_parser("models", help="List registered models")
    models.add_argument("--format", choices=[f.value for f in OutputFormat], default=None)
    models.add_argument("--out", default=None)

    for name, summary in [
        ("verify", "Run the verification suite on one model"),
        ("scan", "Tabulate horosphere geometry over sampled directions"),
        ("riccati", "Single-direction Riccati run with its trajectory"),
    ]:
        cmd = sub.add_parser(name, help=summary)
        cmd.add_argument("--config", default=None, help="Key-value config file (default: $HOROCURV_CONFIG)")
        for flag, options in _RUN_FLAGS:
            cmd.add_argument(flag, default=None, **options)
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    keys = [flag.lstrip("-").replace("-", "_") for flag, _ in _RUN_FLAGS]
    return {key: getattr(args, key, None) for key in keys}


def _render(config: RunConfig, payload: Dict[str, Any], rows: List[Dict[str, Any]]) -> str:
    if config.format is OutputFormat.CSV:
        return render_csv(rows)
    return render_json(payload)


async def _emit(text: str, out: Optional[str]) -> None:
    await get_report_sink(out).write(text)


async def cmd_models(args: argparse.Namespace) -> ExitCode:
    """List the registry"""
    rows = [{"name": name, **MODEL_DESCRIPTIONS[name]} for name in available_models()]
    fmt = OutputFormat(args.format or OutputFormat.JSON.value)
    if fmt is OutputFormat.CSV:
        text = render_csv(
            [
                {
                    "name": r["name"],
                    "summary": r["summary"],
                    "parameters": "; ".join(r["parameters"]),
                    "locally_symmetric": r["locally_symmetric"],
                }
                for r in rows
            ]
        )
    else:
        text = render_json({"schema_version": SCHEMA_VERSION, "models": rows})
    await _emit(text, args.out)
    return ExitCode.OK


async def cmd_verify(config: RunConfig) -> ExitCode:
    """Run the verification suite and write its report"""
    manager = VerificationManager(config)
    report = await manager.run_suite()
    text = _render(config, report.to_json_dict(), report.csv_rows())
    await _emit(text, config.out)
    if not report.complete:
        return ExitCode.HARD_ERROR
    return ExitCode.OK if report.status is CheckStatus.PASS else ExitCode.CHECK_FAILED


async def cmd_scan(config: RunConfig) -> ExitCode:
    """One row per sampled direction"""
    manager = VerificationManager(config)
    reports = await manager.scan()
    rows = [r.csv_row() for r in reports]
    payload = {
        "schema_version": SCHEMA_VERSION,
        "model": manager.model.describe(),
        "config": config.model_dump(mode="json"),
        "rows": [r.model_dump(mode="json") for r in reports],
    }
    await _emit(_render(config, payload, rows), config.out)
    return ExitCode.OK


async def cmd_riccati(config: RunConfig) -> ExitCode:
    """Single-direction deep dive; CSV output is the trajectory"""
    manager = VerificationManager(config)
    v, run, report = await manager.riccati_detail()
    payload = {
        "schema_version": SCHEMA_VERSION,
        "model": manager.model.describe(),
        "config": config.model_dump(mode="json"),
        "run": run.model_dump(mode="json"),
        "horosphere": report.model_dump(mode="json"),
    }
    await _emit(_render(config, payload, trajectory_rows(run)), config.out)
    return ExitCode.OK


_RUN_COMMANDS = {
    "verify": cmd_verify,
    "scan": cmd_scan,
    "riccati": cmd_riccati,
}


async def dispatch(args: argparse.Namespace) -> ExitCode:
    """Run the parsed command and map errors to exit codes"""
    try:
        if args.command == "models":
            return await cmd_models(args)
        config = load_run_config(_overrides(args), args.config)
        logger.info(f"Running {args.command} on {config.model}")
        return await _RUN_COMMANDS[args.command](config)
    except (ConfigError, ModelRegistrationError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return ExitCode.USAGE
    except HorocurvError as e:
        logger.error(f"{args.command} aborted: {type(e).__name__}: {e}")
        return ExitCode.HARD_ERROR
    except OSError as e:
        logger.error(f"Report write failed: {e}")
        return ExitCode.HARD_ERROR
