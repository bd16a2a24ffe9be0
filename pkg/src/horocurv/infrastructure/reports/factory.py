"""Report Sink Factory

Chooses the report destination from the run's ``out`` setting.
"""

import logging
from typing import Optional

from horocurv.infrastructure.reports.file_sink import FileReportSink
from horocurv.infrastructure.reports.provider import ReportSink
from horocurv.infrastructure.reports.stdout_sink import StdoutReportSink

logger = logging.getLogger(__name__)


def get_report_sink(out: Optional[str] = None) -> ReportSink:
    """File sink for a path, stdout sink otherwise.

    Args:
        out: Output path, or None / "-" for stdout

    Returns:
        ReportSink instance
    """
    if out is None or out == "-":
        return StdoutReportSink()
    logger.debug(f"Report sink: {out}")
    return FileReportSink(out)
