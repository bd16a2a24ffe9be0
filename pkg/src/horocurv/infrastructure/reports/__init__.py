"""Report output infrastructure.

Rendering of reports to JSON/CSV text and the sinks that write it.
"""

from horocurv.infrastructure.reports.factory import get_report_sink
from horocurv.infrastructure.reports.provider import ReportSink
from horocurv.infrastructure.reports.render import render_csv, render_json

__all__ = ["get_report_sink", "ReportSink", "render_csv", "render_json"]
