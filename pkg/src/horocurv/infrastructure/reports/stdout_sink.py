"""Standard Output Sink"""

import sys
from typing import Optional, TextIO

from horocurv.infrastructure.reports.provider import ReportSink


class StdoutReportSink(ReportSink):
    """Writes the report to stdout (or another text stream)"""

    def __init__(self, stream: Optional[TextIO] = None):
        self.stream = stream

    async def write(self, text: str) -> str:
        stream = self.stream or sys.stdout
        stream.write(text)
        stream.flush()
        return "<stdout>"
