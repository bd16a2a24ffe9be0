"""Atomic File Sink

Writes the report to a temporary file next to the target with aiofiles, then
renames it into place, so readers never observe a partial report.
"""

import logging
import os
import tempfile
from pathlib import Path

import aiofiles
import aiofiles.os

from horocurv.infrastructure.reports.provider import ReportSink

logger = logging.getLogger(__name__)


class FileReportSink(ReportSink):
    """Atomic write to a filesystem path"""

    def __init__(self, path: str):
        self.path = Path(path).resolve()

    async def write(self, text: str) -> str:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(prefix=f".{self.path.name}.", suffix=".tmp", dir=self.path.parent)
        os.close(fd)
        try:
            async with aiofiles.open(tmp_name, "w", encoding="utf-8") as out_file:
                await out_file.write(text)
                await out_file.flush()
            await aiofiles.os.replace(tmp_name, self.path)
        except Exception as e:
            logger.error(f"Report write to {self.path} failed: {e}")
            try:
                await aiofiles.os.remove(tmp_name)
            except OSError:
                pass
            raise

        logger.info(f"Report written to {self.path}")
        return str(self.path)
