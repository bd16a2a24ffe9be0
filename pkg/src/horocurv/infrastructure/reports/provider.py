"""Report Sink Interface

Abstract base class for report destinations. The CLI funnels every write
through one sink, so all I/O of a run happens in a single writer.
"""

from abc import ABC, abstractmethod


class ReportSink(ABC):
    """Destination of rendered report text"""

    @abstractmethod
    async def write(self, text: str) -> str:
        """Write the full report text.

        Args:
            text: Rendered report

        Returns:
            Human-readable description of where the report went

        Raises:
            OSError: If the write fails
        """
        pass
