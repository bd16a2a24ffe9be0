"""
horocurv - Main Entry Point

Command-line application for horosphere curvature computations and
verification suites.
"""

import asyncio
import logging
import sys
from typing import List, Optional

from horocurv.api.commands import build_parser, dispatch
from horocurv.config.settings import settings

logger = logging.getLogger(__name__)


def configure_logging(level: Optional[str] = None) -> None:
    """Log to stderr; reports own stdout"""
    logging.basicConfig(
        level=(level or settings.log_level).upper(),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run the command and return its exit code"""
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)
    return int(asyncio.run(dispatch(args)))


def run() -> None:
    """Console-script entry point"""
    sys.exit(main())


if __name__ == "__main__":
    run()
