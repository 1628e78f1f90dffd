"""
Logging setup for the command line.

Library modules only create ``logging.getLogger(__name__)`` loggers; the CLI
decides where records go.
"""

import logging
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler


def setup_logging(verbose: bool = False, debug: bool = False, console: Optional[Console] = None) -> None:
    """Route ``interpiq`` log records to a rich handler on stderr"""
    if debug:
        level = logging.DEBUG
    elif verbose:
        level = logging.INFO
    else:
        level = logging.WARNING

    handler = RichHandler(
        console=console or Console(stderr=True),
        show_path=False,
        rich_tracebacks=True,
        markup=False,
    )
    logging.basicConfig(level=level, format="%(message)s", datefmt="[%X]", handlers=[handler], force=True)
    logging.getLogger("interpiq").setLevel(level)
