import logging

from rich.console import Console
from rich.logging import RichHandler

_installed = False


def setup_logging(verbose: bool = False) -> None:
    """Attach a RichHandler on stderr to the package logger (idempotent)"""
    global _installed
    logger = logging.getLogger("combpol")
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)
    if _installed:
        return
    handler = RichHandler(
        console=Console(stderr=True),
        show_path=False,
        rich_tracebacks=True,
        markup=False,
    )
    handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
    logger.addHandler(handler)
    _installed = True
