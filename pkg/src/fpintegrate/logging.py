"""Logging for evaluators, oracles and sweeps.

Everything is written to the error stream. Standard output belongs to the
report payload, so a JSON or CSV report can be piped while progress and
conditioning warnings stay visible.
"""

import logging
from typing import TYPE_CHECKING, Any

from rich.logging import RichHandler
from rich.text import Text

from .console import stderr_console

if TYPE_CHECKING:
    from .series import SeriesResult

TRACE = 5
logging.addLevelName(TRACE, "TRACE")

ROOT_LOGGER = "fpintegrate"

__all__ = ["LoggingMixin", "TRACE", "conditioning_warning", "setup_logging"]


def conditioning_warning(
    logger: logging.Logger, label: str, value: complex, hint: str = ""
) -> str:
    """Log and return the warning for a parameter close to an integer."""
    message = f"{label}={value} is close to an integer"
    if hint:
        message = f"{message}; {hint}"
    logger.warning("%s%s", Text.from_markup(":fire: ").plain, message)
    return message


class LoggingMixin:
    """Logger keyed by the defining module, with rich markup helpers."""

    @property
    def logger(self) -> logging.Logger:
        """Return the named logger for this instance."""
        return logging.getLogger(self.__class__.__module__)

    def _log(self, level: int, prefix: str, msg: str, *args: Any, **kwargs: Any) -> None:
        # Markup applies to the prefix only; values may contain brackets
        text = Text.from_markup(prefix) + Text(msg % args if args else msg)
        extra = {"markup": False}
        if not kwargs.pop("highlight", True):
            extra["highlighter"] = None
        self.logger.log(level, text.plain, stacklevel=3, extra=extra, **kwargs)

    def log_trace(self, msg: str, *args: Any, **kwargs: Any) -> None:
        """Per-point detail: single cutoff integrals, raw fit input."""
        self._log(TRACE, ":magnifying_glass_tilted_left: ", msg, *args, **kwargs)

    def log_debug(self, msg: str, *args: Any, **kwargs: Any) -> None:
        """Log a debug message."""
        self._log(logging.DEBUG, ":wrench: ", msg, *args, **kwargs)

    def log_debug_section(self, msg: str, *args: Any, **kwargs: Any) -> None:
        """Log a debug message as a section header."""
        self._log(logging.DEBUG, ":wrench: ──── ", f"{msg} ────", *args, **kwargs)

    def log_warning(self, msg: str, *args: Any, **kwargs: Any) -> None:
        """Log a warning message."""
        self._log(logging.WARNING, ":fire: ", msg, *args, **kwargs)

    def log_series(self, label: str, result: "SeriesResult") -> None:
        """Summarise a summed series at debug level."""
        self.log_debug(
            "%s = %s after %d terms (tail %.1e, %s)",
            label,
            result.value,
            result.terms_used,
            result.tail_estimate,
            result.status.value,
        )

    def warn_near_integer(self, label: str, value: complex, hint: str = "") -> str:
        """Log the conditioning warning for ``value`` and return its text."""
        return conditioning_warning(self.logger, label, value, hint)


def setup_logging(quiet=False, trace=False, verbose=False) -> None:
    """Route package logs and Python warnings through rich on stderr.

    ``--quiet`` keeps errors only, ``--verbose`` shows debug and ``--trace``
    everything down to single oracle evaluations. The default is warnings,
    which include conditioning warnings for near-integer parameters.
    """
    handler = RichHandler(
        level=TRACE,
        console=stderr_console,
        omit_repeated_times=False,
        show_path=False,
        rich_tracebacks=True,
    )

    # scipy reports IntegrationWarning through the warnings module
    logging.captureWarnings(True)

    for name in (ROOT_LOGGER, "py.warnings"):
        logger = logging.getLogger(name)
        for existing in logger.handlers[:]:
            logger.removeHandler(existing)
        logger.addHandler(handler)
        logger.propagate = False

    if quiet:
        level = logging.ERROR
    elif trace:
        level = TRACE
    elif verbose:
        level = logging.DEBUG
    else:
        level = logging.WARNING
    logging.getLogger(ROOT_LOGGER).setLevel(level)
    logging.getLogger("py.warnings").setLevel(max(level, logging.WARNING))
