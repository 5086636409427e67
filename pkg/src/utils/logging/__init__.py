"""Structured engine logging.

Every record is a ``LogRecord`` tagged with a ``LogEvent``; the console
formatter prints one JSON line per record on stderr and ``JSONFormatter``
writes the full record to the optional log file.
"""

from .formatters import ColoredConsoleFormatter, JSONFormatter, LogError, LogRecord
from .handlers import LogEvent, critical, debug, error, info, init_logger, warning

__all__ = [
    # Records
    "LogEvent", "LogRecord", "LogError",
    # Formatters
    "ColoredConsoleFormatter", "JSONFormatter",
    # Emitting
    "init_logger", "debug", "info", "warning", "error", "critical",
]
