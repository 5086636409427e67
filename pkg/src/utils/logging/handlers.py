"""Logging handlers and utility functions."""

import enum
import logging
import traceback
from typing import Optional

from .formatters import LogError, LogRecord


class LogEvent(enum.Enum):
    # Frontend events
    PROGRAM_PARSED = "program_parsed"
    PROGRAM_VALIDATED = "program_validated"
    PROGRAM_INVALID = "program_invalid"

    # Template detection and computation
    PART_DETECTED = "part_detected"
    PART_REJECTED = "part_rejected"
    PART_PROGRAM_BUILT = "part_program_built"
    TEMPLATE_COMPUTED = "template_computed"
    TEMPLATE_FAILED = "template_failed"

    # Execution events
    EXECUTION_STARTED = "execution_started"
    EXECUTION_FINISHED = "execution_finished"
    TEMPLATE_INSTANTIATED = "template_instantiated"
    RECURSION_RETURN = "recursion_return"
    SUCCESSOR_PRUNED = "successor_pruned"
    BUDGET_EXHAUSTED = "budget_exhausted"

    # Solver events
    SOLVER_SELECTED = "solver_selected"
    SOLVER_SPAWNED = "solver_spawned"
    SOLVER_QUERY = "solver_query"
    SOLVER_UNKNOWN = "solver_unknown"
    SOLVER_TIMEOUT = "solver_timeout"
    SOLVER_PROCESS_ERROR = "solver_process_error"
    SMT_DUMPED = "smt_dumped"

    # Harness events
    DIFF_STARTED = "diff_started"
    DIFF_MISMATCH = "diff_mismatch"
    DIFF_FINISHED = "diff_finished"
    EXPORT_WRITTEN = "export_written"

    # Configuration and CLI
    CONFIG_LOADED = "config_loaded"
    CONFIG_LOAD_FAILED = "config_load_failed"
    CONFIG_NOT_FOUND = "config_not_found"
    CLI_FAILURE = "cli_failure"


_logger: Optional[logging.Logger] = None


def init_logger(app_name: str = "compact-symex") -> None:
    """Initialize the logger for this module."""
    global _logger
    _logger = logging.getLogger(app_name)


def _log(level: int, record: LogRecord, exc: Optional[BaseException] = None) -> None:
    if _logger is None:
        init_logger()
    assert _logger is not None

    try:
        if exc is not None:
            record.error = LogError(
                name=type(exc).__name__,
                message=str(exc),
                stack_trace="".join(
                    traceback.format_exception(type(exc), exc, exc.__traceback__)
                ),
                args=tuple(exc.args) if hasattr(exc, "args") else tuple(),
            )
            if not record.message:
                record.message = str(exc) or "An unspecified error occurred"

        safe_message = record.message
        try:
            safe_message.encode("utf-8")
        except (UnicodeEncodeError, UnicodeDecodeError):
            safe_message = safe_message.encode("ascii", errors="replace").decode("ascii")

        _logger.log(level=level, msg=safe_message, extra={"log_record": record})
    except Exception:
        # Last resort: plain logging without the structured payload
        try:
            logging.getLogger("fallback").log(level, f"Log error: {record.message}")
        except Exception:
            pass


def debug(record: LogRecord) -> None:
    """Log a debug message."""
    _log(logging.DEBUG, record)


def info(record: LogRecord) -> None:
    """Log an info message."""
    _log(logging.INFO, record)


def warning(record: LogRecord, exc: Optional[BaseException] = None) -> None:
    """Log a warning message."""
    _log(logging.WARNING, record, exc=exc)


def error(record: LogRecord, exc: Optional[BaseException] = None) -> None:
    """Log an error message."""
    _log(logging.ERROR, record, exc=exc)


def critical(record: LogRecord, exc: Optional[BaseException] = None) -> None:
    """Log a critical message."""
    _log(logging.CRITICAL, record, exc=exc)
