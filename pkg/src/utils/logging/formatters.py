"""Custom logging formatters."""

import dataclasses
import json
import logging
import sys
import traceback
from datetime import datetime
from typing import Any, Dict, Optional, Tuple


@dataclasses.dataclass
class LogError:
    name: str
    message: str
    stack_trace: Optional[str] = None
    args: Optional[Tuple[Any, ...]] = None


@dataclasses.dataclass
class LogRecord:
    event: str
    message: str
    run_id: Optional[str] = None
    data: Optional[Dict[str, Any]] = None
    error: Optional[LogError] = None


def _safe_json_dumps(data: Any) -> str:
    """Serialize to JSON, degrading to ASCII or a placeholder on encoding trouble."""
    try:
        json_str = json.dumps(data, ensure_ascii=False, default=str)
        json_str.encode("utf-8")
        return json_str
    except (UnicodeEncodeError, UnicodeDecodeError):
        try:
            return json.dumps(data, ensure_ascii=True, default=str)
        except Exception:
            return '{"message": "Log formatting error: unable to serialize data"}'
    except Exception:
        return '{"message": "Log formatting error: unable to serialize data"}'


def _error_dict(exc_info: Any) -> Dict[str, Any]:
    exc_type, exc_value, exc_tb = exc_info
    return {
        "name": exc_type.__name__ if exc_type else "UnknownError",
        "message": str(exc_value),
        "stack_trace": "".join(traceback.format_exception(exc_type, exc_value, exc_tb)),
        "args": exc_value.args if hasattr(exc_value, "args") else [],
    }


class ColoredConsoleFormatter(logging.Formatter):
    """Console formatter with color support and simplified output for the CLI."""

    COLORS = {
        "DEBUG": "\033[36m",     # Cyan
        "INFO": "\033[32m",      # Green
        "WARNING": "\033[33m",   # Yellow
        "ERROR": "\033[31m",     # Red
        "CRITICAL": "\033[95m",  # Magenta
    }
    RESET = "\033[0m"

    # Fields worth surfacing from the data payload on the console
    ESSENTIAL_FIELDS = ("location", "template_id", "reason", "verdict", "path")

    def __init__(self, use_colors: bool = True) -> None:
        super().__init__()
        self.use_colors = use_colors

    def format(self, record: logging.LogRecord) -> str:
        log_dict = self._get_simplified_log_dict(record)

        # Diagnostics go to stderr, so that is the stream whose TTY-ness matters
        use_colors = self.use_colors and hasattr(sys.stderr, "isatty") and sys.stderr.isatty()
        if use_colors:
            color = self.COLORS.get(record.levelname, "")
            return f"{color}{_safe_json_dumps(log_dict)}{self.RESET}"
        return _safe_json_dumps(log_dict)

    def _get_simplified_log_dict(self, record: logging.LogRecord) -> Dict[str, Any]:
        log_payload = getattr(record, "log_record", None)
        time = datetime.fromtimestamp(record.created).strftime("%H:%M:%S")

        if not isinstance(log_payload, LogRecord):
            return {"time": time, "level": record.levelname, "message": record.getMessage()}

        message = log_payload.message
        if len(message) > 200:
            message = message[:200] + "..."

        simplified: Dict[str, Any] = {
            "time": time,
            "level": record.levelname,
            "event": log_payload.event,
            "message": message,
        }
        if log_payload.run_id:
            simplified["run_id"] = log_payload.run_id[:8]

        if log_payload.error and record.levelname in ("ERROR", "WARNING", "CRITICAL"):
            simplified["error"] = log_payload.error.name
            if log_payload.error.message != log_payload.message:
                simplified["error_msg"] = log_payload.error.message[:100]

        if log_payload.data and record.levelno >= logging.WARNING:
            for field in self.ESSENTIAL_FIELDS:
                if field in log_payload.data:
                    simplified[field] = log_payload.data[field]

        return simplified


class JSONFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        header: Dict[str, Any] = {
            "timestamp": datetime.fromtimestamp(record.created).isoformat(),
            "level": record.levelname,
            "logger": record.name,
        }
        log_payload = getattr(record, "log_record", None)
        if isinstance(log_payload, LogRecord):
            header["detail"] = dataclasses.asdict(log_payload)
        else:
            header["message"] = record.getMessage()
            if record.exc_info:
                header["error"] = _error_dict(record.exc_info)
        return _safe_json_dumps(header)
