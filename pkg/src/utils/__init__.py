"""
Utility modules for the compact symbolic execution engine.

This package contains:
- Logging utilities with colored console output and JSON formatting
- Settings loading (YAML file, .env, environment variables)
"""

# Re-export commonly used logging functions
from .logging import (
    LogRecord, LogEvent, LogError,
    ColoredConsoleFormatter, JSONFormatter,
    init_logger, debug, info, warning, error, critical,
)
from .config import Settings, SolverBackendKind, load_settings, PROJECT_ROOT

__all__ = [
    # Logging utilities
    "LogRecord", "LogEvent", "LogError",
    "ColoredConsoleFormatter", "JSONFormatter",
    "init_logger", "debug", "info", "warning", "error", "critical",
    # Configuration
    "Settings", "SolverBackendKind", "load_settings", "PROJECT_ROOT",
]
