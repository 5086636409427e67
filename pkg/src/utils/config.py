"""Settings loading: defaults < YAML `settings:` section < .env < CSE_* environment."""

import enum
import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Type, Union

import yaml
from pydantic import ValidationError, field_validator
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict

from models.errors import ConfigError

from .logging import LogEvent, LogRecord, info, warning

PROJECT_ROOT = Path(__file__).resolve().parent.parent.parent


class SolverBackendKind(str, enum.Enum):
    AUTO = "auto"
    EXTERNAL = "external"
    Z3 = "z3"
    BOUNDED = "bounded"


class Settings(BaseSettings):
    """Engine settings with environment-specific overrides."""

    model_config = SettingsConfigDict(env_prefix="CSE_", extra="ignore")

    # Logging
    log_level: str = "WARNING"
    log_file_path: str = ""
    log_color: bool = True
    app_name: str = "compact-symex"

    # Solver
    solver_backend: SolverBackendKind = SolverBackendKind.AUTO
    solver_path: str = "z3"
    solver_args: List[str] = ["-smt2", "-in"]
    solver_timeout_s: float = 5.0
    dump_smt_dir: Optional[str] = None

    # Bounded enumeration oracle
    bounded_int_range: Tuple[int, int] = (-4, 4)
    bounded_param_max: int = 3
    bounded_array_index_max: int = 4
    bounded_max_assignments: int = 200_000

    # Budgets and bounds
    default_budget: int = 500
    default_compact_budget: int = 100
    default_bound: int = 3
    max_cycle_len: int = 16
    part_budget: int = 256

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: Type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        # YAML values arrive as init kwargs; the environment must win over them
        return env_settings, dotenv_settings, init_settings, file_secret_settings

    @field_validator("log_level")
    @classmethod
    def check_log_level(cls, v: str) -> str:
        level = v.upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"unknown log level {v!r}")
        return level

    @field_validator("log_file_path")
    @classmethod
    def resolve_log_file_path(cls, v: str) -> str:
        if v and not os.path.isabs(v):
            return str(PROJECT_ROOT / v)
        return v

    @field_validator("bounded_int_range")
    @classmethod
    def check_int_range(cls, v: Tuple[int, int]) -> Tuple[int, int]:
        if v[0] > v[1]:
            raise ValueError("bounded_int_range must satisfy lo <= hi")
        return v

    @field_validator(
        "default_budget", "default_compact_budget", "part_budget", "max_cycle_len",
        "bounded_max_assignments",
    )
    @classmethod
    def check_positive(cls, v: int) -> int:
        if v <= 0:
            raise ValueError("must be greater than 0")
        return v

    @field_validator("default_bound", "bounded_param_max", "bounded_array_index_max")
    @classmethod
    def check_non_negative(cls, v: int) -> int:
        if v < 0:
            raise ValueError("must not be negative")
        return v


def _read_yaml_settings(config_path: Path) -> Dict[str, Any]:
    try:
        with open(config_path, "r", encoding="utf-8") as f:
            config = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f"Failed to parse config file {config_path}: {e}") from e
    except OSError as e:
        raise ConfigError(f"Failed to read config file {config_path}: {e}") from e

    if not isinstance(config, dict):
        raise ConfigError(f"Config file {config_path} must contain a mapping")
    settings_config = config.get("settings", {}) or {}
    if not isinstance(settings_config, dict):
        raise ConfigError(f"'settings' in {config_path} must be a mapping")
    return settings_config


def load_settings(config_path: Optional[Union[str, Path]] = None) -> Settings:
    """Load settings from a YAML file, letting CSE_* environment variables override it.

    Args:
        config_path: Path to the YAML file. Relative paths resolve against the
            current directory. ``None`` means ``config.yaml`` at the project
            root, silently skipped when absent.

    Raises:
        ConfigError: The file exists but is malformed or holds invalid values.
    """
    explicit = config_path is not None
    if config_path is None:
        path = PROJECT_ROOT / "config.yaml"
    else:
        path = Path(config_path).expanduser()
        if not path.is_absolute():
            path = Path.cwd() / path

    values: Dict[str, Any] = {}
    if path.exists():
        values = _read_yaml_settings(path)
    elif explicit:
        warning(LogRecord(
            event=LogEvent.CONFIG_NOT_FOUND.value,
            message=f"Config file {path} not found, using default settings",
            data={"path": str(path)},
        ))

    try:
        settings = Settings(**values)
    except ValidationError as e:
        raise ConfigError(f"Invalid settings in {path}: {e}") from e

    info(LogRecord(
        event=LogEvent.CONFIG_LOADED.value,
        message="Settings loaded",
        data={"path": str(path) if path.exists() else None, "solver_backend": settings.solver_backend.value},
    ))
    return settings
