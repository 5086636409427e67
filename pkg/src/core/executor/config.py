"""Execution configuration."""

import enum
from dataclasses import dataclass
from typing import Optional

from core.solver.base import SolverBackend
from core.templates.store import TemplateStore


class ExecMode(str, enum.Enum):
    CLASSIC = "classic"
    COMPACT = "compact"


class ChooseStrategy(str, enum.Enum):
    """How to pick one of several templates entered at the same location."""

    FIRST = "first"
    RANDOM = "random"


@dataclass
class ExecConfig:
    """One run of the engine.

    ``templates`` is only consulted in compact mode; a missing store behaves
    as an empty one. ``max_visits`` cuts successors whose path visits a
    location more often than that. Without a ``solver`` the run builds one
    from the default settings and closes it afterwards.
    """

    mode: ExecMode = ExecMode.CLASSIC
    build_tree: bool = True
    budget: int = 500
    solver: Optional[SolverBackend] = None
    templates: Optional[TemplateStore] = None
    choose: ChooseStrategy = ChooseStrategy.FIRST
    seed: Optional[int] = None
    max_visits: Optional[int] = None

    def __post_init__(self) -> None:
        if self.budget <= 0:
            raise ValueError(f"budget must be positive, got {self.budget}")
        if self.max_visits is not None and self.max_visits < 1:
            raise ValueError(f"max_visits must be at least 1, got {self.max_visits}")
