"""Candidate program parts, part programs and templates."""

import enum
from dataclasses import dataclass, field, replace
from typing import Dict, Optional, Tuple

from .program import Edge, Program
from .state import CallStack, SymMemory
from .symbolic import Parameter, SymExpr


class PartKind(str, enum.Enum):
    LOOP = "loop"
    RECURSION = "recursion"


@dataclass(frozen=True)
class CandidatePart:
    """A cycle of one function with its exits.

    For recursion parts the cycle is a path from the function entry to the
    source of ``call_edge``; a meta-edge closes it back to the entry.
    """

    kind: PartKind
    function: str
    cycle: Tuple[str, ...]
    exits: Tuple[str, ...]
    call_edge: Optional[Edge] = None
    function_entry: Optional[str] = None
    function_exit: Optional[str] = None
    rejection: Optional[str] = None

    @property
    def entry(self) -> str:
        return self.cycle[0]

    @property
    def part_id(self) -> str:
        path = "-".join(self.cycle)
        if self.kind is PartKind.RECURSION and self.call_edge is not None:
            return f"rec:{self.function}:{self.call_edge.src}>{self.call_edge.dst}:{path}"
        return f"loop:{self.function}:{path}"


@dataclass(frozen=True)
class PartProgram:
    """The stand-alone program P′ carved out of one part and one exit."""

    program: Program
    new_exit: str
    exit_location: Optional[str]
    origin_map: Dict[str, str] = field(compare=False)
    sinks: Tuple[str, ...]
    part: CandidatePart

    def origin(self, location: str) -> str:
        return self.origin_map.get(location, location)


@dataclass(frozen=True)
class TemplateExit:
    memory: SymMemory
    condition: SymExpr
    stack: CallStack
    location: str
    path_length: int


@dataclass(frozen=True)
class RecursionSummary:
    """Return phase of a recursion template: κ returns through the exit."""

    memory: SymMemory
    exit_location: str
    return_length: int
    step_memory: SymMemory


@dataclass(frozen=True)
class Template:
    template_id: str
    kind: PartKind
    entry: str
    exits: Tuple[TemplateExit, ...]
    parameter: Parameter
    cycle_length: int
    cycle_memory: SymMemory
    recursion: Optional[RecursionSummary] = None

    @property
    def n(self) -> int:
        return len(self.exits)

    def with_exits(self, exits: Tuple[TemplateExit, ...]) -> "Template":
        return replace(self, exits=exits)


class FailureReason(str, enum.Enum):
    INFEASIBLE_CYCLE = "infeasible_cycle"
    UNCLOSED_MEMORY = "unclosed_memory"
    EXIT_OVERLAP = "exit_overlap"
    EXIT_UNSAT = "exit_unsat"
    SOLVER_UNKNOWN = "solver_unknown"
    RETURN_PATH_BRANCHES = "return_path_branches"
    RETURN_PATH_CALLS = "return_path_calls"
    LOCATION_CONDITIONS = "location_conditions"
    MALFORMED_PART = "malformed_part"


@dataclass(frozen=True)
class TemplateFailure:
    part_id: str
    reason: FailureReason
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.part_id}: {self.reason.value}" + (f" ({self.detail})" if self.detail else "")


class Mutation(str, enum.Enum):
    WEAKEN_CONDITION = "weaken_condition"
    PERTURB_COEFFICIENT = "perturb_coefficient"
    SWAP_EXITS = "swap_exits"
