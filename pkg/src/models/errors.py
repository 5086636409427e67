"""Exception hierarchy and structural violation models."""

import enum
from typing import Optional

from pydantic import BaseModel


class CseError(Exception):
    """Base class for every error raised by the engine."""


# ---------------------------------------------------------------- frontend

class SourceError(CseError):
    """An error tied to a position in program text."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.message = message
        self.line = line
        self.column = column
        if line is not None:
            super().__init__(f"{line}:{column if column is not None else 0}: {message}")
        else:
            super().__init__(message)


class ParseError(SourceError):
    pass


class CseNameError(SourceError):
    """Duplicate or unknown name."""


class CseTypeError(SourceError):
    """Ill-typed expression or action."""


class UnknownLocation(CseError):
    def __init__(self, location: str):
        self.location = location
        super().__init__(f"Unknown location: {location}")


# ---------------------------------------------------------------- symbolic core

class SortError(CseError):
    pass


class UnboundParameter(CseError):
    def __init__(self, parameter: str):
        self.parameter = parameter
        super().__init__(f"Valuation does not define parameter {parameter}")


# ---------------------------------------------------------------- solver

class SolverError(CseError):
    pass


class SolverProcessError(SolverError):
    """The solver child process could not be spawned or broke the protocol."""


class UnsupportedSort(SolverError):
    pass


class DomainTooLarge(SolverError):
    def __init__(self, limit: int):
        self.limit = limit
        super().__init__(f"Bounded enumeration exceeded {limit} assignments")


# ---------------------------------------------------------------- templates

class ExitOnCycle(CseError):
    pass


class MalformedPart(CseError):
    pass


class NonTermination(CseError):
    def __init__(self, part_id: str, budget: int):
        self.part_id = part_id
        self.budget = budget
        super().__init__(f"Part program {part_id} did not finish within {budget} states")


# ---------------------------------------------------------------- executor

class StuckState(CseError):
    def __init__(self, location: str):
        self.location = location
        super().__init__(f"No out-edge at non-final location {location}")


class LocationMismatch(CseError):
    def __init__(self, location: str, expected: str):
        self.location = location
        self.expected = expected
        super().__init__(f"State at {location} cannot instantiate a template entered at {expected}")


class MarkerMismatch(CseError):
    pass


# ---------------------------------------------------------------- config

class ConfigError(CseError):
    pass


# ---------------------------------------------------------------- structural validation

class ViolationKind(str, enum.Enum):
    NO_START_FUNCTION = "no_start_function"
    UNKNOWN_START_FUNCTION = "unknown_start_function"
    START_FUNCTION_CALLED = "start_function_called"
    DUPLICATE_NAME = "duplicate_name"
    ENTRY_HAS_IN_EDGE = "entry_has_in_edge"
    EXIT_HAS_OUT_EDGE = "exit_has_out_edge"
    EDGE_OUTSIDE_FUNCTION = "edge_outside_function"
    OUT_DEGREE = "out_degree"
    MIXED_OUT_EDGES = "mixed_out_edges"
    GUARD_DEGREE = "guard_degree"
    GUARDS_NOT_NEGATED = "guards_not_negated"
    CALL_AT_ENTRY_OR_EXIT = "call_at_entry_or_exit"
    DEAD_END = "dead_end"


class Violation(BaseModel):
    kind: ViolationKind
    message: str
    element: str
