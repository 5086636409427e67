"""Equivalence of parameter-free program states."""

import enum
from typing import Collection, List, Tuple

from models.state import Frame, ProgramState, RecMarker, StackRecord, SymMemory, Wildcard
from models.symbolic import FALSE, BoolConst, IntConst, Sort, SymExpr, mk_binary, mk_not, mk_or, sort_of
from models.operators import BinaryOperator
from core.solver.base import SolverBackend, Verdict
from utils.logging import LogEvent, LogRecord, warning


class EquivalenceMode(str, enum.Enum):
    FULL = "full"
    GLOBALS_ONLY = "globals_only"


def _collect(a: SymExpr, b: SymExpr, pairs: List[Tuple[SymExpr, SymExpr]]) -> bool:
    """Queue ``a ≡ b`` for the solver; False when they certainly differ."""
    if a == b:
        return True
    if sort_of(a) is Sort.ARRAY or sort_of(b) is Sort.ARRAY:
        return False
    if isinstance(a, (IntConst, BoolConst)) and isinstance(b, (IntConst, BoolConst)):
        return False
    pairs.append((a, b))
    return True


def _collect_memory(
    a: SymMemory, b: SymMemory, names: Collection[str], pairs: List[Tuple[SymExpr, SymExpr]]
) -> bool:
    for name in names:
        left, right = a.get(name), b.get(name)
        if left is None or right is None:
            if left is not right:
                return False
            continue
        if not _collect(left, right, pairs):
            return False
    return True


def _collect_record(a: StackRecord, b: StackRecord, pairs: List[Tuple[SymExpr, SymExpr]]) -> bool:
    if isinstance(a, Wildcard) or isinstance(b, Wildcard):
        return True
    if isinstance(a, RecMarker) or isinstance(b, RecMarker):
        return a == b
    assert isinstance(a, Frame) and isinstance(b, Frame)
    if (a.return_location, a.function, a.destination) != (b.return_location, b.function, b.destination):
        return False
    if set(a.sigma) != set(b.sigma):
        return False
    return _collect_memory(a.sigma, b.sigma, list(a.sigma), pairs)


def states_equivalent(
    s: ProgramState,
    t: ProgramState,
    solver: SolverBackend,
    mode: EquivalenceMode = EquivalenceMode.FULL,
    global_names: Collection[str] = (),
) -> bool:
    """Same location, matching stacks, equivalent conditions and memories.

    In ``globals_only`` mode memories are compared on ``global_names`` only.
    Wildcard records match any single record. All remaining comparisons are
    decided by one solver query.
    """
    if s.location != t.location or len(s.stack) != len(t.stack):
        return False

    pairs: List[Tuple[SymExpr, SymExpr]] = []
    if mode is EquivalenceMode.FULL:
        names = set(s.memory) | set(t.memory)
    else:
        names = set(global_names)
    if not _collect_memory(s.memory, t.memory, sorted(names), pairs):
        return False
    for a, b in zip(s.stack, t.stack):
        if not _collect_record(a, b, pairs):
            return False
    if not _collect(s.condition, t.condition, pairs):
        return False
    if not pairs:
        return True

    differs: SymExpr = FALSE
    for left, right in pairs:
        differs = mk_or(differs, mk_not(mk_binary(BinaryOperator.EQ, left, right)))
    result = solver.check_formula(differs)
    if result.verdict is Verdict.UNKNOWN:
        warning(LogRecord(
            event=LogEvent.SOLVER_UNKNOWN.value,
            message=f"Equivalence of states at {s.location} undecided, treating them as different",
            data={"location": s.location},
        ))
    return result.verdict is Verdict.UNSAT
