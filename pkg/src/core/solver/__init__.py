"""Satisfiability backends: external SMT-LIB process, in-process z3, bounded oracle."""

from .base import (
    ArrayModel,
    Model,
    SatQuery,
    SatResult,
    SolverBackend,
    SolverStats,
    Verdict,
    check_sat,
    formulas_equivalent,
)
from .smtlib import to_smtlib, query_body
from .evaluator import evaluate
from .external import ExternalSolver
from .inprocess import Z3Solver
from .bounded import BoundedDomain, BoundedSolver, check_sat_bounded
from .recording import RecordingSolver
from .factory import create_solver

__all__ = [
    "ArrayModel", "Model", "SatQuery", "SatResult", "SolverBackend", "SolverStats", "Verdict",
    "check_sat", "formulas_equivalent",
    "to_smtlib", "query_body", "evaluate",
    "ExternalSolver", "Z3Solver", "BoundedDomain", "BoundedSolver", "check_sat_bounded", "RecordingSolver",
    "create_solver",
]
