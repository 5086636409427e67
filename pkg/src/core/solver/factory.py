"""Solver selection from settings."""

import shutil
from typing import Optional

from utils.config import Settings, SolverBackendKind
from utils.logging import LogEvent, LogRecord, info

from .base import SolverBackend
from .bounded import BoundedDomain, BoundedSolver
from .external import ExternalSolver
from .inprocess import Z3Solver


def create_solver(settings: Settings, backend: Optional[SolverBackendKind] = None) -> SolverBackend:
    """Build the backend named by ``backend`` (or ``settings.solver_backend``).

    ``auto`` picks the external binary when it is on PATH and the in-process
    z3 otherwise. An auto-selected binary that fails at run time hands its
    queries over to in-process z3. The bounded oracle is only used when asked for.
    """
    kind = backend or settings.solver_backend
    fallback: Optional[SolverBackend] = None
    if kind is SolverBackendKind.AUTO:
        if shutil.which(settings.solver_path):
            kind = SolverBackendKind.EXTERNAL
            fallback = Z3Solver(timeout_s=settings.solver_timeout_s)
        else:
            kind = SolverBackendKind.Z3

    solver: SolverBackend
    if kind is SolverBackendKind.EXTERNAL:
        solver = ExternalSolver(
            path=settings.solver_path,
            args=settings.solver_args,
            timeout_s=settings.solver_timeout_s,
            dump_dir=settings.dump_smt_dir,
            fallback=fallback,
        )
    elif kind is SolverBackendKind.Z3:
        solver = Z3Solver(timeout_s=settings.solver_timeout_s, dump_dir=settings.dump_smt_dir)
    else:
        solver = BoundedSolver(
            BoundedDomain(
                int_range=settings.bounded_int_range,
                param_max=settings.bounded_param_max,
                array_index_max=settings.bounded_array_index_max,
            ),
            max_assignments=settings.bounded_max_assignments,
            dump_dir=settings.dump_smt_dir,
        )

    info(LogRecord(
        event=LogEvent.SOLVER_SELECTED.value,
        message=f"Using {solver.name} solver backend",
        data={"backend": solver.name, "fallback": fallback.name if fallback else None},
    ))
    return solver
