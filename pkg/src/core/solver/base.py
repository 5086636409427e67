"""Common solver interface.

Queries, verdicts, models and the abstract backend every solver implements.
"""

import enum
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, Optional, Tuple, Union

from models.operators import BinaryOperator
from models.symbolic import (
    TRUE,
    Parameter,
    SymExpr,
    Symbol,
    free_parameters,
    mk_binary,
    mk_not,
    symbols_of,
)
from core.symbolic.valuation import apply_valuation
from utils.logging import LogEvent, LogRecord, debug, info


class Verdict(str, enum.Enum):
    SAT = "sat"
    UNSAT = "unsat"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ArrayModel:
    """Interpretation of an array symbol: explicit entries plus a default."""

    entries: Dict[int, int] = field(default_factory=dict)
    default: int = 0
    # z3 may describe the else-branch as a function of the index
    resolver: Optional[Callable[[int], int]] = field(default=None, compare=False)

    def __getitem__(self, index: int) -> int:
        if index in self.entries:
            return self.entries[index]
        if self.resolver is not None:
            return self.resolver(index)
        return self.default


ModelValue = Union[int, bool, ArrayModel]
Model = Dict[Union[Symbol, Parameter], ModelValue]


@dataclass(frozen=True)
class SatQuery:
    """A boolean formula with its free symbols and (existential, ≥ 0) parameters."""

    formula: SymExpr
    symbols: Tuple[Symbol, ...]
    parameters: Tuple[Parameter, ...]

    @classmethod
    def of(cls, formula: SymExpr) -> "SatQuery":
        return cls(
            formula=formula,
            symbols=tuple(sorted(symbols_of(formula), key=lambda s: s.index)),
            parameters=tuple(sorted(free_parameters(formula), key=lambda p: (p.kind.value, p.index))),
        )


@dataclass(frozen=True)
class SatResult:
    verdict: Verdict
    model: Optional[Model] = None
    backend: str = ""

    @property
    def is_sat(self) -> bool:
        return self.verdict is Verdict.SAT


@dataclass
class SolverStats:
    queries: int = 0
    sat: int = 0
    unsat: int = 0
    unknown: int = 0
    timeouts: int = 0

    def record(self, verdict: Verdict) -> None:
        if verdict is Verdict.SAT:
            self.sat += 1
        elif verdict is Verdict.UNSAT:
            self.unsat += 1
        else:
            self.unknown += 1


class SolverBackend(ABC):
    """A solver handle. Queries are serialised; one handle per engine run."""

    name = "abstract"

    def __init__(self, dump_dir: Optional[Union[str, Path]] = None):
        self.stats = SolverStats()
        self.dump_dir = Path(dump_dir) if dump_dir else None

    def check(self, query: SatQuery) -> SatResult:
        """Decide ``query``, counting it and dumping its script when configured.

        Parameterised queries are first tried with every parameter at 0: the
        instance is quantifier-free and a model for it is a model of the query.
        """
        self.stats.queries += 1
        if self.dump_dir is not None:
            self._dump(query)

        result: Optional[SatResult] = None
        if query.parameters:
            zeros = {p: 0 for p in query.parameters}
            instance = SatQuery.of(apply_valuation(query.formula, zeros))
            shortcut = self._check(instance)
            if shortcut.is_sat:
                model: Model = dict(shortcut.model or {})
                model.update(zeros)
                result = SatResult(Verdict.SAT, model if shortcut.model is not None else None, shortcut.backend)
        if result is None:
            result = self._check(query)

        self.stats.record(result.verdict)
        debug(LogRecord(
            event=LogEvent.SOLVER_QUERY.value,
            message=f"Query {self.stats.queries}: {result.verdict.value}",
            data={"backend": self.name, "verdict": result.verdict.value},
        ))
        return result

    def check_formula(self, formula: SymExpr) -> SatResult:
        return self.check(SatQuery.of(formula))

    @abstractmethod
    def _check(self, query: SatQuery) -> SatResult:
        """Backend-specific decision procedure."""

    def close(self) -> None:
        pass

    def __enter__(self) -> "SolverBackend":
        return self

    def __exit__(self, *exc_info: object) -> None:
        self.close()

    def _dump(self, query: SatQuery) -> None:
        from .smtlib import to_smtlib

        assert self.dump_dir is not None
        self.dump_dir.mkdir(parents=True, exist_ok=True)
        path = self.dump_dir / f"query-{self.stats.queries}.smt2"
        try:
            path.write_text(to_smtlib(query), encoding="utf-8")
        except Exception as e:
            # unsupported sorts still reach _check, which reports them properly
            info(LogRecord(
                event=LogEvent.SMT_DUMPED.value,
                message=f"Could not dump query {self.stats.queries}: {e}",
                data={"path": str(path)},
            ))
            return
        debug(LogRecord(event=LogEvent.SMT_DUMPED.value, message=f"Wrote {path}", data={"path": str(path)}))


def check_sat(query: Union[SatQuery, SymExpr], solver: SolverBackend) -> SatResult:
    if not isinstance(query, SatQuery):
        query = SatQuery.of(query)
    return solver.check(query)


def formulas_equivalent(a: SymExpr, b: SymExpr, solver: SolverBackend) -> bool:
    """True iff ¬(a ↔ b) is unsatisfiable for every parameter value."""
    if a == b:
        return True
    differs = mk_not(mk_binary(BinaryOperator.EQ, a, b))
    if differs == TRUE:
        return False
    return solver.check_formula(differs).verdict is Verdict.UNSAT
