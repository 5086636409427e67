"""Bounded enumeration oracle.

Searches parameter values, scalar symbol values and array cells inside a small
box. A witness is a genuine model; failing to find one only proves Unsat when
the box covers the whole domain (boolean symbols, no parameters, no integers).
"""

import itertools
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple, Union

from models.errors import DomainTooLarge
from models.symbolic import Sort, SymExpr, Symbol

from .base import ArrayModel, Model, ModelValue, SatQuery, SatResult, SolverBackend, Verdict
from .evaluator import evaluate


@dataclass(frozen=True)
class BoundedDomain:
    int_range: Tuple[int, int] = (-4, 4)
    param_max: int = 3
    array_index_max: int = 4

    def __post_init__(self) -> None:
        if self.int_range[0] > self.int_range[1]:
            raise ValueError("int_range must satisfy lo <= hi")
        if self.param_max < 0 or self.array_index_max < 0:
            raise ValueError("param_max and array_index_max must not be negative")

    @property
    def int_values(self) -> range:
        return range(self.int_range[0], self.int_range[1] + 1)


class _MissingCell(Exception):
    def __init__(self, symbol: Symbol, index: int):
        self.symbol = symbol
        self.index = index


Cells = Dict[Symbol, Dict[int, int]]


class BoundedSolver(SolverBackend):
    name = "bounded"

    def __init__(
        self,
        domain: Optional[BoundedDomain] = None,
        max_assignments: int = 200_000,
        dump_dir: Optional[Union[str, Path]] = None,
    ):
        super().__init__(dump_dir)
        self.domain = domain or BoundedDomain()
        self.max_assignments = max_assignments
        self._tried = 0

    def _check(self, query: SatQuery) -> SatResult:
        self._tried = 0
        arrays = [s for s in query.symbols if s.sort is Sort.ARRAY]
        scalars = [s for s in query.symbols if s.sort is not Sort.ARRAY]

        for model in self._assignments(query, scalars):
            found = self._search_cells(query.formula, model, {s: {} for s in arrays})
            if found is not None:
                return SatResult(Verdict.SAT, found, self.name)

        exhaustive = not query.parameters and not arrays and all(s.sort is Sort.BOOL for s in scalars)
        return SatResult(Verdict.UNSAT if exhaustive else Verdict.UNKNOWN, backend=self.name)

    def _assignments(self, query: SatQuery, scalars: List[Symbol]) -> Iterator[Model]:
        param_values = range(self.domain.param_max + 1)
        choices: List[range | Tuple[bool, ...]] = [
            (False, True) if s.sort is Sort.BOOL else self.domain.int_values for s in scalars
        ]
        for params in itertools.product(param_values, repeat=len(query.parameters)):
            for values in itertools.product(*choices):
                model: Model = dict(zip(query.parameters, params))
                model.update(zip(scalars, values))
                yield model

    def _tick(self) -> None:
        self._tried += 1
        if self._tried > self.max_assignments:
            raise DomainTooLarge(self.max_assignments)

    def _array(self, symbol: Symbol, entries: Dict[int, int]) -> ArrayModel:
        def missing(index: int) -> int:
            if 0 <= index <= self.domain.array_index_max:
                raise _MissingCell(symbol, index)
            return 0

        return ArrayModel(dict(entries), resolver=missing)

    def _search_cells(self, formula: SymExpr, model: Model, cells: Cells) -> Optional[Model]:
        """Depth-first search over the array cells the formula actually reads."""
        self._tick()
        full: Dict[Symbol, ModelValue] = {s: self._array(s, e) for s, e in cells.items()}
        try:
            value = evaluate(formula, {**model, **full})
        except _MissingCell as miss:
            for v in self.domain.int_values:
                branch = {s: dict(e) for s, e in cells.items()}
                branch[miss.symbol][miss.index] = v
                found = self._search_cells(formula, model, branch)
                if found is not None:
                    return found
            return None
        if not value:
            return None
        result: Model = dict(model)
        result.update({s: ArrayModel(dict(e)) for s, e in cells.items()})
        return result


def check_sat_bounded(
    query: Union[SatQuery, SymExpr], domain: BoundedDomain, max_assignments: int = 200_000
) -> SatResult:
    """One-shot oracle query over ``domain``.

    Raises:
        DomainTooLarge: more than ``max_assignments`` candidates were tried.
    """
    if not isinstance(query, SatQuery):
        query = SatQuery.of(query)
    return BoundedSolver(domain, max_assignments).check(query)
