"""In-process z3 backend fed with the same SMT-LIB text as the external solver."""

from pathlib import Path
from typing import Optional, Union

import z3

from models.errors import SolverError
from models.symbolic import Sort
from utils.logging import LogEvent, LogRecord, warning

from .base import ArrayModel, Model, SatQuery, SatResult, SolverBackend, Verdict
from .smtlib import parameter_name, query_body, symbol_name


class Z3Solver(SolverBackend):
    name = "z3"

    def __init__(self, timeout_s: float = 5.0, dump_dir: Optional[Union[str, Path]] = None):
        super().__init__(dump_dir)
        self.timeout_s = timeout_s

    def _check(self, query: SatQuery) -> SatResult:
        solver = z3.Solver()
        solver.set("timeout", int(self.timeout_s * 1000))
        try:
            solver.add(z3.parse_smt2_string(query_body(query)))
        except z3.Z3Exception as e:
            raise SolverError(f"z3 rejected query: {e}") from e

        answer = solver.check()
        if answer == z3.sat:
            return SatResult(Verdict.SAT, self._model(query, solver.model()), self.name)
        if answer == z3.unsat:
            return SatResult(Verdict.UNSAT, backend=self.name)

        reason = solver.reason_unknown()
        if "timeout" in reason or "canceled" in reason:
            self.stats.timeouts += 1
            warning(LogRecord(
                event=LogEvent.SOLVER_TIMEOUT.value,
                message=f"z3 gave up after {self.timeout_s}s",
                data={"reason": reason},
            ))
        return SatResult(Verdict.UNKNOWN, backend=self.name)

    @staticmethod
    def _model(query: SatQuery, m: z3.ModelRef) -> Model:
        model: Model = {}
        for symbol in query.symbols:
            name = symbol_name(symbol)
            if symbol.sort is Sort.ARRAY:
                fn = z3.Function(name, z3.IntSort(), z3.IntSort())
                model[symbol] = ArrayModel(
                    resolver=lambda i, fn=fn: m.eval(fn(z3.IntVal(i)), model_completion=True).as_long()
                )
            elif symbol.sort is Sort.BOOL:
                model[symbol] = z3.is_true(m.eval(z3.Bool(name), model_completion=True))
            else:
                model[symbol] = m.eval(z3.Int(name), model_completion=True).as_long()
        for parameter in query.parameters:
            model[parameter] = m.eval(z3.Int(parameter_name(parameter)), model_completion=True).as_long()
        return model
