"""
Tests for the satisfiability backends and their SMT-LIB rendering.
"""

import pytest

from core.executor import ExecConfig, ExecMode, execute
from core.solver import (
    BoundedDomain,
    BoundedSolver,
    ExternalSolver,
    RecordingSolver,
    SatQuery,
    Verdict,
    Z3Solver,
    check_sat_bounded,
    create_solver,
    evaluate,
    formulas_equivalent,
    to_smtlib,
)
from core.templates import compute_templates
from models import (
    BinaryOperator,
    DomainTooLarge,
    InitialMemory,
    IntConst,
    ParamKind,
    Parameter,
    SolverProcessError,
    UnsupportedSort,
)
from models.symbolic import mk_and, mk_binary, mk_forall, mk_not, mk_select
from utils.config import Settings, SolverBackendKind
from framework import CountingSolver, ScriptedSolver, requires_z3_binary, single_function

PROGRAM = single_function(
    ["a -> b : ret A[i] + j"],
    params="A: int[], i: int, j: int, flag: bool",
    exit="b",
)
THETA0 = InitialMemory(PROGRAM)
A, I, J, FLAG = THETA0["A"], THETA0["i"], THETA0["j"], THETA0["flag"]
K1 = Parameter(ParamKind.KAPPA, 1)
T0 = Parameter(ParamKind.TAU, 0)


def gt(a, b):
    return mk_binary(BinaryOperator.GT, a, b)


def lt(a, b):
    return mk_binary(BinaryOperator.LT, a, b)


def eq(a, b):
    return mk_binary(BinaryOperator.EQ, a, b)


class TestSmtLib:
    """Rendering queries as SMT-LIB scripts."""

    def test_scalar_query(self):
        """Integer symbols are declared as constants."""
        text = to_smtlib(SatQuery.of(gt(I, IntConst(3))))
        assert text == (
            "(set-logic ALL)\n"
            f"(declare-fun a{I.index} () Int)\n"
            f"(assert (> a{I.index} 3))\n"
            "(check-sat)\n"
            "(get-model)\n"
        )

    def test_parameters_are_non_negative(self):
        """Every parameter comes with a non-negativity assertion."""
        text = to_smtlib(SatQuery.of(lt(K1, I)))
        assert "(declare-fun k1 () Int)" in text
        assert "(assert (>= k1 0))" in text

    def test_arrays_are_functions(self):
        """Array symbols become uninterpreted Int → Int functions."""
        text = to_smtlib(SatQuery.of(eq(mk_select(A, I), IntConst(-2))))
        assert f"(declare-fun a{A.index} (Int) Int)" in text
        assert f"(= (a{A.index} a{I.index}) (- 2))" in text

    def test_quantifier(self):
        """Bounded quantifiers render as guarded foralls."""
        forall = mk_forall(T0, IntConst(0), K1, lt(T0, I))
        text = to_smtlib(SatQuery.of(forall))
        assert "(forall ((t0 Int)) (=> (and (<= 0 t0) (< t0 k1))" in text

    def test_array_value_unsupported(self):
        """Whole arrays cannot be compared."""
        with pytest.raises(UnsupportedSort):
            to_smtlib(SatQuery.of(A))


class TestZ3Solver:
    """The in-process z3 backend."""

    def test_sat_with_model(self, solver):
        """A satisfiable query comes with a model that satisfies it."""
        result = solver.check_formula(mk_and(gt(I, IntConst(3)), lt(I, IntConst(6))))
        assert result.verdict is Verdict.SAT
        assert 3 < result.model[I] < 6

    def test_unsat(self, solver):
        """Contradictory bounds are unsatisfiable."""
        result = solver.check_formula(mk_and(gt(I, IntConst(3)), lt(I, IntConst(2))))
        assert result.verdict is Verdict.UNSAT
        assert result.model is None

    def test_parameters_range_over_naturals(self, solver):
        """Parameters are never negative."""
        assert solver.check_formula(lt(K1, IntConst(0))).verdict is Verdict.UNSAT

    def test_parameter_shortcut(self, solver):
        """A query true with every parameter at 0 is answered from that instance."""
        forall = mk_forall(T0, IntConst(0), K1, eq(mk_select(A, T0), IntConst(0)))
        result = solver.check_formula(mk_and(forall, eq(mk_select(A, IntConst(0)), IntConst(1))))
        assert result.verdict is Verdict.SAT
        assert result.model[K1] == 0

    def test_quantified_unsat(self, solver):
        """Quantifiers are decided, not only instantiated."""
        forall = mk_forall(T0, IntConst(0), K1, lt(T0, I))
        query = mk_and(forall, gt(K1, IntConst(0)), lt(I, IntConst(0)))
        assert solver.check_formula(query).verdict is Verdict.UNSAT

    def test_array_model(self, solver):
        """Array reads in the model agree with the query."""
        result = solver.check_formula(eq(mk_select(A, IntConst(2)), IntConst(7)))
        assert result.verdict is Verdict.SAT
        assert result.model[A][2] == 7
        assert evaluate(eq(mk_select(A, IntConst(2)), IntConst(7)), result.model) is True

    def test_boolean_symbols(self, solver):
        """Boolean symbols are declared with the Bool sort."""
        assert solver.check_formula(mk_and(FLAG, mk_not(FLAG))).verdict is Verdict.UNSAT
        assert solver.check_formula(FLAG).model[FLAG] is True

    def test_stats(self):
        """Every query is counted by verdict."""
        with Z3Solver() as backend:
            backend.check_formula(gt(I, IntConst(0)))
            backend.check_formula(mk_and(gt(I, IntConst(0)), lt(I, IntConst(0))))
            assert backend.stats.queries == 2
            assert backend.stats.sat == 1
            assert backend.stats.unsat == 1

    def test_dump_directory(self, tmp_path):
        """With a dump directory every query is written as a script."""
        with Z3Solver(dump_dir=tmp_path) as backend:
            backend.check_formula(gt(I, IntConst(0)))
        dumped = tmp_path / "query-1.smt2"
        assert dumped.exists()
        assert dumped.read_text(encoding="utf-8").startswith("(set-logic ALL)")

    def test_equivalent_formulas(self, solver):
        """i > 3 and ¬(i ≤ 3) are equivalent, i > 3 and i > 4 are not."""
        assert formulas_equivalent(gt(I, IntConst(3)), mk_not(mk_binary(BinaryOperator.LE, I, IntConst(3))), solver)
        assert not formulas_equivalent(gt(I, IntConst(3)), gt(I, IntConst(4)), solver)


class TestBoundedSolver:
    """The bounded enumeration oracle."""

    def test_finds_witness(self, bounded_solver):
        """Witnesses inside the box are found."""
        result = bounded_solver.check_formula(eq(mk_binary(BinaryOperator.ADD, I, I), IntConst(6)))
        assert result.verdict is Verdict.SAT
        assert result.model[I] == 3

    def test_one_shot_query(self):
        """The box decides whether a witness can be found."""
        query = gt(I, IntConst(5))
        assert check_sat_bounded(query, BoundedDomain(int_range=(0, 3))).verdict is Verdict.UNKNOWN
        result = check_sat_bounded(query, BoundedDomain(int_range=(0, 9)))
        assert result.verdict is Verdict.SAT
        assert result.model[I] > 5

    def test_outside_box_is_unknown(self, bounded_solver):
        """Failing to find a witness over the integers proves nothing."""
        assert bounded_solver.check_formula(gt(I, IntConst(10))).verdict is Verdict.UNKNOWN

    def test_booleans_are_exhaustive(self, bounded_solver):
        """Over booleans alone the search is complete."""
        assert bounded_solver.check_formula(mk_and(FLAG, mk_not(FLAG))).verdict is Verdict.UNSAT

    def test_array_cells(self, bounded_solver):
        """Array cells are searched only where the formula reads them."""
        query = mk_and(eq(mk_select(A, IntConst(1)), IntConst(2)), eq(mk_select(A, IntConst(3)), IntConst(-1)))
        result = bounded_solver.check_formula(query)
        assert result.verdict is Verdict.SAT
        assert result.model[A][1] == 2
        assert result.model[A][3] == -1

    def test_parameters(self, bounded_solver):
        """Parameter values come from 0..param_max."""
        result = bounded_solver.check_formula(eq(K1, IntConst(2)))
        assert result.verdict is Verdict.SAT
        assert result.model[K1] == 2

    def test_domain_too_large(self):
        """Enumeration stops at the assignment limit."""
        backend = BoundedSolver(BoundedDomain(), max_assignments=5)
        query = gt(mk_binary(BinaryOperator.ADD, I, J), IntConst(100))
        with pytest.raises(DomainTooLarge):
            backend.check_formula(query)

    def test_invalid_domain(self):
        """The integer range must not be empty."""
        with pytest.raises(ValueError):
            BoundedDomain(int_range=(3, -3))

    def test_agrees_with_z3(self, solver, bounded_solver):
        """Both backends agree on a query whose witnesses lie inside the box."""
        query = mk_and(gt(I, J), lt(mk_binary(BinaryOperator.SUB, I, J), IntConst(2)), eq(J, IntConst(-1)))
        assert solver.check_formula(query).verdict is Verdict.SAT
        result = bounded_solver.check_formula(query)
        assert result.verdict is Verdict.SAT
        assert (result.model[I], result.model[J]) == (0, -1)


class TestSolverDoubles:
    """Wrappers used by the engine and the tests."""

    def test_recording_solver(self, solver):
        """Every query and its result are kept in order."""
        recorder = RecordingSolver(solver)
        recorder.check_formula(gt(I, IntConst(0)))
        recorder.check_formula(lt(K1, IntConst(0)))
        assert [r.verdict for _, r in recorder.log] == [Verdict.SAT, Verdict.UNSAT]
        assert recorder.stats.queries == 2

    def test_oracle_agrees_on_engine_queries(self, lin_srch, solver):
        """No query the engine saw as Unsat has a witness in a small box."""
        recorder = RecordingSolver(solver)
        templates = compute_templates(lin_srch, recorder)
        execute(lin_srch, ExecConfig(solver=recorder, budget=100))
        execute(lin_srch, ExecConfig(mode=ExecMode.COMPACT, solver=recorder, templates=templates))
        assert recorder.log
        oracle = BoundedSolver(BoundedDomain(int_range=(-2, 2)))
        for query, result in recorder.log:
            if result.verdict is Verdict.UNSAT:
                assert oracle.check(query).verdict is not Verdict.SAT, query

    def test_scripted_solver(self):
        """Scripted verdicts are returned in order, then the default."""
        backend = ScriptedSolver([Verdict.UNKNOWN, Verdict.UNSAT])
        verdicts = [backend.check_formula(gt(I, IntConst(0))).verdict for _ in range(3)]
        assert verdicts == [Verdict.UNKNOWN, Verdict.UNSAT, Verdict.SAT]

    def test_counting_solver(self, solver):
        """The counting wrapper tallies verdicts of the inner backend."""
        backend = CountingSolver(solver)
        backend.check_formula(gt(I, IntConst(0)))
        assert backend.verdicts[Verdict.SAT] == 1


class TestFactory:
    """Backend selection from settings."""

    def test_bounded(self):
        """The bounded oracle is built from the bounded_* settings."""
        settings = Settings(solver_backend=SolverBackendKind.BOUNDED, bounded_param_max=2)
        backend = create_solver(settings)
        assert isinstance(backend, BoundedSolver)
        assert backend.domain.param_max == 2

    def test_z3(self):
        """The in-process backend takes the configured timeout."""
        backend = create_solver(Settings(solver_backend=SolverBackendKind.Z3, solver_timeout_s=1.5))
        assert isinstance(backend, Z3Solver)
        assert backend.timeout_s == 1.5

    def test_auto_without_binary(self):
        """auto falls back to in-process z3 when the binary is missing."""
        settings = Settings(solver_path="no-such-solver-binary")
        assert isinstance(create_solver(settings), Z3Solver)

    def test_auto_falls_back_when_binary_fails(self, mocker):
        """An auto-selected binary that cannot run hands every query to in-process z3."""
        mocker.patch("core.solver.factory.shutil.which", return_value="/opt/bin/no-such-solver-binary")
        backend = create_solver(Settings(solver_path="no-such-solver-binary"))
        assert isinstance(backend, ExternalSolver)
        assert isinstance(backend.fallback, Z3Solver)
        assert backend.check_formula(gt(I, IntConst(0))).verdict is Verdict.SAT
        assert backend.unavailable
        assert backend.check_formula(mk_and(gt(I, IntConst(0)), lt(I, IntConst(0)))).verdict is Verdict.UNSAT
        backend.close()

    def test_explicit_external_has_no_fallback(self):
        """Asking for the external backend by name surfaces process errors."""
        settings = Settings(solver_backend=SolverBackendKind.EXTERNAL, solver_path="no-such-solver-binary")
        backend = create_solver(settings)
        assert backend.fallback is None
        with pytest.raises(SolverProcessError):
            backend.check_formula(gt(I, IntConst(0)))

    def test_explicit_backend_wins(self):
        """A backend passed explicitly overrides the settings."""
        settings = Settings(solver_backend=SolverBackendKind.Z3)
        assert isinstance(create_solver(settings, SolverBackendKind.BOUNDED), BoundedSolver)


@pytest.mark.external_solver
class TestExternalSolver:
    """The SMT-LIB child process."""

    @requires_z3_binary
    def test_incremental_session(self):
        """Several queries share one process framed by push/pop."""
        with ExternalSolver(timeout_s=10.0) as backend:
            assert backend.check_formula(gt(I, IntConst(0))).verdict is Verdict.SAT
            assert backend.check_formula(mk_and(gt(I, IntConst(0)), lt(I, IntConst(0)))).verdict is Verdict.UNSAT
            assert backend.check_formula(eq(mk_select(A, K1), IntConst(1))).verdict is Verdict.SAT
            assert backend.stats.queries == 3

    @requires_z3_binary
    def test_agrees_with_in_process(self, solver):
        """The external process and in-process z3 give the same verdicts."""
        queries = [
            gt(I, J),
            mk_and(gt(I, J), gt(J, I)),
            mk_and(mk_forall(T0, IntConst(0), K1, lt(T0, I)), gt(K1, IntConst(2)), lt(I, IntConst(2))),
        ]
        with ExternalSolver(timeout_s=10.0) as backend:
            for query in queries:
                assert backend.check_formula(query).verdict is solver.check_formula(query).verdict

    def test_missing_binary(self):
        """A solver that cannot be started is a process error."""
        backend = ExternalSolver(path="no-such-solver-binary")
        with pytest.raises(SolverProcessError):
            backend.check_formula(gt(I, IntConst(0)))
