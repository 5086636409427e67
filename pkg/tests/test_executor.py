"""
Tests for classic and compact symbolic execution.
"""

import pytest

from core.executor import (
    ChooseStrategy,
    ExecConfig,
    ExecMode,
    LinearDepth,
    SymExecTree,
    classic_successors,
    execute,
    initial_state,
    instantiate_recursion_entry,
    instantiate_recursion_return,
    instantiate_template,
)
from core.solver import Verdict
from core.symbolic import state_parameters
from core.templates import TemplateStore, compute_templates
from models import (
    TRUE,
    Frame,
    InitialMemory,
    IntConst,
    LocationMismatch,
    MalformedPart,
    MarkerMismatch,
    ParamKind,
    Parameter,
    ProgramState,
    RecMarker,
    StuckState,
)
from harness import trees_isomorphic
from framework import CountingSolver, ScriptedSolver, corpus_names, load_corpus

K1 = Parameter(ParamKind.KAPPA, 1)


def _compact(p, solver, **kwargs):
    templates = compute_templates(p, solver)
    return execute(p, ExecConfig(mode=ExecMode.COMPACT, solver=solver, templates=templates, **kwargs))


def _classic(p, solver, **kwargs):
    return execute(p, ExecConfig(mode=ExecMode.CLASSIC, solver=solver, **kwargs))


class TestConfig:
    """Execution settings."""

    def test_defaults(self):
        """Classic mode with a tree and a budget of 500."""
        cfg = ExecConfig()
        assert cfg.mode is ExecMode.CLASSIC
        assert cfg.build_tree
        assert cfg.budget == 500
        assert cfg.choose is ChooseStrategy.FIRST

    @pytest.mark.parametrize("kwargs", [{"budget": 0}, {"budget": -3}, {"max_visits": 0}])
    def test_invalid(self, kwargs):
        """Budgets and visit limits must be positive."""
        with pytest.raises(ValueError):
            ExecConfig(**kwargs)


class TestLinearDepth:
    """Classic depth of compact paths."""

    def test_plus_and_at(self):
        """Parametric steps add a coefficient, valuations evaluate it."""
        depth = LinearDepth().plus(1).plus(2, K1, 3).plus(1)
        assert depth.base == 4
        assert depth.coefficients == ((K1, 3),)
        assert depth.at({K1: 2}) == 10
        assert depth.at({}) == 4
        assert str(depth) == "4 + 3·κ1"
        assert not depth.is_constant
        assert LinearDepth(2).is_constant


class TestClassicSteps:
    """Single classic steps."""

    def test_initial_state(self, lin_srch):
        """Execution starts at the entry of the start function with Θ."""
        theta0 = InitialMemory(lin_srch)
        state = initial_state(lin_srch, theta0)
        assert state.location == "a"
        assert state.memory == theta0.memory
        assert state.condition == TRUE
        assert state.stack == ()

    def test_branch(self, lin_srch):
        """A branching location yields one successor per guard."""
        theta0 = InitialMemory(lin_srch)
        state = ProgramState(theta0.memory.update({"i": IntConst(0)}), TRUE, (), "b")
        successors = classic_successors(lin_srch, state, theta0)
        assert [s.location for s, _ in successors] == ["c", "f"]
        assert all(label != TRUE for _, label in successors)

    def test_call_pushes_frame(self, lin_srch_rec):
        """A call saves the caller frame and binds the callee parameters."""
        theta0 = InitialMemory(lin_srch_rec)
        state = ProgramState(theta0.memory, TRUE, (), "s1")
        [(callee, label)] = classic_successors(lin_srch_rec, state, theta0)
        assert label == TRUE
        assert callee.location == "a"
        frame = callee.stack[-1]
        assert isinstance(frame, Frame)
        assert (frame.return_location, frame.function, frame.destination) == ("s2", "main", "r")
        assert callee.memory["i"] == IntConst(0)
        assert callee.memory["A"] == theta0["B"]

    def test_return_pops_frame(self, lin_srch_rec):
        """Returning restores the caller and stores the result."""
        theta0 = InitialMemory(lin_srch_rec)
        state = ProgramState(theta0.memory, TRUE, (), "s1")
        [(callee, _)] = classic_successors(lin_srch_rec, state, theta0)
        at_exit = ProgramState(callee.memory.update({"ret_linSrchRec": IntConst(-1)}), TRUE, callee.stack, "g")
        [(returned, _)] = classic_successors(lin_srch_rec, at_exit, theta0)
        assert returned.location == "s2"
        assert returned.stack == ()
        assert returned.memory["r"] == IntConst(-1)
        assert returned.memory["i"] == theta0["i"]

    def test_stuck_exit(self, lin_srch_rec):
        """A non-start exit with an empty stack cannot continue."""
        theta0 = InitialMemory(lin_srch_rec)
        with pytest.raises(StuckState):
            classic_successors(lin_srch_rec, ProgramState(theta0.memory, TRUE, (), "g"), theta0)


class TestClassicExecution:
    """Breadth-first classic runs."""

    def test_trivial(self, solver):
        """Both branches of the straight-line program reach the exit."""
        result = _classic(load_corpus("trivial"), solver)
        assert len(result.leaves) == 2
        assert not result.stats.budget_exhausted
        assert {leaf.state.location for leaf in result.leaves} == {"d"}
        assert all(leaf.classic_depth.is_constant for leaf in result.leaves)

    def test_budget_exhausted(self, lin_srch, solver):
        """The unbounded loop of linSrch runs out of budget with a frontier left."""
        result = _classic(lin_srch, solver, budget=50)
        assert result.stats.budget_exhausted
        assert result.stats.processed == 50
        assert result.frontier
        assert result.stats.frontier_depth == result.frontier[0].depth
        assert len(result.leaves) > 0

    def test_final_states_before_budget(self, solver):
        """States already final are collected even once the budget is spent."""
        result = _classic(load_corpus("trivial"), solver, budget=1)
        assert result.stats.budget_exhausted
        assert result.stats.frontier_depth == 1
        assert [leaf.state.location for leaf in result.frontier] == ["b"]

    def test_tree_matches_leaves(self, lin_srch, solver):
        """Every leaf of the run is a leaf vertex of the tree."""
        result = _classic(lin_srch, solver, budget=30)
        leaf_ids = {v.id for v in result.tree.leaves()}
        assert {leaf.vertex for leaf in result.leaves} <= leaf_ids
        assert len(result.tree.edges()) == len(result.tree) - 1

    def test_no_tree(self, solver):
        """Without a tree leaves carry no vertex ids."""
        result = _classic(load_corpus("trivial"), solver, build_tree=False)
        assert result.tree is None
        assert all(leaf.vertex is None for leaf in result.leaves)

    def test_unknown_verdicts_are_kept(self):
        """Successors the solver cannot decide stay in the tree."""
        backend = ScriptedSolver(default=Verdict.UNKNOWN)
        result = _classic(load_corpus("trivial"), backend)
        assert len(result.leaves) == 2
        assert result.stats.unknown == 2
        assert [v.verdict for v in result.tree if v.verdict is not None] == [Verdict.UNKNOWN] * 2

    def test_unsat_successors_are_dropped(self):
        """Unsatisfiable successors never enter the tree."""
        result = _classic(load_corpus("trivial"), ScriptedSolver(default=Verdict.UNSAT))
        assert result.leaves == []
        assert len(result.tree) == 2

    def test_true_labels_skip_the_solver(self, solver):
        """Only guard steps are checked."""
        counting = CountingSolver(solver)
        result = _classic(load_corpus("trivial"), counting)
        assert counting.stats.queries == 2
        assert result.stats.solver_calls == 2

    def test_max_visits(self, count_if, solver):
        """Bounding visits per path enumerates up to five iterations."""
        result = _classic(count_if, solver, budget=2000, max_visits=6)
        assert not result.stats.budget_exhausted
        assert result.stats.pruned > 0
        assert len(result.leaves) == 63


class TestInstantiation:
    """Template instantiation on single states."""

    def test_loop_template(self, lin_srch, solver):
        """Instantiating at b yields one successor per exit."""
        theta0 = InitialMemory(lin_srch)
        [template] = list(compute_templates(lin_srch, solver, theta0=theta0))
        state = ProgramState(theta0.memory.update({"i": IntConst(0)}), TRUE, (), "b")
        successors = instantiate_template(state, template, K1)
        assert [s.location for s, _ in successors] == ["e", "f"]
        for successor, label in successors:
            assert K1 in state_parameters(successor)
            assert label != TRUE

    def test_location_mismatch(self, lin_srch, solver):
        """A template is only instantiated at its entry."""
        theta0 = InitialMemory(lin_srch)
        [template] = list(compute_templates(lin_srch, solver, theta0=theta0))
        with pytest.raises(LocationMismatch):
            instantiate_template(ProgramState(theta0.memory, TRUE, (), "a"), template, K1)

    def test_kind_mismatch(self, lin_srch, lin_srch_rec, solver):
        """Loop and recursion templates are instantiated by different operations."""
        [loop] = list(compute_templates(lin_srch, solver))
        [rec] = list(compute_templates(lin_srch_rec, solver))
        theta0 = InitialMemory(lin_srch_rec)
        with pytest.raises(MalformedPart):
            instantiate_template(ProgramState(theta0.memory, TRUE, (), "a"), rec, K1)
        with pytest.raises(MalformedPart):
            instantiate_recursion_entry(ProgramState(InitialMemory(lin_srch).memory, TRUE, (), "b"), loop, K1)

    def test_recursion_entry_pushes_marker(self, lin_srch_rec, solver):
        """Recursion exits carry the marker (t, κ) on top of the caller frame."""
        theta0 = InitialMemory(lin_srch_rec)
        [template] = list(compute_templates(lin_srch_rec, solver, theta0=theta0))
        frame = Frame(theta0.memory.restrict(["B", "m", "y", "r"]), "s2", "main", "r")
        state = ProgramState(theta0.memory, TRUE, (frame,), "a")
        successors = instantiate_recursion_entry(state, template, K1)
        for successor, _ in successors:
            assert successor.stack[0] == frame
            assert successor.stack[-1] == RecMarker(template.template_id, K1)

    def test_recursion_return(self, lin_srch_rec, solver):
        """Returning through a marker pops it and stays at the exit."""
        theta0 = InitialMemory(lin_srch_rec)
        store = compute_templates(lin_srch_rec, solver, theta0=theta0)
        [template] = list(store)
        state = ProgramState(theta0.memory, TRUE, (RecMarker(template.template_id, K1),), "g")
        returned = instantiate_recursion_return(state, store)
        assert returned.location == "g"
        assert returned.stack == ()

    def test_return_without_marker(self, lin_srch_rec, solver):
        """The top of the stack must be a marker."""
        theta0 = InitialMemory(lin_srch_rec)
        store = compute_templates(lin_srch_rec, solver, theta0=theta0)
        with pytest.raises(MarkerMismatch):
            instantiate_recursion_return(ProgramState(theta0.memory, TRUE, (), "g"), store)


class TestCompactExecution:
    """Compact runs with templates."""

    def test_lin_srch(self, lin_srch, solver):
        """The loop collapses into one instantiation with two exits."""
        result = _compact(lin_srch, solver)
        assert len(result.tree) == 6
        assert len(result.leaves) == 2
        assert not result.stats.budget_exhausted
        assert result.stats.instantiations == 1
        depths = sorted(str(leaf.classic_depth) for leaf in result.leaves)
        assert depths == ["3 + 3·κ1", "4 + 3·κ1"]

    def test_instantiated_vertices_name_their_template(self, lin_srch, solver):
        """Vertices created by an instantiation record the template id."""
        result = _compact(lin_srch, solver)
        ids = {v.template_id for v in result.tree if v.template_id is not None}
        assert ids == {"loop:linSrch:b-c-d"}

    def test_empty_store_is_classic(self, lin_srch, solver):
        """Compact execution without templates builds the classic tree."""
        classic = _classic(lin_srch, solver, budget=20)
        compact = execute(lin_srch, ExecConfig(mode=ExecMode.COMPACT, solver=solver, budget=20,
                                               templates=TemplateStore()))
        assert [v.state for v in classic.tree] == [v.state for v in compact.tree]
        assert trees_isomorphic(classic.tree, compact.tree, solver)

    @pytest.mark.parametrize("name", corpus_names())
    def test_empty_store_matches_classic_on_corpus(self, name, solver):
        """Without templates every corpus program yields a tree isomorphic to the classic one."""
        program = load_corpus(name)
        classic = _classic(program, solver, budget=100)
        compact = execute(program, ExecConfig(mode=ExecMode.COMPACT, solver=solver, budget=100,
                                              templates=TemplateStore()))
        assert compact.stats.instantiations == 0
        assert trees_isomorphic(classic.tree, compact.tree, solver)

    def test_lin_srch_rec(self, lin_srch_rec, solver):
        """Recursion is entered and left once per path."""
        result = _compact(lin_srch_rec, solver)
        assert len(result.tree) == 13
        assert len(result.leaves) == 2
        assert all(leaf.state.stack == () for leaf in result.leaves)
        assert all(leaf.state.location == "s3" for leaf in result.leaves)
        markers = [v for v in result.tree if any(isinstance(r, RecMarker) for r in v.state.stack)]
        assert {v.state.location for v in markers} == {"e", "f", "g"}

    def test_fresh_parameters(self, count_if, solver):
        """Every instantiation gets its own κ."""
        result = _compact(count_if, solver, max_visits=6)
        assert result.stats.instantiations == 6
        assert len(result.tree) == 26
        assert len(result.leaves) == 6
        params = set()
        for leaf in result.leaves:
            params |= set(leaf.classic_depth.parameters)
        assert params == {Parameter(ParamKind.KAPPA, i) for i in range(1, 7)}

    def test_smaller_than_classic(self, count_if, solver):
        """With the same visit bound the compact tree stays far smaller."""
        compact = _compact(count_if, solver, max_visits=6)
        classic = _classic(count_if, solver, budget=2000, max_visits=6)
        assert len(compact.tree) <= 27
        assert len(classic.leaves) >= 32

    def test_random_choice_is_seeded(self, count_if, solver):
        """The same seed picks the same templates."""
        def chosen(seed):
            result = _compact(count_if, solver, max_visits=4, choose=ChooseStrategy.RANDOM, seed=seed)
            return [v.template_id for v in result.tree if v.template_id is not None]

        assert chosen(7) == chosen(7)

    def test_tree_is_reproducible(self, lin_srch, solver):
        """Two runs produce the same vertices in the same order."""
        first = _compact(lin_srch, solver)
        second = _compact(lin_srch, solver)
        assert [v.state for v in first.tree] == [v.state for v in second.tree]

    def test_path_to(self, lin_srch, solver):
        """Paths run from the root down to the vertex."""
        result = _compact(lin_srch, solver)
        leaf = result.leaves[0]
        path = result.tree.path_to(leaf.vertex)
        assert path[0] is result.tree.root
        assert [v.state.location for v in path][:2] == ["a", "b"]


class TestTree:
    """The tree container."""

    def test_single_root(self, lin_srch):
        """A tree has exactly one root."""
        tree = SymExecTree("classic")
        state = ProgramState(InitialMemory(lin_srch).memory, TRUE, (), "a")
        tree.add_root(state)
        with pytest.raises(ValueError):
            tree.add_root(state)
