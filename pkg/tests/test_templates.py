"""
Tests for part detection, part programs, closed forms and template computation.
"""

import pytest

from core.templates import (
    KAPPA,
    TemplateLimits,
    TemplateStore,
    Unclosed,
    build_cycle_program,
    build_part_program,
    build_return_program,
    close_memory_form,
    compute_templates,
    detect_candidate_parts,
    mutate_template,
    return_path,
    run_part,
    verify_template,
)
from models import (
    BinaryOperator,
    CandidatePart,
    ExitOnCycle,
    FailureReason,
    InitialMemory,
    IntConst,
    MalformedPart,
    Mutation,
    PartKind,
    Template,
    TemplateFailure,
)
from models.symbolic import mk_binary
from framework import counting_loop, load_corpus, single_function


def _only_template(store: TemplateStore) -> Template:
    templates = list(store)
    assert len(templates) == 1, [str(f) for f in store.failures]
    return templates[0]


class TestDetector:
    """Finding loop cycles and direct recursion."""

    def test_lin_srch_loop(self, lin_srch):
        """linSrch has one loop headed at b with exits e and f."""
        parts = detect_candidate_parts(lin_srch)
        assert len(parts) == 1
        part = parts[0]
        assert part.kind is PartKind.LOOP
        assert part.cycle == ("b", "c", "d")
        assert part.entry == "b"
        assert part.exits == ("e", "f")
        assert part.rejection is None
        assert part.part_id == "loop:linSrch:b-c-d"

    def test_count_if_two_cycles(self, count_if):
        """The branch inside the countIf loop yields two cycles through c."""
        parts = detect_candidate_parts(count_if)
        assert [p.cycle for p in parts] == [("c", "d", "e", "f"), ("c", "d", "f")]
        assert parts[0].exits == ("f", "g")
        assert parts[1].exits == ("e", "g")

    def test_recursion_part(self, lin_srch_rec):
        """The recursive call of linSrchRec closes a path from its entry."""
        parts = detect_candidate_parts(lin_srch_rec)
        assert len(parts) == 1
        part = parts[0]
        assert part.kind is PartKind.RECURSION
        assert part.part_id == "rec:linSrchRec:c>d:a-b-c"
        assert part.exits == ("e", "f")
        assert part.function_exit == "g"

    def test_loop_touching_function_exit(self):
        """A loop exiting straight into the function exit is rejected."""
        p = single_function(
            ["a -> b : i := 0", "b -> c : i < n", "b -> z : i >= n", "c -> b : i := i + 1"],
            params="n: int",
            locals_="i: int",
        )
        parts = detect_candidate_parts(p)
        assert parts[0].rejection == "touches function entry or exit"

    def test_straight_line_has_no_parts(self):
        """Programs without cycles or recursion have nothing to summarise."""
        assert detect_candidate_parts(load_corpus("trivial")) == []


class TestPartPrograms:
    """Carving one cycle and one exit out of a function."""

    def test_exit_path(self, lin_srch, solver):
        """Running P′ for exit e reaches e after two steps and b′ after one full turn."""
        part = detect_candidate_parts(lin_srch)[0]
        run = run_part(build_part_program(lin_srch, part, "e"), InitialMemory(lin_srch), solver)
        assert [(s.location, depth) for s, depth in run.exit_states] == [("e", 2)]
        assert [(s.location, depth) for s, depth in run.cycle_states] == [("b'", 3)]

    def test_cycle_program(self, lin_srch, solver):
        """With every exit sunk, one state goes round the cycle in three steps."""
        part = detect_candidate_parts(lin_srch)[0]
        program = build_cycle_program(lin_srch, part)
        run = run_part(program, InitialMemory(lin_srch), solver)
        assert len(run.cycle_states) == 1
        state, depth = run.cycle_states[0]
        assert depth == 3
        assert state.location == program.new_exit == "b'"

    def test_exit_on_cycle_is_renamed(self, count_if, solver):
        """An exit that lies on the cycle gets a fresh location mapped back to it."""
        part = detect_candidate_parts(count_if)[0]
        program = build_part_program(count_if, part, "f")
        assert program.exit_location == "f'"
        assert program.origin("f'") == "f"
        run = run_part(program, InitialMemory(count_if), solver)
        assert [s.location for s, _ in run.exit_states] == ["f"]

    def test_unknown_exit(self, lin_srch):
        """Only exits of the part can be chosen."""
        part = detect_candidate_parts(lin_srch)[0]
        with pytest.raises(MalformedPart):
            build_part_program(lin_srch, part, "a")

    def test_exit_at_entry(self, lin_srch):
        """The part entry cannot be its own exit."""
        part = CandidatePart(PartKind.LOOP, "linSrch", ("b", "c", "d"), ("b",))
        with pytest.raises(ExitOnCycle):
            build_part_program(lin_srch, part, "b")

    def test_return_path(self, lin_srch_rec):
        """After the call linSrchRec returns t straight away."""
        part = detect_candidate_parts(lin_srch_rec)[0]
        path = return_path(lin_srch_rec, part)
        assert [(e.src, e.dst) for e in path] == [("d", "g")]
        program = build_return_program(lin_srch_rec, part)
        assert program.program.start.entry == "g"

    def test_branching_return_path(self):
        """countIfRec branches on A[i] after the call."""
        p = load_corpus("count_if_rec_a")
        part = detect_candidate_parts(p)[0]
        with pytest.raises(MalformedPart, match="^branches"):
            return_path(p, part)


class TestClosure:
    """Closed forms of one-iteration memories."""

    def test_increment(self, lin_srch, solver):
        """i ↦ i + 1 closes to i ↦ α + κ, everything else stays put."""
        theta0 = InitialMemory(lin_srch)
        part = detect_candidate_parts(lin_srch)[0]
        state, _ = run_part(build_cycle_program(lin_srch, part), theta0, solver).cycle_states[0]
        closed = close_memory_form(state.memory, theta0, KAPPA)
        assert closed["i"] == mk_binary(BinaryOperator.ADD, theta0["i"], KAPPA)
        assert closed["A"] == theta0["A"]
        assert closed["n"] == theta0["n"]

    def test_stride(self):
        """A constant stride c becomes c·κ."""
        p = counting_loop("i := i + 2")
        theta0 = InitialMemory(p)
        memory = theta0.memory.update({"i": mk_binary(BinaryOperator.ADD, theta0["i"], IntConst(2))})
        closed = close_memory_form(memory, theta0, KAPPA)
        assert closed["i"] == mk_binary(
            BinaryOperator.ADD, theta0["i"], mk_binary(BinaryOperator.MUL, IntConst(2), KAPPA)
        )

    def test_doubling_has_no_closed_form(self):
        """i ↦ i * 2 is not affine in κ."""
        p = counting_loop("i := i * 2")
        theta0 = InitialMemory(p)
        memory = theta0.memory.update({"i": mk_binary(BinaryOperator.MUL, theta0["i"], IntConst(2))})
        result = close_memory_form(memory, theta0, KAPPA)
        assert isinstance(result, Unclosed)
        assert result.variable == "i"

    def test_domain_restricts(self):
        """Only the requested variables are closed."""
        p = counting_loop("i := i * 2")
        theta0 = InitialMemory(p)
        memory = theta0.memory.update({"i": mk_binary(BinaryOperator.MUL, theta0["i"], IntConst(2))})
        closed = close_memory_form(memory, theta0, KAPPA, ["n"])
        assert list(closed) == ["n"]


class TestLoopTemplates:
    """Templates of loop parts."""

    def test_lin_srch(self, lin_srch, solver):
        """One template at b with exits e and f and a three-step cycle."""
        template = _only_template(compute_templates(lin_srch, solver))
        assert template.kind is PartKind.LOOP
        assert template.entry == "b"
        assert template.n == 2
        assert [e.location for e in template.exits] == ["e", "f"]
        assert [e.path_length for e in template.exits] == [2, 1]
        assert template.cycle_length == 3
        theta0 = InitialMemory(lin_srch)
        assert template.exits[0].memory["i"] == mk_binary(BinaryOperator.ADD, theta0["i"], KAPPA)

    def test_count_if(self, count_if, solver):
        """Both cycles of countIf get a template entered at c."""
        store = compute_templates(count_if, solver)
        assert len(store) == 2
        assert [t.template_id for t in store.at("c")] == ["loop:countIf:c-d-e-f", "loop:countIf:c-d-f"]
        assert store.failures == ()

    def test_unclosed_memory(self, solver):
        """A doubling loop has no template."""
        store = compute_templates(counting_loop("i := i * 2"), solver)
        assert len(store) == 0
        assert [f.reason for f in store.failures] == [FailureReason.UNCLOSED_MEMORY]

    def test_infeasible_cycle(self, solver):
        """A cycle behind a false guard cannot be summarised."""
        p = single_function(
            ["a -> b : i := 0", "b -> c : false", "b -> d : true", "c -> b : i := i + 1", "d -> z : ret i"],
            locals_="i: int",
        )
        store = compute_templates(p, solver)
        assert [f.reason for f in store.failures] == [FailureReason.INFEASIBLE_CYCLE]

    def test_location_conditions(self, solver):
        """Rejected parts are reported as failures, not dropped."""
        p = single_function(
            ["a -> b : i := 0", "b -> c : i < n", "b -> z : i >= n", "c -> b : i := i + 1"],
            params="n: int",
            locals_="i: int",
        )
        failures = compute_templates(p, solver).failures
        assert len(failures) == 1
        assert isinstance(failures[0], TemplateFailure)
        assert failures[0].reason is FailureReason.LOCATION_CONDITIONS

    def test_part_budget(self, lin_srch, solver):
        """A part program that outruns its budget is malformed."""
        store = compute_templates(lin_srch, solver, TemplateLimits(part_budget=1))
        assert [f.reason for f in store.failures] == [FailureReason.MALFORMED_PART]


class TestRecursionTemplates:
    """Templates of direct recursion."""

    def test_lin_srch_rec(self, lin_srch_rec, solver):
        """The call phase exits at e and f, the return phase at g in two steps."""
        template = _only_template(compute_templates(lin_srch_rec, solver))
        assert template.kind is PartKind.RECURSION
        assert template.entry == "a"
        assert [e.location for e in template.exits] == ["e", "f"]
        assert template.cycle_length == 3
        assert template.recursion is not None
        assert template.recursion.exit_location == "g"
        assert template.recursion.return_length == 2

    def test_branching_return(self, solver):
        """countIfRec with the branch after the call has no template."""
        store = compute_templates(load_corpus("count_if_rec_a"), solver)
        assert len(store) == 0
        assert [f.reason for f in store.failures] == [FailureReason.RETURN_PATH_BRANCHES]

    def test_branch_before_call(self, solver):
        """Moving the branch before the call gives one template per call site."""
        p = load_corpus("count_if_rec_b")
        store = compute_templates(p, solver)
        assert len(store.at("a")) == 2
        assert [f.reason for f in store.failures] == []
        # the call after A[i] == x returns t + 1
        counting = store.get("rec:countIfRec:e>c2:a-b-e")
        theta0 = InitialMemory(p)
        ret = theta0["ret_countIfRec"]
        assert counting.recursion is not None
        assert counting.recursion.memory["ret_countIfRec"] == mk_binary(BinaryOperator.ADD, ret, KAPPA)


class TestVerification:
    """Re-checking templates and detecting corrupted ones."""

    @pytest.mark.parametrize("name", ["lin_srch", "count_if", "lin_srch_rec", "count_if_rec_b"])
    def test_computed_templates_verify(self, name, solver):
        """Every computed template passes its own checks."""
        p = load_corpus(name)
        theta0 = InitialMemory(p)
        store = compute_templates(p, solver, theta0=theta0)
        assert len(store) > 0
        for template in store:
            assert verify_template(template, theta0, solver) == []

    @pytest.mark.parametrize("mutation", [Mutation.WEAKEN_CONDITION, Mutation.PERTURB_COEFFICIENT])
    def test_mutations_are_caught(self, mutation, lin_srch, solver):
        """Weakened conditions and wrong coefficients fail verification."""
        theta0 = InitialMemory(lin_srch)
        template = _only_template(compute_templates(lin_srch, solver, theta0=theta0))
        assert verify_template(mutate_template(template, mutation), theta0, solver) != []

    def test_swap_exits(self, lin_srch, solver):
        """Swapping exchanges the locations of the first two exits only."""
        template = _only_template(compute_templates(lin_srch, solver))
        swapped = mutate_template(template, Mutation.SWAP_EXITS)
        assert [e.location for e in swapped.exits] == ["f", "e"]
        assert swapped.exits[0].condition == template.exits[0].condition

    def test_swap_needs_two_exits(self, solver):
        """A single-exit template is left as it is."""
        template = _only_template(compute_templates(counting_loop(), solver))
        assert template.n == 1
        assert mutate_template(template, Mutation.SWAP_EXITS) is template

    def test_store_replace(self, lin_srch, solver):
        """Replacing a template keeps the rest of the store."""
        store = compute_templates(lin_srch, solver)
        template = _only_template(store)
        mutated = mutate_template(template, Mutation.WEAKEN_CONDITION)
        replaced = store.replace(mutated)
        assert replaced.get(template.template_id) is mutated
        assert store.get(template.template_id) is template
        assert replaced.at("b") == [mutated]
