"""Template computation for loop and recursion parts.

For a loop part with one-iteration state (θ, φ) and an exit state
(θ̂, φ̂, Ξ̂, x) both computed by running P′ from Θ:

    θx⟨κ⟩ = θ⟨κ⟩ ∘ θ̂
    φx⟨κ⟩ = 0 ≤ κ ∧ ∀τ. (0 ≤ τ < κ → θ⟨τ⟩⟦φ⟧) ∧ θ⟨κ⟩⟦φ̂⟧
    Ξx⟨κ⟩ = θ⟨κ⟩ ∘ Ξ̂

A recursion part reuses this for its call phase and adds the closed form of
one return over globals and return variables.
"""

from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple, Union

from models.errors import MalformedPart, NonTermination
from models.operators import BinaryOperator
from models.program import Program
from models.state import InitialMemory, ProgramState, SymMemory
from models.symbolic import IntConst, ParamKind, Parameter, mk_and, mk_binary, mk_forall
from models.template import (
    CandidatePart,
    FailureReason,
    PartKind,
    RecursionSummary,
    Template,
    TemplateExit,
    TemplateFailure,
)
from core.solver.base import SolverBackend, Verdict
from core.symbolic.composition import compose_memory, rebase_stack
from core.symbolic.evaluation import eval_in_memory
from core.symbolic.valuation import rename_in_memory
from utils.logging import LogEvent, LogRecord, debug, info

from .closure import Unclosed, close_memory_form
from .detector import DetectorLimits, detect_candidate_parts
from .part_program import build_cycle_program, build_part_program, build_return_program, run_part
from .store import TemplateStore

KAPPA = Parameter(ParamKind.KAPPA, 0)
TAU = Parameter(ParamKind.TAU, 0)

TemplateResult = Union[Template, TemplateFailure]


@dataclass(frozen=True)
class TemplateLimits:
    max_cycle_len: int = 16
    part_budget: int = 256


class _Abort(Exception):
    def __init__(self, reason: FailureReason, detail: str = ""):
        self.reason = reason
        self.detail = detail


def _cycle_state(p: Program, part: CandidatePart, theta0: InitialMemory, solver: SolverBackend,
                 budget: int) -> Tuple[ProgramState, int]:
    run = run_part(build_cycle_program(p, part), theta0, solver, budget)
    if not run.cycle_states:
        if run.unknown:
            raise _Abort(FailureReason.SOLVER_UNKNOWN, "cycle feasibility undecided")
        raise _Abort(FailureReason.INFEASIBLE_CYCLE)
    if len(run.cycle_states) > 1:
        raise _Abort(FailureReason.MALFORMED_PART, "several paths around the cycle")
    return run.cycle_states[0]


def _exit_states(p: Program, part: CandidatePart, theta0: InitialMemory, solver: SolverBackend,
                 budget: int) -> List[Tuple[ProgramState, int]]:
    states: List[Tuple[ProgramState, int]] = []
    for exit in part.exits:
        states.extend(run_part(build_part_program(p, part, exit), theta0, solver, budget).exit_states)
    return states


def _close(memory: SymMemory, theta0: InitialMemory, domain: Optional[List[str]] = None) -> SymMemory:
    closed = close_memory_form(memory, theta0, KAPPA, domain)
    if isinstance(closed, Unclosed):
        raise _Abort(FailureReason.UNCLOSED_MEMORY, str(closed))
    return closed


def _parametric_exits(
    closed: SymMemory, cycle: ProgramState, exits: List[Tuple[ProgramState, int]]
) -> Tuple[TemplateExit, ...]:
    closed_tau = rename_in_memory(closed, KAPPA, TAU)
    iterations = mk_forall(TAU, IntConst(0), KAPPA, eval_in_memory(closed_tau, cycle.condition))
    non_negative = mk_binary(BinaryOperator.LE, IntConst(0), KAPPA)
    result = []
    for state, depth in exits:
        result.append(TemplateExit(
            memory=compose_memory(closed, state.memory),
            condition=mk_and(non_negative, iterations, eval_in_memory(closed, state.condition)),
            stack=rebase_stack(closed, state.stack),
            location=state.location,
            path_length=depth,
        ))
    return tuple(result)


def _check_exits(exits: Tuple[TemplateExit, ...], solver: SolverBackend) -> None:
    if not exits:
        raise _Abort(FailureReason.EXIT_UNSAT, "no feasible exit")
    for exit in exits:
        verdict = solver.check_formula(exit.condition).verdict
        if verdict is Verdict.UNSAT:
            raise _Abort(FailureReason.EXIT_UNSAT, exit.location)
        if verdict is Verdict.UNKNOWN:
            raise _Abort(FailureReason.SOLVER_UNKNOWN, f"satisfiability of exit {exit.location}")
    for i, first in enumerate(exits):
        for second in exits[i + 1:]:
            verdict = solver.check_formula(mk_and(first.condition, second.condition)).verdict
            if verdict is Verdict.SAT:
                raise _Abort(FailureReason.EXIT_OVERLAP, f"{first.location} and {second.location}")
            if verdict is Verdict.UNKNOWN:
                raise _Abort(FailureReason.SOLVER_UNKNOWN, f"overlap of {first.location} and {second.location}")


def _call_phase(
    p: Program, part: CandidatePart, theta0: InitialMemory, solver: SolverBackend, limits: TemplateLimits
) -> Tuple[ProgramState, int, SymMemory, Tuple[TemplateExit, ...]]:
    cycle, cycle_length = _cycle_state(p, part, theta0, solver, limits.part_budget)
    closed = _close(cycle.memory, theta0)
    exits = _parametric_exits(closed, cycle, _exit_states(p, part, theta0, solver, limits.part_budget))
    _check_exits(exits, solver)
    return cycle, cycle_length, closed, exits


def _rejection_failure(part: CandidatePart) -> TemplateFailure:
    reason = FailureReason.LOCATION_CONDITIONS if "entry or exit" in (part.rejection or "") \
        else FailureReason.MALFORMED_PART
    return TemplateFailure(part.part_id, reason, part.rejection or "")


def _guarded(part: CandidatePart, compute: Callable[[], Template]) -> TemplateResult:
    if part.rejection:
        return _rejection_failure(part)
    try:
        template = compute()
    except _Abort as abort:
        failure = TemplateFailure(part.part_id, abort.reason, abort.detail)
    except (NonTermination, MalformedPart) as e:
        failure = TemplateFailure(part.part_id, FailureReason.MALFORMED_PART, str(e))
    else:
        info(LogRecord(
            event=LogEvent.TEMPLATE_COMPUTED.value,
            message=f"Template {template.template_id} at {template.entry} with {template.n} exits",
            data={"template_id": template.template_id, "location": template.entry},
        ))
        return template
    info(LogRecord(
        event=LogEvent.TEMPLATE_FAILED.value,
        message=f"No template for {failure}",
        data={"template_id": part.part_id, "reason": failure.reason.value},
    ))
    return failure


def compute_loop_template(
    p: Program,
    part: CandidatePart,
    solver: SolverBackend,
    theta0: Optional[InitialMemory] = None,
    limits: Optional[TemplateLimits] = None,
) -> TemplateResult:
    theta0 = theta0 or InitialMemory(p)
    limits = limits or TemplateLimits()

    def compute() -> Template:
        cycle, cycle_length, _, exits = _call_phase(p, part, theta0, solver, limits)
        return Template(
            template_id=part.part_id,
            kind=PartKind.LOOP,
            entry=part.entry,
            exits=exits,
            parameter=KAPPA,
            cycle_length=cycle_length,
            cycle_memory=cycle.memory,
        )

    return _guarded(part, compute)


def compute_recursion_template(
    p: Program,
    part: CandidatePart,
    solver: SolverBackend,
    theta0: Optional[InitialMemory] = None,
    limits: Optional[TemplateLimits] = None,
) -> TemplateResult:
    theta0 = theta0 or InitialMemory(p)
    limits = limits or TemplateLimits()

    def compute() -> Template:
        assert part.function_entry is not None and part.function_exit is not None
        try:
            return_program = build_return_program(p, part)
        except MalformedPart as e:
            if str(e).startswith("branches"):
                raise _Abort(FailureReason.RETURN_PATH_BRANCHES, str(e)) from e
            if str(e).startswith("calls"):
                raise _Abort(FailureReason.RETURN_PATH_CALLS, str(e)) from e
            raise

        cycle, cycle_length, _, exits = _call_phase(p, part, theta0, solver, limits)

        run = run_part(return_program, theta0, solver, limits.part_budget)
        if len(run.cycle_states) != 1:
            raise _Abort(FailureReason.MALFORMED_PART, "return path is not a single path")
        step, return_length = run.cycle_states[0]
        domain = sorted(p.global_names)
        returned = _close(step.memory, theta0, domain)

        if part.entry != part.function_entry:
            raise _Abort(FailureReason.LOCATION_CONDITIONS, f"entry {part.entry} is not the function entry")
        return Template(
            template_id=part.part_id,
            kind=PartKind.RECURSION,
            entry=part.entry,
            exits=exits,
            parameter=KAPPA,
            cycle_length=cycle_length,
            cycle_memory=cycle.memory,
            recursion=RecursionSummary(
                memory=returned,
                exit_location=part.function_exit,
                return_length=return_length,
                step_memory=step.memory.restrict(domain),
            ),
        )

    return _guarded(part, compute)


def compute_templates(
    p: Program,
    solver: SolverBackend,
    limits: Optional[TemplateLimits] = None,
    theta0: Optional[InitialMemory] = None,
) -> TemplateStore:
    """Detect every part of ``p`` and compute its template; failures are kept in the store."""
    limits = limits or TemplateLimits()
    theta0 = theta0 or InitialMemory(p)
    templates: List[Template] = []
    failures: List[TemplateFailure] = []
    for part in detect_candidate_parts(p, DetectorLimits(limits.max_cycle_len)):
        if part.kind is PartKind.LOOP:
            result = compute_loop_template(p, part, solver, theta0, limits)
        else:
            result = compute_recursion_template(p, part, solver, theta0, limits)
        if isinstance(result, Template):
            templates.append(result)
        else:
            failures.append(result)
    debug(LogRecord(
        event=LogEvent.TEMPLATE_COMPUTED.value,
        message=f"{len(templates)} templates, {len(failures)} failures",
        data={"templates": len(templates), "failures": len(failures)},
    ))
    return TemplateStore(templates, failures)
