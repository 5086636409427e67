"""Breadth-first symbolic execution, classic and compact.

Compact mode dispatches each non-final state in this order: a recursion
return when a marker is on top of the stack at its exit, a template
instantiation when templates are entered at the location, otherwise a classic
step. Successors whose path condition is unsatisfiable are dropped.
"""

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Deque, Dict, List, Optional, Sequence, Tuple

from models.errors import LocationMismatch, MalformedPart, MarkerMismatch
from models.program import Program
from models.state import InitialMemory, ProgramState, RecMarker
from models.symbolic import FALSE, TRUE, ParamKind, Parameter, SymExpr
from models.template import PartKind, Template, TemplateExit
from core.solver.base import SolverBackend, Verdict
from core.solver.factory import create_solver
from core.symbolic.composition import compose_memory, compose_states
from core.symbolic.evaluation import eval_in_memory
from core.symbolic.valuation import rename_in_memory, rename_in_stack, rename_parameter
from core.templates.store import TemplateStore
from utils.config import Settings
from utils.logging import LogEvent, LogRecord, debug, info

from .config import ChooseStrategy, ExecConfig, ExecMode
from .steps import classic_successors, initial_state
from .tree import LinearDepth, SymExecTree


@dataclass
class ExecStats:
    processed: int = 0
    solver_calls: int = 0
    unknown: int = 0
    pruned: int = 0
    instantiations: int = 0
    budget_exhausted: bool = False
    frontier_depth: Optional[int] = None


@dataclass(frozen=True)
class Leaf:
    """A state that left the queue unexpanded, with its position in the run."""

    state: ProgramState
    depth: int
    classic_depth: LinearDepth
    vertex: Optional[int] = None


@dataclass
class ExecResult:
    leaves: List[Leaf]
    tree: Optional[SymExecTree]
    stats: ExecStats
    frontier: List[Leaf] = field(default_factory=list)

    @property
    def final_states(self) -> List[ProgramState]:
        return [leaf.state for leaf in self.leaves]


@dataclass(frozen=True)
class _Step:
    """A candidate successor before the feasibility check."""

    state: ProgramState
    label: SymExpr
    classic_steps: int
    parameter: Optional[Parameter] = None
    per_unit: int = 0
    template_id: Optional[str] = None


@dataclass(frozen=True)
class _Entry:
    state: ProgramState
    depth: int
    classic_depth: LinearDepth
    vertex: Optional[int]
    visits: Dict[str, int]
    verdict: Optional[Verdict] = None


def _exit_state(exit: TemplateExit, t: Template, kappa: Parameter) -> ProgramState:
    return ProgramState(
        rename_in_memory(exit.memory, t.parameter, kappa),
        rename_parameter(exit.condition, t.parameter, kappa),
        rename_in_stack(exit.stack, t.parameter, kappa),
        exit.location,
    )


def _instantiate(s: ProgramState, t: Template, kappa: Parameter, marker: bool) -> List[_Step]:
    if s.location != t.entry:
        raise LocationMismatch(s.location, t.entry)
    steps = []
    for exit in t.exits:
        other = _exit_state(exit, t, kappa)
        if marker:
            other = ProgramState(other.memory, other.condition, (RecMarker(t.template_id, kappa),) + other.stack,
                                 other.location)
        label = eval_in_memory(s.memory, other.condition)
        steps.append(_Step(compose_states(s, other), label, exit.path_length, kappa, t.cycle_length, t.template_id))
    return steps


def instantiate_template(s: ProgramState, t: Template, kappa: Parameter) -> List[Tuple[ProgramState, SymExpr]]:
    """s ∘ (θᵢ, φᵢ, Ξᵢ, lᵢ)⟨κ⟩ for every exit of a loop template, with its edge label.

    Raises:
        LocationMismatch: ``s`` is not at the template entry.
    """
    if t.kind is not PartKind.LOOP:
        raise MalformedPart(f"{t.template_id} is not a loop template")
    return [(step.state, step.label) for step in _instantiate(s, t, kappa, marker=False)]


def instantiate_recursion_entry(
    s: ProgramState, t: Template, kappa: Parameter
) -> List[Tuple[ProgramState, SymExpr]]:
    """Like instantiate_template, with the marker (t, κ) below each exit stack."""
    if t.kind is not PartKind.RECURSION:
        raise MalformedPart(f"{t.template_id} is not a recursion template")
    return [(step.state, step.label) for step in _instantiate(s, t, kappa, marker=True)]


def instantiate_recursion_return(s: ProgramState, templates: TemplateStore) -> ProgramState:
    """Leave the κ pending recursive calls of the marker on top of the stack at once.

    Raises:
        MarkerMismatch: the top of the stack is no marker, or not one exiting here.
    """
    marker = s.top()
    if not isinstance(marker, RecMarker):
        raise MarkerMismatch(f"No recursion marker on top of the stack at {s.location}")
    t = templates.get(marker.template_id)
    if t.recursion is None or t.recursion.exit_location != s.location:
        raise MarkerMismatch(f"Marker {marker.template_id} does not return at {s.location}")
    returned = rename_in_memory(t.recursion.memory, t.parameter, marker.parameter)
    memory = s.memory.update(compose_memory(s.memory, returned).as_dict())
    return ProgramState(memory, s.condition, s.stack[:-1], t.recursion.exit_location)


class _Run:
    def __init__(self, p: Program, cfg: ExecConfig, solver: SolverBackend, theta0: InitialMemory):
        self.p = p
        self.cfg = cfg
        self.solver = solver
        self.theta0 = theta0
        self.templates = cfg.templates if cfg.templates is not None else TemplateStore()
        self.compact = cfg.mode is ExecMode.COMPACT
        self.rng = random.Random(cfg.seed)
        self.stats = ExecStats()
        self.tree = SymExecTree(cfg.mode.value) if cfg.build_tree else None
        self.next_kappa = 1

    def fresh_parameter(self) -> Parameter:
        kappa = Parameter(ParamKind.KAPPA, self.next_kappa)
        self.next_kappa += 1
        return kappa

    def choose(self, candidates: Sequence[Template]) -> Template:
        if self.cfg.choose is ChooseStrategy.RANDOM:
            return self.rng.choice(list(candidates))
        return candidates[0]

    def steps(self, s: ProgramState) -> List[_Step]:
        if self.compact:
            top = s.top()
            function = self.p.function_of(s.location)
            if isinstance(top, RecMarker) and s.location == function.exit:
                returned = instantiate_recursion_return(s, self.templates)
                t = self.templates.get(top.template_id)
                assert t.recursion is not None
                debug(LogRecord(
                    event=LogEvent.RECURSION_RETURN.value,
                    message=f"Return of {top.parameter} calls at {s.location}",
                    data={"template_id": t.template_id, "location": s.location},
                ))
                return [_Step(returned, TRUE, 0, top.parameter, t.recursion.return_length)]

            candidates = self.templates.at(s.location)
            if candidates:
                t = self.choose(candidates)
                kappa = self.fresh_parameter()
                self.stats.instantiations += 1
                debug(LogRecord(
                    event=LogEvent.TEMPLATE_INSTANTIATED.value,
                    message=f"Instantiated {t.template_id} with {kappa}",
                    data={"template_id": t.template_id, "location": s.location, "parameter": str(kappa)},
                ))
                return _instantiate(s, t, kappa, marker=t.kind is PartKind.RECURSION)

        return [_Step(state, label, 1) for state, label in classic_successors(self.p, s, self.theta0)]

    def feasible(self, step: _Step) -> Tuple[bool, Optional[Verdict]]:
        if step.label == TRUE:
            return True, None
        if step.state.condition == FALSE:
            return False, Verdict.UNSAT
        verdict = self.solver.check_formula(step.state.condition).verdict
        if verdict is Verdict.UNKNOWN:
            self.stats.unknown += 1
        return verdict is not Verdict.UNSAT, verdict

    def run(self) -> ExecResult:
        root = initial_state(self.p, self.theta0)
        root_vertex = self.tree.add_root(root).id if self.tree is not None else None
        queue: Deque[_Entry] = deque([_Entry(root, 0, LinearDepth(), root_vertex, {root.location: 1})])
        leaves: List[Leaf] = []
        queries_before = self.solver.stats.queries

        while queue:
            entry = queue[0]
            if self.p.is_final(entry.state.location):
                queue.popleft()
                leaves.append(Leaf(entry.state, entry.depth, entry.classic_depth, entry.vertex))
                continue
            if self.stats.processed >= self.cfg.budget:
                self.stats.budget_exhausted = True
                self.stats.frontier_depth = entry.depth
                info(LogRecord(
                    event=LogEvent.BUDGET_EXHAUSTED.value,
                    message=f"Budget of {self.cfg.budget} states exhausted with {len(queue)} queued",
                    data={"budget": self.cfg.budget, "queued": len(queue)},
                ))
                break
            queue.popleft()
            self.stats.processed += 1
            queue.extend(self.expand(entry))

        self.stats.solver_calls = self.solver.stats.queries - queries_before
        frontier = [Leaf(e.state, e.depth, e.classic_depth, e.vertex) for e in queue]
        return ExecResult(leaves, self.tree, self.stats, frontier)

    def expand(self, entry: _Entry) -> List[_Entry]:
        successors = []
        for step in self.steps(entry.state):
            location = step.state.location
            visits = dict(entry.visits)
            visits[location] = visits.get(location, 0) + 1
            if self.cfg.max_visits is not None and visits[location] > self.cfg.max_visits:
                self.stats.pruned += 1
                debug(LogRecord(
                    event=LogEvent.SUCCESSOR_PRUNED.value,
                    message=f"Cut successor at {location} after {self.cfg.max_visits} visits",
                    data={"location": location},
                ))
                continue
            keep, verdict = self.feasible(step)
            if not keep:
                continue
            classic_depth = entry.classic_depth.plus(step.classic_steps, step.parameter, step.per_unit)
            vertex = None
            if self.tree is not None and entry.vertex is not None:
                vertex = self.tree.add_child(
                    entry.vertex, step.state, step.label, classic_depth, verdict, step.template_id
                ).id
            successors.append(_Entry(step.state, entry.depth + 1, classic_depth, vertex, visits, verdict))
        return successors


def execute(
    p: Program,
    cfg: Optional[ExecConfig] = None,
    theta0: Optional[InitialMemory] = None,
) -> ExecResult:
    """Run ``p`` from its initial state until the queue empties or the budget is spent.

    Raises:
        SolverProcessError: the solver child process failed.
        MarkerMismatch: a recursion marker sits on top of the stack at a foreign exit.
    """
    cfg = cfg or ExecConfig()
    theta0 = theta0 or InitialMemory(p)
    solver = cfg.solver
    owned = solver is None
    if solver is None:
        solver = create_solver(Settings())

    info(LogRecord(
        event=LogEvent.EXECUTION_STARTED.value,
        message=f"Executing {p.start_function} in {cfg.mode.value} mode",
        data={"mode": cfg.mode.value, "budget": cfg.budget},
    ))
    try:
        result = _Run(p, cfg, solver, theta0).run()
    finally:
        if owned:
            solver.close()

    info(LogRecord(
        event=LogEvent.EXECUTION_FINISHED.value,
        message=(
            f"{len(result.leaves)} final states after {result.stats.processed} steps, "
            f"{result.stats.solver_calls} solver calls"
        ),
        data={
            "mode": cfg.mode.value,
            "final_states": len(result.leaves),
            "processed": result.stats.processed,
            "budget_exhausted": result.stats.budget_exhausted,
        },
    ))
    return result
