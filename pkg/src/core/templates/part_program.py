"""Part programs P′: one cycle and one exit path carved out as a stand-alone program.

The edge closing the cycle is redirected into a fresh exit ``e′``; the chosen
exit becomes an error location; every other branch leaving the part is sent
to a fresh sink.
"""

from collections import deque
from dataclasses import dataclass, replace
from typing import Deque, Dict, List, Optional, Set, Tuple

from models.errors import ExitOnCycle, MalformedPart, NonTermination
from models.program import Assign, Bind, CallAssign, CallVoid, Edge, Function, Program, Skip, Var
from models.state import InitialMemory, ProgramState
from models.symbolic import TRUE
from models.template import CandidatePart, PartKind, PartProgram
from core.executor.steps import classic_successors, initial_state
from core.solver.base import SolverBackend, Verdict
from utils.logging import LogEvent, LogRecord, debug


def _fresh(name: str, taken: Set[str]) -> str:
    candidate = name + "'"
    while candidate in taken:
        candidate += "'"
    taken.add(candidate)
    return candidate


def _call_meta_action(fn: Function, call: Edge) -> Bind:
    """Effect of entering ``fn`` again: bind formals, reset the other locals."""
    action = call.action
    assert isinstance(action, (CallAssign, CallVoid))
    bindings = tuple((param.name, arg) for param, arg in zip(fn.params, action.args))
    return Bind(bindings, tuple(d.name for d in fn.locals))


def _part_program(
    p: Program,
    part: CandidatePart,
    entry: str,
    edges: List[Edge],
    new_exit: str,
    exit_location: Optional[str],
    origin_map: Dict[str, str],
    sinks: List[str],
) -> PartProgram:
    fn = p.function(part.function)
    body = Function(
        name=fn.name,
        params=fn.params,
        locals=fn.locals,
        return_type=fn.return_type,
        entry=entry,
        exit=new_exit,
        edges=tuple(edges),
    )
    program = Program(
        globals=p.globals,
        functions=tuple(body if f.name == fn.name else f for f in p.functions),
        start_function=fn.name,
    )
    debug(LogRecord(
        event=LogEvent.PART_PROGRAM_BUILT.value,
        message=f"Built part program for {part.part_id} (exit {exit_location})",
        data={"part_id": part.part_id, "edges": len(edges)},
    ))
    return PartProgram(program, new_exit, exit_location, origin_map, tuple(sinks), part)


def _build(p: Program, part: CandidatePart, exit: Optional[str]) -> PartProgram:
    fn = p.function(part.function)
    taken = set(p.all_locations())
    new_exit = _fresh(part.entry, taken)
    cycle = list(part.cycle)
    steps = set(zip(cycle, cycle[1:]))
    closing: Optional[Tuple[str, str]] = None
    if part.kind is PartKind.LOOP:
        closing = (cycle[-1], cycle[0])
        steps.add(closing)

    origin_map: Dict[str, str] = {}
    exit_location = exit
    if exit is not None and exit in part.cycle:
        exit_location = _fresh(exit, taken)
        origin_map[exit_location] = exit

    edges: List[Edge] = []
    sinks: List[str] = []
    nodes = set(cycle)
    for edge in fn.edges:
        if edge.src not in nodes or (edge.src == edge.dst and isinstance(edge.action, Skip)):
            continue
        if part.call_edge is not None and edge == part.call_edge:
            edges.append(Edge(edge.src, new_exit, _call_meta_action(fn, edge)))
        elif (edge.src, edge.dst) == closing:
            edges.append(replace(edge, dst=new_exit))
        elif (edge.src, edge.dst) in steps:
            edges.append(edge)
        elif exit_location is not None and edge.dst == exit:
            edges.append(replace(edge, dst=exit_location))
        else:
            sink = _fresh(f"{edge.dst}_sink", taken)
            sinks.append(sink)
            edges.append(replace(edge, dst=sink))

    for location in [exit_location, *sinks]:
        if location is not None:
            edges.append(Edge(location, location, Skip()))
    return _part_program(p, part, part.entry, edges, new_exit, exit_location, origin_map, sinks)


def build_part_program(p: Program, part: CandidatePart, exit: str) -> PartProgram:
    """P′ for a loop part or the call phase of a recursion part.

    Raises:
        ExitOnCycle: ``exit`` is the part entry itself.
        MalformedPart: ``exit`` is not an exit of ``part``.
    """
    if exit not in part.exits:
        raise MalformedPart(f"{exit} is not an exit of {part.part_id}")
    if exit == part.entry:
        raise ExitOnCycle(f"Exit {exit} of {part.part_id} is the part entry")
    return _build(p, part, exit)


def build_cycle_program(p: Program, part: CandidatePart) -> PartProgram:
    """P′ with every exit branch sunk; used to compute one cycle iteration."""
    return _build(p, part, None)


def return_path(p: Program, part: CandidatePart) -> List[Edge]:
    """Edges from the call's return location to the function exit.

    Raises:
        MalformedPart: the path branches, calls, or does not reach the exit;
            the message starts with ``branches`` or ``calls`` accordingly.
    """
    assert part.call_edge is not None and part.function_exit is not None
    fn = p.function(part.function)
    path: List[Edge] = []
    location = part.call_edge.dst
    seen = {location}
    while location != part.function_exit:
        edges = [e for e in fn.edges if e.src == location]
        if len(edges) != 1:
            raise MalformedPart(f"branches at {location}")
        edge = edges[0]
        if edge.is_call:
            raise MalformedPart(f"calls at {location}")
        if edge.dst in seen:
            raise MalformedPart(f"loops at {location}")
        path.append(edge)
        seen.add(edge.dst)
        location = edge.dst
    return path


def build_return_program(p: Program, part: CandidatePart) -> PartProgram:
    """P₂ for a recursion part: x -(return effect)-> v -...-> e′."""
    assert part.call_edge is not None and part.function_exit is not None
    fn = p.function(part.function)
    action = part.call_edge.action
    assert isinstance(action, (CallAssign, CallVoid))
    path = return_path(p, part)
    if not path:
        raise MalformedPart(f"empty return path in {part.part_id}")

    taken = set(p.all_locations())
    exit_x = part.function_exit
    new_exit = _fresh(exit_x, taken)
    meta = Assign(action.target, Var(fn.ret_var)) if isinstance(action, CallAssign) else Skip()
    edges = [Edge(exit_x, part.call_edge.dst, meta)]
    edges.extend(path[:-1])
    edges.append(replace(path[-1], dst=new_exit))
    return _part_program(p, part, exit_x, edges, new_exit, None, {}, [])


@dataclass(frozen=True)
class PartRun:
    """States of one classic run of P′ with their classic depths."""

    cycle_states: Tuple[Tuple[ProgramState, int], ...]
    exit_states: Tuple[Tuple[ProgramState, int], ...]
    unknown: bool = False


def run_part(part_program: PartProgram, theta0: InitialMemory, solver: SolverBackend, budget: int = 256) -> PartRun:
    """Classic execution of P′ from (Θ, true, [], e).

    States reaching ``e′`` are cycle states; states stuck in the exit location
    are exit states, reported at the exit's original location. Sinks are
    dropped.

    Raises:
        NonTermination: more than ``budget`` states were processed.
    """
    program = part_program.program
    queue: Deque[Tuple[ProgramState, int]] = deque([(initial_state(program, theta0), 0)])
    cycles: List[Tuple[ProgramState, int]] = []
    exits: List[Tuple[ProgramState, int]] = []
    unknown = False
    processed = 0

    while queue:
        state, depth = queue.popleft()
        if state.location == part_program.new_exit:
            cycles.append((state, depth))
            continue
        if state.location == part_program.exit_location:
            exits.append((replace(state, location=part_program.origin(state.location)), depth))
            continue
        if state.location in part_program.sinks:
            continue
        processed += 1
        if processed > budget:
            raise NonTermination(part_program.part.part_id, budget)
        for successor, label in classic_successors(program, state, theta0):
            if label != TRUE:
                verdict = solver.check_formula(successor.condition).verdict
                if verdict is Verdict.UNSAT:
                    continue
                unknown = unknown or verdict is Verdict.UNKNOWN
            queue.append((successor, depth + 1))

    return PartRun(tuple(cycles), tuple(exits), unknown)
