"""Detection of candidate program parts: elementary loop cycles and direct recursion."""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from models.program import CallAssign, CallVoid, Edge, Function, Program, Skip
from models.template import CandidatePart, PartKind
from utils.logging import LogEvent, LogRecord, debug, info


@dataclass(frozen=True)
class DetectorLimits:
    max_cycle_len: int = 16


def _is_error_loop(edge: Edge) -> bool:
    return edge.src == edge.dst and isinstance(edge.action, Skip)


def _control_graph(fn: Function) -> "nx.DiGraph[str]":
    graph: "nx.DiGraph[str]" = nx.DiGraph()
    graph.add_nodes_from(fn.locations)
    graph.add_edges_from((e.src, e.dst) for e in fn.edges if not _is_error_loop(e))
    return graph


def _dominates(idom: Dict[str, str], a: str, b: str) -> bool:
    node = b
    while True:
        if node == a:
            return True
        parent = idom.get(node)
        if parent is None or parent == node:
            return False
        node = parent


def _path_edges(fn: Function, path: Sequence[str], closed: bool) -> List[Edge]:
    steps = list(zip(path, path[1:]))
    if closed:
        steps.append((path[-1], path[0]))
    wanted = set(steps)
    return [e for e in fn.edges if (e.src, e.dst) in wanted and not _is_error_loop(e)]


def _exits(fn: Function, path: Sequence[str], on_path: List[Edge], skip: Optional[Edge] = None) -> Tuple[str, ...]:
    nodes = set(path)
    targets = {
        e.dst for e in fn.edges
        if e.src in nodes and e not in on_path and e != skip and not _is_error_loop(e)
    }
    return tuple(sorted(targets))


def _loop_parts(fn: Function, limits: DetectorLimits) -> List[CandidatePart]:
    graph = _control_graph(fn)
    idom = nx.immediate_dominators(graph, fn.entry)
    parts = []
    for cycle in nx.simple_cycles(graph, length_bound=limits.max_cycle_len):
        if any(node not in idom for node in cycle):
            continue  # unreachable from the function entry
        heads = [n for n in cycle if all(_dominates(idom, n, m) for m in cycle)]
        rejection = None
        if heads:
            start = cycle.index(heads[0])
            cycle = cycle[start:] + cycle[:start]
        else:
            cycle = cycle[cycle.index(min(cycle)):] + cycle[:cycle.index(min(cycle))]
            rejection = "irreducible cycle"

        on_cycle = _path_edges(fn, cycle, closed=True)
        exits = _exits(fn, cycle, on_cycle)
        if rejection is None and any(e.is_call for e in on_cycle):
            rejection = "call on cycle"
        if rejection is None and ({fn.entry, fn.exit} & (set(cycle) | set(exits))):
            rejection = "touches function entry or exit"
        parts.append(CandidatePart(
            kind=PartKind.LOOP,
            function=fn.name,
            cycle=tuple(cycle),
            exits=exits,
            function_entry=fn.entry,
            function_exit=fn.exit,
            rejection=rejection,
        ))
    return sorted(parts, key=lambda part: part.cycle)


def _recursion_parts(fn: Function, limits: DetectorLimits) -> List[CandidatePart]:
    graph = _control_graph(fn)
    parts = []
    for call in fn.call_edges:
        action = call.action
        assert isinstance(action, (CallAssign, CallVoid))
        if action.callee != fn.name:
            continue
        paths = sorted(nx.all_simple_paths(graph, fn.entry, call.src, cutoff=limits.max_cycle_len))
        for path in paths:
            on_path = _path_edges(fn, path, closed=False)
            rejection = "call on recursion path" if any(e.is_call for e in on_path) else None
            parts.append(CandidatePart(
                kind=PartKind.RECURSION,
                function=fn.name,
                cycle=tuple(path),
                exits=_exits(fn, path, on_path, skip=call),
                call_edge=call,
                function_entry=fn.entry,
                function_exit=fn.exit,
                rejection=rejection,
            ))
    return parts


def detect_candidate_parts(p: Program, limits: Optional[DetectorLimits] = None) -> List[CandidatePart]:
    """All loop and recursion parts of ``p``, rejected ones included.

    Order: by function name; loops by location sequence, then recursion parts
    by call edge and path.
    """
    limits = limits or DetectorLimits()
    parts: List[CandidatePart] = []
    for fn in sorted(p.functions, key=lambda f: f.name):
        parts.extend(_loop_parts(fn, limits))
        parts.extend(_recursion_parts(fn, limits))

    for part in parts:
        if part.rejection:
            info(LogRecord(
                event=LogEvent.PART_REJECTED.value,
                message=f"Part {part.part_id} rejected: {part.rejection}",
                data={"part_id": part.part_id, "reason": part.rejection},
            ))
        else:
            debug(LogRecord(
                event=LogEvent.PART_DETECTED.value,
                message=f"Detected {part.kind.value} part {part.part_id}",
                data={"part_id": part.part_id, "exits": list(part.exits)},
            ))
    return parts
