"""Structural checks on programs: single entry/exit, out-degrees, guard pairs, call placement."""

from collections import Counter
from typing import List

from models.errors import Violation, ViolationKind
from models.program import CallAssign, CallVoid, Edge, Function, Guard, Program, are_negations
from frontend.render import render_action
from utils.logging import LogEvent, LogRecord, debug


def _edge_text(edge: Edge) -> str:
    return f"{edge.src} -> {edge.dst} : {render_action(edge.action)}"


def _check_names(p: Program) -> List[Violation]:
    names = [fn.name for fn in p.functions]
    names += [fn.ret_var for fn in p.functions]
    names += [d.name for d in p.globals]
    names += [d.name for fn in p.functions for d in fn.params + fn.locals]
    counts = Counter(names)
    return [
        Violation(kind=ViolationKind.DUPLICATE_NAME, message=f"Name {name!r} declared {n} times", element=name)
        for name, n in counts.items()
        if n > 1
    ]


def _check_function(p: Program, fn: Function) -> List[Violation]:
    violations: List[Violation] = []
    locations = set(fn.locations)

    for edge in fn.edges:
        if edge.src not in locations or edge.dst not in locations:
            violations.append(Violation(
                kind=ViolationKind.EDGE_OUTSIDE_FUNCTION,
                message=f"Edge leaves the locations of {fn.name}",
                element=_edge_text(edge),
            ))
        if edge.dst == fn.entry:
            violations.append(Violation(
                kind=ViolationKind.ENTRY_HAS_IN_EDGE,
                message=f"Entry location {fn.entry} of {fn.name} has an in-edge",
                element=_edge_text(edge),
            ))
        if edge.src == fn.exit:
            violations.append(Violation(
                kind=ViolationKind.EXIT_HAS_OUT_EDGE,
                message=f"Exit location {fn.exit} of {fn.name} has an out-edge",
                element=_edge_text(edge),
            ))
        if isinstance(edge.action, (CallAssign, CallVoid)):
            callee = edge.action.callee
            if callee == p.start_function:
                violations.append(Violation(
                    kind=ViolationKind.START_FUNCTION_CALLED,
                    message=f"Call to the start function {callee}",
                    element=_edge_text(edge),
                ))
            if {edge.src, edge.dst} & {fn.entry, fn.exit}:
                violations.append(Violation(
                    kind=ViolationKind.CALL_AT_ENTRY_OR_EXIT,
                    message="Call edge touches an entry or exit location",
                    element=_edge_text(edge),
                ))

    for loc in fn.locations:
        if loc == fn.exit:
            continue
        out = [e for e in fn.edges if e.src == loc]
        guards = [e.action for e in out if isinstance(e.action, Guard)]
        if not out:
            violations.append(Violation(
                kind=ViolationKind.DEAD_END,
                message=f"Location {loc} has no out-edge and is not the exit of {fn.name}",
                element=loc,
            ))
        elif guards and len(guards) != len(out):
            violations.append(Violation(
                kind=ViolationKind.MIXED_OUT_EDGES,
                message=f"Location {loc} mixes guard and non-guard out-edges",
                element=loc,
            ))
        elif guards:
            if len(guards) != 2:
                violations.append(Violation(
                    kind=ViolationKind.GUARD_DEGREE,
                    message=f"Branching location {loc} has {len(guards)} guard out-edges instead of 2",
                    element=loc,
                ))
            elif not are_negations(guards[0].cond, guards[1].cond):
                violations.append(Violation(
                    kind=ViolationKind.GUARDS_NOT_NEGATED,
                    message=f"Guards at {loc} are not syntactic negations of each other",
                    element=loc,
                ))
        elif len(out) != 1:
            violations.append(Violation(
                kind=ViolationKind.OUT_DEGREE,
                message=f"Non-branching location {loc} has {len(out)} out-edges",
                element=loc,
            ))
    return violations


def validate_program(p: Program) -> List[Violation]:
    """Return every structural violation; an empty list means the program is well-formed."""
    violations: List[Violation] = []
    if not p.start_function:
        violations.append(Violation(
            kind=ViolationKind.NO_START_FUNCTION, message="No start function", element="",
        ))
    elif not p.has_function(p.start_function):
        violations.append(Violation(
            kind=ViolationKind.UNKNOWN_START_FUNCTION,
            message=f"Start function {p.start_function} is not defined",
            element=p.start_function,
        ))
    violations.extend(_check_names(p))
    for fn in p.functions:
        violations.extend(_check_function(p, fn))

    debug(LogRecord(
        event=LogEvent.PROGRAM_VALIDATED.value,
        message=f"Validation found {len(violations)} violations",
        data={"violations": [v.kind.value for v in violations]},
    ))
    return violations
