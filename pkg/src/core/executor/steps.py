"""Classic symbolic execution steps."""

from typing import List, Tuple

from models.errors import StuckState
from models.program import Assign, Bind, CallAssign, CallVoid, Edge, Guard, Program, Ret, Skip
from models.state import Frame, InitialMemory, ProgramState
from models.symbolic import TRUE, SymExpr, mk_and
from core.symbolic.evaluation import eval_in_memory

Successor = Tuple[ProgramState, SymExpr]


def initial_state(p: Program, theta0: InitialMemory) -> ProgramState:
    """(Θ, true, [], entry of the start function)."""
    return ProgramState.initial(theta0, p.start.entry)


def _return(p: Program, s: ProgramState, theta0: InitialMemory) -> ProgramState:
    frame = s.top()
    if not isinstance(frame, Frame):
        raise StuckState(s.location)
    callee = p.function_of(s.location)
    memory = theta0.reset(s.memory, (d.name for d in callee.frame_variables))
    memory = memory.update(frame.sigma.as_dict())
    if frame.destination is not None:
        memory = memory.update({frame.destination: memory[callee.ret_var]})
    return ProgramState(memory, s.condition, s.stack[:-1], frame.return_location)


def _call(p: Program, s: ProgramState, edge: Edge, theta0: InitialMemory) -> ProgramState:
    action = edge.action
    assert isinstance(action, (CallAssign, CallVoid))
    caller = p.function_of(edge.src)
    callee = p.function(action.callee)
    values = [eval_in_memory(s.memory, arg) for arg in action.args]
    saved = [d.name for d in caller.frame_variables]
    frame = Frame(
        sigma=s.memory.restrict(saved),
        return_location=edge.dst,
        function=caller.name,
        destination=action.target if isinstance(action, CallAssign) else None,
    )
    memory = theta0.reset(s.memory, saved + [d.name for d in callee.frame_variables])
    memory = memory.update({param.name: value for param, value in zip(callee.params, values)})
    return ProgramState(memory, s.condition, s.stack + (frame,), callee.entry)


def apply_edge(p: Program, s: ProgramState, edge: Edge, theta0: InitialMemory) -> Successor:
    """One classic step along ``edge``; the label is the evaluated guard or ``true``."""
    action = edge.action
    if isinstance(action, Guard):
        label = eval_in_memory(s.memory, action.cond)
        return ProgramState(s.memory, mk_and(s.condition, label), s.stack, edge.dst), label
    if isinstance(action, Assign):
        memory = s.memory.update({action.target: eval_in_memory(s.memory, action.expr)})
        return ProgramState(memory, s.condition, s.stack, edge.dst), TRUE
    if isinstance(action, Ret):
        ret_var = p.function_of(edge.src).ret_var
        memory = s.memory.update({ret_var: eval_in_memory(s.memory, action.expr)})
        return ProgramState(memory, s.condition, s.stack, edge.dst), TRUE
    if isinstance(action, Bind):
        values = {name: eval_in_memory(s.memory, expr) for name, expr in action.bindings}
        memory = theta0.reset(s.memory, action.resets).update(values)
        return ProgramState(memory, s.condition, s.stack, edge.dst), TRUE
    if isinstance(action, Skip):
        return ProgramState(s.memory, s.condition, s.stack, edge.dst), TRUE
    return _call(p, s, edge, theta0), TRUE


def classic_successors(p: Program, s: ProgramState, theta0: InitialMemory) -> List[Successor]:
    """Candidate successors of a non-final state; feasibility is the caller's business.

    Raises:
        StuckState: no out-edge and not a function exit with a frame to return to.
    """
    function = p.function_of(s.location)
    if s.location == function.exit:
        return [(_return(p, s, theta0), TRUE)]
    edges = p.out_edges(s.location)
    if not edges:
        raise StuckState(s.location)
    return [apply_edge(p, s, edge, theta0) for edge in edges]
