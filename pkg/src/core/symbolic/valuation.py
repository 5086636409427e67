"""Instantiating parameters: ⟨ν⟩ on expressions, memories, stacks and states."""

from typing import List, Union, overload

from models.errors import UnboundParameter
from models.state import CallStack, Frame, ProgramState, RecMarker, StackRecord, SymMemory, Valuation, Wildcard
from models.symbolic import (
    BinaryOp,
    Conjunction,
    Forall,
    IntConst,
    Parameter,
    Select,
    SymExpr,
    UnaryOp,
    free_parameters,
    mk_and,
    mk_binary,
    mk_forall,
    mk_select,
    mk_unary,
)

from .evaluation import substitute_parameters


def expand_quantifiers(e: SymExpr) -> SymExpr:
    """Unroll every bounded quantifier whose bounds are constants."""
    if isinstance(e, Forall):
        lo, hi = expand_quantifiers(e.lo), expand_quantifiers(e.hi)
        if isinstance(lo, IntConst) and isinstance(hi, IntConst):
            return mk_and(*(
                expand_quantifiers(substitute_parameters(e.body, {e.var: IntConst(v)}))
                for v in range(lo.value, hi.value)
            ))
        return mk_forall(e.var, lo, hi, expand_quantifiers(e.body))
    if isinstance(e, Select):
        return mk_select(expand_quantifiers(e.array), expand_quantifiers(e.index))
    if isinstance(e, UnaryOp):
        return mk_unary(e.op, expand_quantifiers(e.operand))
    if isinstance(e, BinaryOp):
        return mk_binary(e.op, expand_quantifiers(e.left), expand_quantifiers(e.right))
    if isinstance(e, Conjunction):
        return mk_and(*(expand_quantifiers(t) for t in e.terms))
    return e


def _value(valuation: Valuation, parameter: Parameter) -> int:
    if parameter not in valuation:
        raise UnboundParameter(str(parameter))
    return valuation[parameter]


def _expr(e: SymExpr, valuation: Valuation) -> SymExpr:
    missing = free_parameters(e) - set(valuation)
    if missing:
        raise UnboundParameter(", ".join(sorted(str(p) for p in missing)))
    mapping = {p: IntConst(_value(valuation, p)) for p in free_parameters(e)}
    return expand_quantifiers(substitute_parameters(e, mapping))


def _memory(memory: SymMemory, valuation: Valuation) -> SymMemory:
    return SymMemory({name: _expr(value, valuation) for name, value in memory.items()})


def _stack(stack: CallStack, valuation: Valuation) -> CallStack:
    records: List[StackRecord] = []
    for record in stack:
        if isinstance(record, Frame):
            records.append(Frame(
                _memory(record.sigma, valuation), record.return_location, record.function, record.destination
            ))
        elif isinstance(record, RecMarker):
            records.extend(Wildcard() for _ in range(_value(valuation, record.parameter)))
        else:
            records.append(record)
    return tuple(records)


@overload
def apply_valuation(x: ProgramState, valuation: Valuation) -> ProgramState: ...
@overload
def apply_valuation(x: SymMemory, valuation: Valuation) -> SymMemory: ...
@overload
def apply_valuation(x: CallStack, valuation: Valuation) -> CallStack: ...
@overload
def apply_valuation(x: SymExpr, valuation: Valuation) -> SymExpr: ...


def apply_valuation(
    x: Union[ProgramState, SymMemory, CallStack, SymExpr], valuation: Valuation
) -> Union[ProgramState, SymMemory, CallStack, SymExpr]:
    """Replace parameters by integers, unroll constant-bounded quantifiers and
    expand each recursion marker into ν(κ) wildcard records.

    Raises:
        UnboundParameter: ``x`` mentions a parameter the valuation leaves out.
    """
    if isinstance(x, ProgramState):
        return ProgramState(
            _memory(x.memory, valuation), _expr(x.condition, valuation), _stack(x.stack, valuation), x.location
        )
    if isinstance(x, SymMemory):
        return _memory(x, valuation)
    if isinstance(x, tuple):
        return _stack(x, valuation)
    return _expr(x, valuation)


def state_parameters(state: ProgramState) -> frozenset[Parameter]:
    """Every parameter a valuation of ``state`` has to cover."""
    params = set(free_parameters(state.condition))
    for _, value in state.memory.items():
        params |= free_parameters(value)
    for record in state.stack:
        if isinstance(record, RecMarker):
            params.add(record.parameter)
        elif isinstance(record, Frame):
            for _, value in record.sigma.items():
                params |= free_parameters(value)
    return frozenset(params)


def rename_parameter(e: SymExpr, old: Parameter, new: Parameter) -> SymExpr:
    return substitute_parameters(e, {old: new}) if old != new else e


def rename_in_memory(memory: SymMemory, old: Parameter, new: Parameter) -> SymMemory:
    if old == new:
        return memory
    return SymMemory({name: rename_parameter(value, old, new) for name, value in memory.items()})


def rename_in_stack(stack: CallStack, old: Parameter, new: Parameter) -> CallStack:
    records: List[StackRecord] = []
    for record in stack:
        if isinstance(record, Frame):
            records.append(Frame(
                rename_in_memory(record.sigma, old, new), record.return_location, record.function, record.destination
            ))
        elif isinstance(record, RecMarker) and record.parameter == old:
            records.append(RecMarker(record.template_id, new))
        else:
            records.append(record)
    return tuple(records)
