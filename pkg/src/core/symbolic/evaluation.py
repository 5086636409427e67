"""θ⟦e⟧: evaluating concrete or symbolic expressions in a symbolic memory."""

from typing import Mapping, Union

from models.errors import SortError
from models.program import Binary, BoolLit, Expr, Index, IntLit, Unary, Var
from models.state import SymMemory
from models.symbolic import (
    BoolConst,
    IntConst,
    Parameter,
    SymExpr,
    Symbol,
    mk_binary,
    mk_select,
    mk_unary,
    rebuild,
)

_CONCRETE = (IntLit, BoolLit, Var, Index, Unary, Binary)


def _read(memory: SymMemory, name: str) -> SymExpr:
    value = memory.get(name)
    if value is None:
        raise SortError(f"Memory does not define variable {name}")
    return value


def _eval_concrete(memory: SymMemory, e: Expr) -> SymExpr:
    if isinstance(e, IntLit):
        return IntConst(e.value)
    if isinstance(e, BoolLit):
        return BoolConst(e.value)
    if isinstance(e, Var):
        return _read(memory, e.name)
    if isinstance(e, Index):
        return mk_select(_read(memory, e.array), _eval_concrete(memory, e.index))
    if isinstance(e, Unary):
        return mk_unary(e.op, _eval_concrete(memory, e.operand))
    return mk_binary(e.op, _eval_concrete(memory, e.left), _eval_concrete(memory, e.right))


def eval_in_memory(memory: SymMemory, e: Union[Expr, SymExpr]) -> SymExpr:
    """Replace variable reads (concrete) or symbols αᵢ (symbolic) by their memory values.

    Parameters are left alone; only constants are folded.
    """
    if isinstance(e, _CONCRETE):
        return _eval_concrete(memory, e)

    def leaf(node: SymExpr) -> SymExpr | None:
        if isinstance(node, Symbol):
            return _read(memory, node.var)
        return None

    return rebuild(e, leaf)


def substitute_parameters(e: SymExpr, mapping: Mapping[Parameter, SymExpr]) -> SymExpr:
    if not mapping:
        return e
    return rebuild(e, lambda node: mapping.get(node) if isinstance(node, Parameter) else None)
