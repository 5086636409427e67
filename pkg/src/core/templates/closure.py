"""Closed forms θ⟨κ⟩ of one-iteration memories."""

from dataclasses import dataclass
from typing import Iterable, Optional, Union

from models.operators import BinaryOperator
from models.state import InitialMemory, SymMemory
from models.symbolic import BinaryOp, IntConst, Parameter, Sort, SymExpr, Symbol, mk_binary, render


@dataclass(frozen=True)
class Unclosed:
    """The variable whose one-iteration value has no closed form."""

    variable: str
    value: SymExpr

    def __str__(self) -> str:
        return f"{self.variable} ↦ {render(self.value)}"


def offset(value: SymExpr, base: Symbol) -> Optional[int]:
    """``c`` when ``value`` is ``base + c`` up to constant folding, else None."""
    if value == base:
        return 0
    if isinstance(value, BinaryOp) and value.op in (BinaryOperator.ADD, BinaryOperator.SUB):
        if isinstance(value.right, IntConst):
            inner = offset(value.left, base)
            if inner is None:
                return None
            return inner + value.right.value if value.op is BinaryOperator.ADD else inner - value.right.value
        if value.op is BinaryOperator.ADD and isinstance(value.left, IntConst):
            inner = offset(value.right, base)
            return None if inner is None else inner + value.left.value
    return None


def close_memory_form(
    memory: SymMemory,
    theta0: InitialMemory,
    parameter: Parameter,
    domain: Optional[Iterable[str]] = None,
) -> Union[SymMemory, Unclosed]:
    """θ⟨κ⟩ over ``domain`` (all of ``memory`` by default).

    Unchanged variables of any sort stay Θ(a); integers advanced by a
    constant ``c`` per iteration become Θ(a) + c·κ. Anything else is Unclosed.
    """
    names = list(domain) if domain is not None else list(memory)
    closed = {}
    for name in names:
        base = theta0[name]
        value = memory[name]
        if value == base:
            closed[name] = base
            continue
        c = offset(value, base) if base.sort is Sort.INT else None
        if c is None:
            return Unclosed(name, value)
        step = parameter if c == 1 else mk_binary(BinaryOperator.MUL, IntConst(c), parameter)
        closed[name] = mk_binary(BinaryOperator.ADD, base, step)
    return SymMemory(closed)
