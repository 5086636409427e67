"""Symbolic memories, call stacks and program states."""

from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple, Union

from .program import Program
from .symbolic import TRUE, Parameter, Sort, SymExpr, Symbol, render


class SymMemory:
    """Immutable map from program variables to symbolic expressions."""

    __slots__ = ("_values",)

    def __init__(self, values: Mapping[str, SymExpr]):
        self._values: Dict[str, SymExpr] = dict(values)

    def __getitem__(self, name: str) -> SymExpr:
        return self._values[name]

    def __contains__(self, name: object) -> bool:
        return name in self._values

    def __iter__(self) -> Iterator[str]:
        return iter(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SymMemory) and self._values == other._values

    def __hash__(self) -> int:
        return hash(tuple(self._values.items()))

    def __repr__(self) -> str:
        return f"SymMemory({self._values!r})"

    def items(self) -> Iterable[Tuple[str, SymExpr]]:
        return self._values.items()

    def get(self, name: str, default: Optional[SymExpr] = None) -> Optional[SymExpr]:
        return self._values.get(name, default)

    def update(self, changes: Mapping[str, SymExpr]) -> "SymMemory":
        if not changes:
            return self
        values = dict(self._values)
        values.update(changes)
        return SymMemory(values)

    def restrict(self, names: Iterable[str]) -> "SymMemory":
        return SymMemory({name: self._values[name] for name in names})

    def as_dict(self) -> Dict[str, SymExpr]:
        return dict(self._values)


class InitialMemory:
    """Θ: the injective map from every program variable to its own symbol.

    Numbering follows ``Program.variables``.
    """

    def __init__(self, program: Program):
        self._symbols: Dict[str, Symbol] = {
            decl.name: Symbol(index, decl.name, Sort.of(decl.type))
            for index, decl in enumerate(program.variables)
        }
        self._memory = SymMemory(self._symbols)

    def __getitem__(self, name: str) -> Symbol:
        return self._symbols[name]

    def __contains__(self, name: object) -> bool:
        return name in self._symbols

    @property
    def memory(self) -> SymMemory:
        return self._memory

    def names(self) -> Tuple[str, ...]:
        return tuple(self._symbols)

    def reset(self, memory: SymMemory, names: Iterable[str]) -> SymMemory:
        """Return ``memory`` with ``names`` mapped back to their initial symbols."""
        return memory.update({name: self._symbols[name] for name in names})


def render_memory(memory: SymMemory, theta0: Optional[InitialMemory] = None) -> str:
    """``{i↦(α3 + κ1)}``; with Θ given, identity entries are left out."""
    entries = [
        f"{name}↦{render(value)}"
        for name, value in memory.items()
        if theta0 is None or name not in theta0 or theta0[name] != value
    ]
    return "{" + ", ".join(entries) + "}"


# ---------------------------------------------------------------- call stack

@dataclass(frozen=True)
class Frame:
    """Caller context saved at a call: σ over the caller's params/locals."""

    sigma: SymMemory
    return_location: str
    function: str
    destination: Optional[str] = None


@dataclass(frozen=True)
class RecMarker:
    """Stands for κ pending recursive frames of one recursion template."""

    template_id: str
    parameter: Parameter


@dataclass(frozen=True)
class Wildcard:
    """Matches any single record; only produced by valuation."""


StackRecord = Union[Frame, RecMarker, Wildcard]
CallStack = Tuple[StackRecord, ...]


def render_record(record: StackRecord, theta0: Optional[InitialMemory] = None) -> str:
    if isinstance(record, Frame):
        dest = f", {record.destination}" if record.destination else ""
        return f"({record.return_location}{dest}; {render_memory(record.sigma, theta0)})"
    if isinstance(record, RecMarker):
        return f"({record.template_id}, {record.parameter})"
    return "⊥"


def render_stack(stack: CallStack, theta0: Optional[InitialMemory] = None) -> str:
    return "[" + ", ".join(render_record(r, theta0) for r in stack) + "]"


# ---------------------------------------------------------------- states

@dataclass(frozen=True)
class ProgramState:
    memory: SymMemory
    condition: SymExpr
    stack: CallStack
    location: str

    @classmethod
    def initial(cls, theta0: InitialMemory, location: str) -> "ProgramState":
        return cls(theta0.memory, TRUE, (), location)

    def top(self) -> Optional[StackRecord]:
        return self.stack[-1] if self.stack else None


Valuation = Mapping[Parameter, int]
