"""Composition of memories and program states."""

from models.state import CallStack, Frame, ProgramState, StackRecord, SymMemory
from models.symbolic import mk_and

from .evaluation import eval_in_memory


def compose_memory(memory: SymMemory, other: SymMemory) -> SymMemory:
    """(θ ∘ θ′)(a) = θ⟦θ′(a)⟧ over the domain of θ′."""
    return SymMemory({name: eval_in_memory(memory, value) for name, value in other.items()})


def rebase_record(memory: SymMemory, record: StackRecord) -> StackRecord:
    if isinstance(record, Frame):
        return Frame(compose_memory(memory, record.sigma), record.return_location, record.function, record.destination)
    return record


def rebase_stack(memory: SymMemory, stack: CallStack) -> CallStack:
    """θ ∘ Ξ: frames are rebased onto θ, markers and wildcards are untouched."""
    return tuple(rebase_record(memory, record) for record in stack)


def compose_states(s: ProgramState, other: ProgramState) -> ProgramState:
    """s ∘ s′ = (θ ∘ θ′, φ ∧ θ⟦φ′⟧, Ξ ∘ (θ ∘ Ξ′), l′)."""
    return ProgramState(
        memory=compose_memory(s.memory, other.memory),
        condition=mk_and(s.condition, eval_in_memory(s.memory, other.condition)),
        stack=s.stack + rebase_stack(s.memory, other.stack),
        location=other.location,
    )
