"""Classic and compact symbolic execution."""

from .steps import Successor, apply_edge, classic_successors, initial_state
from .config import ChooseStrategy, ExecConfig, ExecMode
from .tree import LinearDepth, SymExecTree, Vertex
from .engine import (
    ExecResult,
    ExecStats,
    Leaf,
    execute,
    instantiate_recursion_entry,
    instantiate_recursion_return,
    instantiate_template,
)

__all__ = [
    "Successor",
    "apply_edge",
    "classic_successors",
    "initial_state",
    "ChooseStrategy",
    "ExecConfig",
    "ExecMode",
    "LinearDepth",
    "SymExecTree",
    "Vertex",
    "ExecResult",
    "ExecStats",
    "Leaf",
    "execute",
    "instantiate_recursion_entry",
    "instantiate_recursion_return",
    "instantiate_template",
]
