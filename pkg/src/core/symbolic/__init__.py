"""Operations on symbolic values: evaluation in a memory, composition, valuation, equivalence."""

from .evaluation import eval_in_memory, substitute_parameters
from .composition import compose_memory, compose_states, rebase_stack
from .valuation import (
    apply_valuation,
    expand_quantifiers,
    state_parameters,
    rename_parameter,
    rename_in_memory,
    rename_in_stack,
)
# equivalence needs the solver package, which in turn uses valuation
from .equivalence import EquivalenceMode, states_equivalent

__all__ = [
    "eval_in_memory", "substitute_parameters",
    "compose_memory", "compose_states", "rebase_stack",
    "apply_valuation", "expand_quantifiers", "state_parameters",
    "rename_parameter", "rename_in_memory", "rename_in_stack",
    "EquivalenceMode", "states_equivalent",
]
