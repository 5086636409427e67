"""
Core engine modules.

- symbolic: evaluation, composition, valuation and equivalence of states
- solver: SMT backends (external process, in-process z3, bounded oracle)
- executor: classic and compact symbolic execution
- templates: part detection and template computation
"""

# symbolic must come first: the solver interface uses valuation
from . import symbolic
from . import solver
from . import executor
from . import templates

from .executor import ExecConfig, ExecMode, ExecResult, execute
from .solver import create_solver
from .templates import TemplateStore, compute_templates

__all__ = [
    "symbolic",
    "solver",
    "executor",
    "templates",
    "ExecConfig",
    "ExecMode",
    "ExecResult",
    "execute",
    "create_solver",
    "TemplateStore",
    "compute_templates",
]
