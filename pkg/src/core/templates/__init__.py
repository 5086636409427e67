"""Program part detection and template computation."""

from .detector import DetectorLimits, detect_candidate_parts
from .part_program import (
    PartRun,
    build_cycle_program,
    build_part_program,
    build_return_program,
    return_path,
    run_part,
)
from .closure import Unclosed, close_memory_form
from .store import TemplateStore
from .builder import (
    KAPPA,
    TAU,
    TemplateLimits,
    TemplateResult,
    compute_loop_template,
    compute_recursion_template,
    compute_templates,
)
from .verification import mutate_template, verify_template

__all__ = [
    "DetectorLimits",
    "detect_candidate_parts",
    "PartRun",
    "build_cycle_program",
    "build_part_program",
    "build_return_program",
    "return_path",
    "run_part",
    "Unclosed",
    "close_memory_form",
    "TemplateStore",
    "KAPPA",
    "TAU",
    "TemplateLimits",
    "TemplateResult",
    "compute_loop_template",
    "compute_recursion_template",
    "compute_templates",
    "mutate_template",
    "verify_template",
]
