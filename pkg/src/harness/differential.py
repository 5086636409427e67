"""Differential check of compact execution against classic execution.

Soundness: every classic leaf is an instance of some compact leaf under a
valuation whose classic depth equals the leaf's depth. Completeness: every
satisfiable instance of a compact leaf with parameters up to ``bound`` is
equivalent to a classic leaf.

Leaves beyond the frontier of a truncated run are counted as uncovered and
mark the report partial instead of failing it.
"""

import itertools
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence

from models.program import Program
from models.reports import (
    CompletenessWitness,
    DiffReport,
    SoundnessWitness,
    UnmatchedClassicLeaf,
    UnmatchedValuation,
)
from models.state import InitialMemory, Valuation
from models.symbolic import Parameter
from core.executor.config import ExecConfig, ExecMode
from core.executor.engine import ExecResult, Leaf, execute
from core.solver.base import SolverBackend, Verdict
from core.symbolic.equivalence import states_equivalent
from core.symbolic.valuation import apply_valuation, state_parameters
from core.templates.builder import TemplateLimits, compute_templates
from core.templates.store import TemplateStore
from utils.logging import LogEvent, LogRecord, info, warning


@dataclass(frozen=True)
class DiffBudgets:
    classic: int = 500
    compact: int = 100


def _parameters(leaf: Leaf) -> List[Parameter]:
    params = set(state_parameters(leaf.state)) | set(leaf.classic_depth.parameters)
    return sorted(params, key=lambda p: (p.kind.value, p.index))


def _coefficients(leaf: Leaf) -> Dict[Parameter, int]:
    result: Dict[Parameter, int] = {}
    for parameter, c in leaf.classic_depth.coefficients:
        result[parameter] = result.get(parameter, 0) + c
    return result


def _search(
    params: Sequence[Parameter],
    coefficients: Dict[Parameter, int],
    slack: int,
    exact: bool,
    per_parameter: Optional[int] = None,
) -> Iterator[Dict[Parameter, int]]:
    """Assignments with Σ cᵢ·vᵢ ≤ slack (= slack when ``exact``), each vᵢ ≤ ``per_parameter``."""

    def assign(index: int, left: int, chosen: Dict[Parameter, int]) -> Iterator[Dict[Parameter, int]]:
        if index == len(params):
            if left == 0 or not exact:
                yield dict(chosen)
            return
        parameter = params[index]
        c = coefficients.get(parameter, 0)
        if c > 0:
            upper = left // c
        else:
            # does not move the depth
            upper = 0 if exact or per_parameter is None else per_parameter
        if per_parameter is not None:
            upper = min(upper, per_parameter)
        for value in range(upper + 1):
            chosen[parameter] = value
            yield from assign(index + 1, left - c * value, chosen)
        chosen.pop(parameter, None)

    if slack >= 0:
        yield from assign(0, slack, {})


def valuations_at_depth(leaf: Leaf, depth: int) -> Iterator[Dict[Parameter, int]]:
    """Valuations under which ``leaf`` stands for exactly ``depth`` classic steps."""
    return _search(_parameters(leaf), _coefficients(leaf), depth - leaf.classic_depth.base, exact=True)


def valuations_up_to(leaf: Leaf, bound: int, below: Optional[int] = None) -> Iterator[Dict[Parameter, int]]:
    """Valuations with every parameter at most ``bound``, and a classic depth under ``below`` if given."""
    params = _parameters(leaf)
    if below is None:
        for values in itertools.product(range(bound + 1), repeat=len(params)):
            yield dict(zip(params, values))
        return
    yield from _search(params, _coefficients(leaf), below - 1 - leaf.classic_depth.base, False, bound)


def _named(valuation: Valuation) -> Dict[str, int]:
    return {str(p): v for p, v in valuation.items()}


def _compact_frontier(compact: ExecResult) -> Optional[int]:
    """Smallest classic depth a truncated compact run left unexplored."""
    if not compact.stats.budget_exhausted or not compact.frontier:
        return None
    return min(leaf.classic_depth.base for leaf in compact.frontier)


def _soundness(
    classic: ExecResult, compact: ExecResult, solver: SolverBackend, report: DiffReport
) -> None:
    frontier = _compact_frontier(compact)
    for leaf in classic.leaves:
        depth = leaf.classic_depth.base
        witness = _find_compact_match(leaf, depth, compact.leaves, solver)
        if witness is not None:
            report.soundness.append(witness)
            continue
        if frontier is not None and frontier <= depth:
            report.uncovered_classic += 1
            continue
        report.unmatched_classic.append(UnmatchedClassicLeaf(
            classic_leaf=leaf.vertex if leaf.vertex is not None else -1,
            location=leaf.state.location,
            depth=depth,
        ))
        warning(LogRecord(
            event=LogEvent.DIFF_MISMATCH.value,
            message=f"Classic leaf at {leaf.state.location} (depth {depth}) has no compact counterpart",
            data={"location": leaf.state.location, "depth": depth},
        ))


def _find_compact_match(
    leaf: Leaf, depth: int, candidates: Sequence[Leaf], solver: SolverBackend
) -> Optional[SoundnessWitness]:
    for candidate in candidates:
        if candidate.state.location != leaf.state.location:
            continue
        for valuation in valuations_at_depth(candidate, depth):
            instance = apply_valuation(candidate.state, valuation)
            if states_equivalent(leaf.state, instance, solver):
                return SoundnessWitness(
                    classic_leaf=leaf.vertex if leaf.vertex is not None else -1,
                    compact_leaf=candidate.vertex if candidate.vertex is not None else -1,
                    valuation=_named(valuation),
                )
    return None


def _completeness(
    classic: ExecResult, compact: ExecResult, bound: int, solver: SolverBackend, report: DiffReport
) -> None:
    frontier = classic.stats.frontier_depth if classic.stats.budget_exhausted else None
    for leaf in compact.leaves:
        if frontier is not None:
            deepest = leaf.classic_depth.at({p: bound for p in leaf.classic_depth.parameters})
            if deepest >= frontier:
                report.uncovered_compact += 1
        for valuation in valuations_up_to(leaf, bound, frontier):
            instance = apply_valuation(leaf.state, valuation)
            verdict = solver.check_formula(instance.condition).verdict
            if verdict is not Verdict.SAT:
                continue
            depth = leaf.classic_depth.at(valuation)
            match = next(
                (
                    c for c in classic.leaves
                    if c.classic_depth.base == depth
                    and c.state.location == instance.location
                    and states_equivalent(c.state, instance, solver)
                ),
                None,
            )
            compact_id = leaf.vertex if leaf.vertex is not None else -1
            if match is not None:
                report.completeness.append(CompletenessWitness(
                    compact_leaf=compact_id,
                    valuation=_named(valuation),
                    classic_leaf=match.vertex if match.vertex is not None else -1,
                ))
            else:
                report.unmatched_compact.append(UnmatchedValuation(
                    compact_leaf=compact_id,
                    location=instance.location,
                    valuation=_named(valuation),
                    classic_depth=depth,
                ))
                warning(LogRecord(
                    event=LogEvent.DIFF_MISMATCH.value,
                    message=f"Compact leaf {compact_id} under {_named(valuation)} has no classic counterpart",
                    data={"location": instance.location, "depth": depth},
                ))


def differential_check(
    p: Program,
    solver: SolverBackend,
    bound: int = 3,
    budgets: Optional[DiffBudgets] = None,
    templates: Optional[TemplateStore] = None,
    limits: Optional[TemplateLimits] = None,
    name: str = "",
) -> DiffReport:
    """Run ``p`` classically and compactly and match their leaves both ways.

    ``templates`` overrides the computed ones, e.g. with a mutated template.
    """
    if bound < 0:
        raise ValueError(f"bound must be non-negative, got {bound}")
    budgets = budgets or DiffBudgets()
    theta0 = InitialMemory(p)
    if templates is None:
        templates = compute_templates(p, solver, limits, theta0)

    info(LogRecord(
        event=LogEvent.DIFF_STARTED.value,
        message=f"Differential check of {name or p.start_function} with bound {bound}",
        data={"bound": bound, "templates": len(templates)},
    ))
    classic = execute(p, ExecConfig(mode=ExecMode.CLASSIC, budget=budgets.classic, solver=solver), theta0)
    compact = execute(
        p,
        ExecConfig(mode=ExecMode.COMPACT, budget=budgets.compact, solver=solver, templates=templates),
        theta0,
    )

    report = DiffReport(
        program=name or p.start_function,
        bound=bound,
        classic_budget=budgets.classic,
        compact_budget=budgets.compact,
        classic_leaves=len(classic.leaves),
        compact_leaves=len(compact.leaves),
    )
    _soundness(classic, compact, solver, report)
    _completeness(classic, compact, bound, solver, report)
    report.partial = (
        classic.stats.budget_exhausted
        or compact.stats.budget_exhausted
        or report.uncovered_classic > 0
        or report.uncovered_compact > 0
    )

    info(LogRecord(
        event=LogEvent.DIFF_FINISHED.value,
        message=(
            f"{'Passed' if report.passed else 'Failed'}: {len(report.unmatched_classic)} classic and "
            f"{len(report.unmatched_compact)} compact leaves unmatched"
        ),
        data={"passed": report.passed, "partial": report.partial},
    ))
    return report
