"""Re-checking computed templates, and corrupting them for fault injection."""

from dataclasses import replace
from typing import List

from models.operators import BinaryOperator
from models.state import InitialMemory, SymMemory
from models.symbolic import FALSE, TRUE, IntConst, Sort, SymExpr, mk_and, mk_binary, mk_not, mk_or, sort_of
from models.template import Mutation, Template
from core.solver.base import SolverBackend, Verdict
from core.symbolic.composition import compose_memory
from core.symbolic.evaluation import substitute_parameters
from core.symbolic.valuation import apply_valuation

CLOSED_FORM_RANGE = range(9)


def _power(step: SymMemory, times: int, identity: SymMemory) -> SymMemory:
    result = identity
    for _ in range(times):
        result = compose_memory(result, step)
    return result


def _memories_differ(a: SymMemory, b: SymMemory) -> SymExpr:
    """A formula satisfiable iff some variable differs; arrays compare syntactically."""
    differs: SymExpr = FALSE
    for name, left in a.items():
        right = b[name]
        if left == right:
            continue
        if sort_of(left) is Sort.ARRAY:
            return TRUE
        differs = mk_or(differs, mk_not(mk_binary(BinaryOperator.EQ, left, right)))
    return differs


def _check_closed_form(
    closed: SymMemory, step: SymMemory, template: Template, theta0: InitialMemory, solver: SolverBackend,
    label: str,
) -> List[str]:
    problems = []
    identity = theta0.memory.restrict(step)
    for nu in CLOSED_FORM_RANGE:
        instance = apply_valuation(closed, {template.parameter: nu})
        verdict = solver.check_formula(_memories_differ(instance, _power(step, nu, identity))).verdict
        if verdict is not Verdict.UNSAT:
            problems.append(f"{label} closed form differs from {nu}-fold composition ({verdict.value})")
    return problems


def verify_template(template: Template, theta0: InitialMemory, solver: SolverBackend) -> List[str]:
    """Problems found in ``template``; empty when it is valid.

    Checks that every exit condition is satisfiable, that exit conditions are
    pairwise exclusive, and that the closed memory forms agree with repeated
    composition of the one-step memory for κ = 0..8.
    """
    problems: List[str] = []
    for exit in template.exits:
        if solver.check_formula(exit.condition).verdict is not Verdict.SAT:
            problems.append(f"exit {exit.location} condition is not satisfiable")
    for i, first in enumerate(template.exits):
        for second in template.exits[i + 1:]:
            both = mk_and(first.condition, second.condition)
            if solver.check_formula(both).verdict is not Verdict.UNSAT:
                problems.append(f"exits {first.location} and {second.location} overlap")

    kappa = template.parameter
    # θx⟨κ⟩ = θ⟨κ⟩ ∘ θ̂, so at κ = ν each exit memory must equal θ^ν composed with its κ = 0 instance
    for exit in template.exits:
        base = apply_valuation(exit.memory, {kappa: 0})
        for nu in CLOSED_FORM_RANGE:
            expected = compose_memory(_power(template.cycle_memory, nu, theta0.memory), base)
            instance = apply_valuation(exit.memory, {kappa: nu})
            verdict = solver.check_formula(_memories_differ(instance, expected)).verdict
            if verdict is not Verdict.UNSAT:
                problems.append(
                    f"exit {exit.location} memory differs from {nu}-fold composition ({verdict.value})"
                )
                break

    if template.recursion is not None:
        problems.extend(_check_closed_form(
            template.recursion.memory, template.recursion.step_memory, template, theta0, solver, "return",
        ))
    return problems


def mutate_template(template: Template, mutation: Mutation) -> Template:
    """A deliberately broken copy of ``template``."""
    if mutation is Mutation.WEAKEN_CONDITION:
        return template.with_exits(tuple(replace(e, condition=TRUE) for e in template.exits))
    if mutation is Mutation.PERTURB_COEFFICIENT:
        doubled = mk_binary(BinaryOperator.MUL, IntConst(2), template.parameter)
        mapping = {template.parameter: doubled}
        exits = tuple(
            replace(e, memory=SymMemory({
                name: substitute_parameters(value, mapping) for name, value in e.memory.items()
            }))
            for e in template.exits
        )
        return template.with_exits(exits)
    if len(template.exits) < 2:
        return template
    first, second, *rest = template.exits
    swapped = (replace(first, location=second.location), replace(second, location=first.location), *rest)
    return template.with_exits(tuple(swapped))
