"""Structural properties of symbolic execution trees."""

from dataclasses import dataclass, field
from typing import List

from models.symbolic import TRUE, mk_and
from core.executor.tree import SymExecTree, Vertex
from core.solver.base import SolverBackend, Verdict
from core.symbolic.equivalence import states_equivalent


@dataclass
class TreeProperties:
    """Violations of the tree properties; undecided queries are counted apart."""

    violations: List[str] = field(default_factory=list)
    unknown: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations


def _check_vertex(tree: SymExecTree, vertex: Vertex, solver: SolverBackend, report: TreeProperties) -> None:
    state = vertex.state
    if vertex.parent is not None:
        parent = tree[vertex.parent]
        assert vertex.label is not None
        if state.condition != mk_and(parent.state.condition, vertex.label):
            report.violations.append(f"vertex {vertex.id}: condition is not parent condition and edge label")
        if vertex.label == TRUE:
            return

    verdict = solver.check_formula(state.condition).verdict
    if verdict is Verdict.UNSAT:
        report.violations.append(f"vertex {vertex.id} at {state.location}: unsatisfiable path condition")
    elif verdict is Verdict.UNKNOWN:
        report.unknown += 1


def _check_siblings(tree: SymExecTree, vertex: Vertex, solver: SolverBackend, report: TreeProperties) -> None:
    children = [tree[c] for c in vertex.children]
    for i, first in enumerate(children):
        for second in children[i + 1:]:
            assert first.label is not None and second.label is not None
            both = mk_and(vertex.state.condition, first.label, second.label)
            verdict = solver.check_formula(both).verdict
            if verdict is Verdict.SAT:
                report.violations.append(f"siblings {first.id} and {second.id} of vertex {vertex.id} overlap")
            elif verdict is Verdict.UNKNOWN:
                report.unknown += 1


def check_tree_properties(tree: SymExecTree, solver: SolverBackend) -> TreeProperties:
    """Satisfiable path conditions, exclusive siblings and monotone conditions."""
    report = TreeProperties()
    for vertex in tree:
        _check_vertex(tree, vertex, solver, report)
        if len(vertex.children) > 1:
            _check_siblings(tree, vertex, solver, report)
    return report


def trees_isomorphic(a: SymExecTree, b: SymExecTree, solver: SolverBackend) -> bool:
    """Same shape with equivalent states at corresponding vertices, children in order."""
    if len(a) != len(b):
        return False
    pending = [(a.root, b.root)]
    while pending:
        u, v = pending.pop()
        if len(u.children) != len(v.children):
            return False
        if not states_equivalent(u.state, v.state, solver):
            return False
        pending.extend((a[x], b[y]) for x, y in zip(u.children, v.children))
    return True
