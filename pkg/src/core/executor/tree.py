"""Symbolic execution trees."""

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from models.state import ProgramState, Valuation
from models.symbolic import Parameter, SymExpr
from core.solver.base import Verdict


@dataclass(frozen=True)
class LinearDepth:
    """Classic steps a compact path stands for: ``base + Σ cᵢ·κᵢ``."""

    base: int = 0
    coefficients: Tuple[Tuple[Parameter, int], ...] = ()

    def plus(self, steps: int, parameter: Optional[Parameter] = None, per_unit: int = 0) -> "LinearDepth":
        coefficients = self.coefficients
        if parameter is not None and per_unit:
            coefficients = coefficients + ((parameter, per_unit),)
        return LinearDepth(self.base + steps, coefficients)

    @property
    def parameters(self) -> Tuple[Parameter, ...]:
        return tuple(p for p, _ in self.coefficients)

    @property
    def is_constant(self) -> bool:
        return not self.coefficients

    def at(self, valuation: Valuation) -> int:
        return self.base + sum(c * valuation.get(p, 0) for p, c in self.coefficients)

    def __str__(self) -> str:
        terms = [str(self.base)] + [f"{c}·{p}" for p, c in self.coefficients]
        return " + ".join(terms)


@dataclass
class Vertex:
    id: int
    state: ProgramState
    parent: Optional[int]
    label: Optional[SymExpr]
    depth: int
    classic_depth: LinearDepth
    verdict: Optional[Verdict] = None
    template_id: Optional[str] = None
    children: List[int] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return not self.children


class SymExecTree:
    """Vertices are numbered in insertion order; the root is vertex 0."""

    def __init__(self, mode: str):
        self.mode = mode
        self._vertices: Dict[int, Vertex] = {}

    def add_root(self, state: ProgramState) -> Vertex:
        if self._vertices:
            raise ValueError("tree already has a root")
        vertex = Vertex(0, state, None, None, 0, LinearDepth())
        self._vertices[0] = vertex
        return vertex

    def add_child(
        self,
        parent: int,
        state: ProgramState,
        label: SymExpr,
        classic_depth: LinearDepth,
        verdict: Optional[Verdict] = None,
        template_id: Optional[str] = None,
    ) -> Vertex:
        owner = self._vertices[parent]
        vertex = Vertex(
            len(self._vertices), state, parent, label, owner.depth + 1, classic_depth, verdict, template_id
        )
        self._vertices[vertex.id] = vertex
        owner.children.append(vertex.id)
        return vertex

    @property
    def root(self) -> Vertex:
        return self._vertices[0]

    def __getitem__(self, vertex_id: int) -> Vertex:
        return self._vertices[vertex_id]

    def __iter__(self) -> Iterator[Vertex]:
        return iter(self._vertices.values())

    def __len__(self) -> int:
        return len(self._vertices)

    def leaves(self) -> List[Vertex]:
        return [v for v in self if v.is_leaf]

    def edges(self) -> List[Tuple[int, int]]:
        return [(v.parent, v.id) for v in self if v.parent is not None]

    def path_to(self, vertex_id: int) -> List[Vertex]:
        path = []
        current: Optional[int] = vertex_id
        while current is not None:
            vertex = self._vertices[current]
            path.append(vertex)
            current = vertex.parent
        return list(reversed(path))
