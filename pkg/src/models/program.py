"""Control-flow-graph programs: functions of locations connected by action-labelled edges."""

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Mapping, Tuple, Union

from .errors import UnknownLocation
from .operators import COMPLEMENT, BinaryOperator, UnaryOperator


class VarType(str, enum.Enum):
    INT = "int"
    BOOL = "bool"
    INT_ARRAY = "int[]"


@dataclass(frozen=True)
class VarDecl:
    name: str
    type: VarType


# ---------------------------------------------------------------- concrete expressions

@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Index:
    """Array read ``array[index]``; arrays are only ever read through a variable."""

    array: str
    index: "Expr"


@dataclass(frozen=True)
class Unary:
    op: UnaryOperator
    operand: "Expr"


@dataclass(frozen=True)
class Binary:
    op: BinaryOperator
    left: "Expr"
    right: "Expr"


Expr = Union[IntLit, BoolLit, Var, Index, Unary, Binary]


def negate(expr: Expr) -> Expr:
    """Syntactic negation: flips a comparison, strips a leading ``!`` or adds one."""
    if isinstance(expr, Binary) and expr.op in COMPLEMENT:
        return Binary(COMPLEMENT[expr.op], expr.left, expr.right)
    if isinstance(expr, Unary) and expr.op is UnaryOperator.NOT:
        return expr.operand
    if isinstance(expr, BoolLit):
        return BoolLit(not expr.value)
    return Unary(UnaryOperator.NOT, expr)


def are_negations(a: Expr, b: Expr) -> bool:
    return negate(a) == b or negate(b) == a


# ---------------------------------------------------------------- actions

@dataclass(frozen=True)
class Assign:
    target: str
    expr: Expr


@dataclass(frozen=True)
class CallAssign:
    target: str
    callee: str
    args: Tuple[Expr, ...]


@dataclass(frozen=True)
class CallVoid:
    callee: str
    args: Tuple[Expr, ...]


@dataclass(frozen=True)
class Ret:
    expr: Expr


@dataclass(frozen=True)
class Skip:
    pass


@dataclass(frozen=True)
class Guard:
    cond: Expr


@dataclass(frozen=True)
class Bind:
    """Parallel assignment followed by a reset of locals to their initial symbols.

    Only part programs carry it, on the meta-edge that stands for a recursive call.
    """

    bindings: Tuple[Tuple[str, Expr], ...]
    resets: Tuple[str, ...] = ()


Action = Union[Assign, CallAssign, CallVoid, Ret, Skip, Guard, Bind]
CALL_ACTIONS = (CallAssign, CallVoid)


@dataclass(frozen=True)
class Edge:
    src: str
    dst: str
    action: Action

    @property
    def is_call(self) -> bool:
        return isinstance(self.action, CALL_ACTIONS)

    @property
    def is_guard(self) -> bool:
        return isinstance(self.action, Guard)


# ---------------------------------------------------------------- functions and programs

def ret_var_name(function: str) -> str:
    return f"ret_{function}"


@dataclass(frozen=True)
class Function:
    name: str
    params: Tuple[VarDecl, ...]
    locals: Tuple[VarDecl, ...]
    return_type: VarType
    entry: str
    exit: str
    edges: Tuple[Edge, ...]
    locations: Tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.locations:
            object.__setattr__(self, "locations", derive_locations(self.entry, self.exit, self.edges))

    @property
    def ret_var(self) -> str:
        return ret_var_name(self.name)

    @property
    def frame_variables(self) -> Tuple[VarDecl, ...]:
        """Variables saved in a call-stack frame: params then locals."""
        return self.params + self.locals

    @property
    def call_edges(self) -> Tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.is_call)


def derive_locations(entry: str, exit: str, edges: Tuple[Edge, ...]) -> Tuple[str, ...]:
    """Locations in order of first mention: entry, exit, then edge endpoints."""
    seen: Dict[str, None] = {entry: None, exit: None}
    for edge in edges:
        seen.setdefault(edge.src, None)
        seen.setdefault(edge.dst, None)
    return tuple(seen)


@dataclass(frozen=True)
class Program:
    globals: Tuple[VarDecl, ...]
    functions: Tuple[Function, ...]
    start_function: str

    @cached_property
    def variables(self) -> Tuple[VarDecl, ...]:
        """The variable universe in symbol numbering order.

        Explicit globals first, then each function's params and locals in
        declaration order, then one ``ret_<fn>`` per function.
        """
        result: List[VarDecl] = list(self.globals)
        for fn in self.functions:
            result.extend(fn.params)
            result.extend(fn.locals)
        result.extend(VarDecl(fn.ret_var, fn.return_type) for fn in self.functions)
        return tuple(result)

    @cached_property
    def var_types(self) -> Mapping[str, VarType]:
        return {decl.name: decl.type for decl in self.variables}

    @cached_property
    def global_names(self) -> frozenset[str]:
        """Explicit globals plus every ret_<fn>."""
        return frozenset(d.name for d in self.globals) | frozenset(fn.ret_var for fn in self.functions)

    @cached_property
    def _functions_by_name(self) -> Mapping[str, Function]:
        return {fn.name: fn for fn in self.functions}

    @cached_property
    def _owner(self) -> Mapping[str, Function]:
        owner: Dict[str, Function] = {}
        for fn in self.functions:
            for loc in fn.locations:
                owner.setdefault(loc, fn)
        return owner

    @cached_property
    def _out_edges(self) -> Mapping[str, Tuple[Edge, ...]]:
        out: Dict[str, List[Edge]] = {loc: [] for loc in self._owner}
        for fn in self.functions:
            for edge in fn.edges:
                out.setdefault(edge.src, []).append(edge)
        return {loc: tuple(edges) for loc, edges in out.items()}

    @cached_property
    def _in_edges(self) -> Mapping[str, Tuple[Edge, ...]]:
        incoming: Dict[str, List[Edge]] = {loc: [] for loc in self._owner}
        for fn in self.functions:
            for edge in fn.edges:
                incoming.setdefault(edge.dst, []).append(edge)
        return {loc: tuple(edges) for loc, edges in incoming.items()}

    def function(self, name: str) -> Function:
        try:
            return self._functions_by_name[name]
        except KeyError:
            raise KeyError(f"Unknown function: {name}") from None

    def has_function(self, name: str) -> bool:
        return name in self._functions_by_name

    @property
    def start(self) -> Function:
        return self.function(self.start_function)

    def function_of(self, location: str) -> Function:
        try:
            return self._owner[location]
        except KeyError:
            raise UnknownLocation(location) from None

    def has_location(self, location: str) -> bool:
        return location in self._owner

    def out_edges(self, location: str) -> Tuple[Edge, ...]:
        if location not in self._out_edges:
            raise UnknownLocation(location)
        return self._out_edges[location]

    def in_edges(self, location: str) -> Tuple[Edge, ...]:
        if location not in self._in_edges:
            raise UnknownLocation(location)
        return self._in_edges[location]

    def is_error_location(self, location: str) -> bool:
        """A non-exit location whose only out-edge is a skip self-loop."""
        if self.function_of(location).exit == location:
            return False
        edges = self.out_edges(location)
        return len(edges) == 1 and edges[0].dst == location and isinstance(edges[0].action, Skip)

    def is_final(self, location: str) -> bool:
        return location == self.start.exit or self.is_error_location(location)

    def all_locations(self) -> Tuple[str, ...]:
        return tuple(loc for fn in self.functions for loc in fn.locations)


def out_edges(p: Program, location: str) -> List[Edge]:
    """Edges leaving ``location`` in declaration order."""
    return list(p.out_edges(location))
