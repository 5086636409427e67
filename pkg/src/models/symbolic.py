"""Symbolic expressions over initial symbols and iteration parameters.

Nodes are immutable and compared structurally. Build them through the ``mk_*``
constructors, which fold constants and flatten conjunctions; nothing else is
simplified, logical equivalence is the solver's business.
"""

import enum
from dataclasses import dataclass
from typing import Callable, FrozenSet, Iterator, Optional, Tuple, Union

from .errors import SortError
from .operators import BinaryOperator, UnaryOperator, euclidean_divmod
from .program import VarType


class Sort(str, enum.Enum):
    INT = "Int"
    BOOL = "Bool"
    ARRAY = "Array"

    @classmethod
    def of(cls, var_type: VarType) -> "Sort":
        return {VarType.INT: cls.INT, VarType.BOOL: cls.BOOL, VarType.INT_ARRAY: cls.ARRAY}[var_type]


class ParamKind(str, enum.Enum):
    KAPPA = "κ"   # iteration count of one instantiation
    TAU = "τ"     # quantified iteration index


@dataclass(frozen=True)
class IntConst:
    value: int


@dataclass(frozen=True)
class BoolConst:
    value: bool


@dataclass(frozen=True)
class Symbol:
    """Initial value αᵢ of program variable ``var``."""

    index: int
    var: str
    sort: Sort


@dataclass(frozen=True)
class Parameter:
    kind: ParamKind
    index: int

    def __str__(self) -> str:
        return f"{self.kind.value}{self.index}"


@dataclass(frozen=True)
class Select:
    """Read of array value ``array`` at ``index``."""

    array: "SymExpr"
    index: "SymExpr"


@dataclass(frozen=True)
class UnaryOp:
    op: UnaryOperator
    operand: "SymExpr"


@dataclass(frozen=True)
class BinaryOp:
    op: BinaryOperator
    left: "SymExpr"
    right: "SymExpr"


@dataclass(frozen=True)
class Conjunction:
    terms: Tuple["SymExpr", ...]


@dataclass(frozen=True)
class Forall:
    """``∀var. (lo ≤ var < hi → body)``"""

    var: Parameter
    lo: "SymExpr"
    hi: "SymExpr"
    body: "SymExpr"


SymExpr = Union[IntConst, BoolConst, Symbol, Parameter, Select, UnaryOp, BinaryOp, Conjunction, Forall]

TRUE = BoolConst(True)
FALSE = BoolConst(False)


def sort_of(e: SymExpr) -> Sort:
    if isinstance(e, (IntConst, Parameter, Select)):
        return Sort.INT
    if isinstance(e, (BoolConst, Conjunction, Forall)):
        return Sort.BOOL
    if isinstance(e, Symbol):
        return e.sort
    if isinstance(e, UnaryOp):
        return Sort.BOOL if e.op is UnaryOperator.NOT else Sort.INT
    if e.op.is_arithmetic:
        return Sort.INT
    return Sort.BOOL


def _expect(e: SymExpr, sort: Sort, context: str) -> None:
    actual = sort_of(e)
    if actual is not sort:
        raise SortError(f"{context}: expected {sort.value}, got {actual.value} in {render(e)}")


# ---------------------------------------------------------------- constructors

def const(value: Union[int, bool]) -> SymExpr:
    if isinstance(value, bool):
        return BoolConst(value)
    return IntConst(value)


def mk_unary(op: UnaryOperator, operand: SymExpr) -> SymExpr:
    if op is UnaryOperator.NOT:
        _expect(operand, Sort.BOOL, "!")
        if isinstance(operand, BoolConst):
            return BoolConst(not operand.value)
        return UnaryOp(op, operand)
    _expect(operand, Sort.INT, "unary -")
    if isinstance(operand, IntConst):
        return IntConst(-operand.value)
    return UnaryOp(op, operand)


def mk_not(operand: SymExpr) -> SymExpr:
    return mk_unary(UnaryOperator.NOT, operand)


def _fold_int(op: BinaryOperator, a: int, b: int) -> Optional[Union[int, bool]]:
    if op is BinaryOperator.ADD:
        return a + b
    if op is BinaryOperator.SUB:
        return a - b
    if op is BinaryOperator.MUL:
        return a * b
    if op in (BinaryOperator.DIV, BinaryOperator.MOD):
        if b == 0:
            return None
        q, r = euclidean_divmod(a, b)
        return q if op is BinaryOperator.DIV else r
    if op is BinaryOperator.LT:
        return a < b
    if op is BinaryOperator.LE:
        return a <= b
    if op is BinaryOperator.GT:
        return a > b
    if op is BinaryOperator.GE:
        return a >= b
    if op is BinaryOperator.EQ:
        return a == b
    if op is BinaryOperator.NE:
        return a != b
    return None


def mk_binary(op: BinaryOperator, left: SymExpr, right: SymExpr) -> SymExpr:
    if op is BinaryOperator.AND:
        return mk_and(left, right)
    if op is BinaryOperator.OR:
        return mk_or(left, right)

    if op.is_arithmetic or op in (BinaryOperator.LT, BinaryOperator.LE, BinaryOperator.GT, BinaryOperator.GE):
        _expect(left, Sort.INT, op.value)
        _expect(right, Sort.INT, op.value)
    else:
        left_sort = sort_of(left)
        if left_sort is Sort.ARRAY or left_sort is not sort_of(right):
            raise SortError(f"{op.value}: cannot compare {render(left)} with {render(right)}")

    if isinstance(left, IntConst) and isinstance(right, IntConst):
        folded = _fold_int(op, left.value, right.value)
        if folded is not None:
            return const(folded)
    if isinstance(left, BoolConst) and isinstance(right, BoolConst):
        same = left.value == right.value
        return BoolConst(same if op is BinaryOperator.EQ else not same)
    return BinaryOp(op, left, right)


def mk_and(*terms: SymExpr) -> SymExpr:
    flat: list[SymExpr] = []
    for term in terms:
        _expect(term, Sort.BOOL, "&&")
        if isinstance(term, Conjunction):
            flat.extend(term.terms)
        elif isinstance(term, BoolConst):
            if not term.value:
                return FALSE
        else:
            flat.append(term)
    if not flat:
        return TRUE
    if len(flat) == 1:
        return flat[0]
    return Conjunction(tuple(flat))


def mk_or(left: SymExpr, right: SymExpr) -> SymExpr:
    _expect(left, Sort.BOOL, "||")
    _expect(right, Sort.BOOL, "||")
    for a, b in ((left, right), (right, left)):
        if isinstance(a, BoolConst):
            return TRUE if a.value else b
    return BinaryOp(BinaryOperator.OR, left, right)


def mk_forall(var: Parameter, lo: SymExpr, hi: SymExpr, body: SymExpr) -> SymExpr:
    _expect(lo, Sort.INT, "quantifier bound")
    _expect(hi, Sort.INT, "quantifier bound")
    _expect(body, Sort.BOOL, "quantifier body")
    if isinstance(body, BoolConst) and body.value:
        return TRUE
    return Forall(var, lo, hi, body)


def mk_select(array: SymExpr, index: SymExpr) -> SymExpr:
    _expect(array, Sort.ARRAY, "array read")
    _expect(index, Sort.INT, "array index")
    return Select(array, index)


# ---------------------------------------------------------------- traversal

def children(e: SymExpr) -> Tuple[SymExpr, ...]:
    if isinstance(e, Select):
        return (e.array, e.index)
    if isinstance(e, UnaryOp):
        return (e.operand,)
    if isinstance(e, BinaryOp):
        return (e.left, e.right)
    if isinstance(e, Conjunction):
        return e.terms
    if isinstance(e, Forall):
        return (e.lo, e.hi, e.body)
    return ()


def walk(e: SymExpr) -> Iterator[SymExpr]:
    stack = [e]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def symbols_of(e: SymExpr) -> FrozenSet[Symbol]:
    return frozenset(node for node in walk(e) if isinstance(node, Symbol))


def free_parameters(e: SymExpr) -> FrozenSet[Parameter]:
    if isinstance(e, Parameter):
        return frozenset({e})
    if isinstance(e, Forall):
        inner = free_parameters(e.body) - {e.var}
        return free_parameters(e.lo) | free_parameters(e.hi) | inner
    result: FrozenSet[Parameter] = frozenset()
    for child in children(e):
        result |= free_parameters(child)
    return result


def rebuild(e: SymExpr, leaf: Callable[[SymExpr], Optional[SymExpr]]) -> SymExpr:
    """Bottom-up rewrite. ``leaf`` may replace a Symbol or Parameter (None keeps it).

    Forall binders are respected: the bound parameter is never handed to ``leaf``.
    """

    def go(node: SymExpr, bound: FrozenSet[Parameter]) -> SymExpr:
        if isinstance(node, (Symbol, Parameter)):
            if isinstance(node, Parameter) and node in bound:
                return node
            replaced = leaf(node)
            return node if replaced is None else replaced
        if isinstance(node, (IntConst, BoolConst)):
            return node
        if isinstance(node, Select):
            return mk_select(go(node.array, bound), go(node.index, bound))
        if isinstance(node, UnaryOp):
            return mk_unary(node.op, go(node.operand, bound))
        if isinstance(node, BinaryOp):
            return mk_binary(node.op, go(node.left, bound), go(node.right, bound))
        if isinstance(node, Conjunction):
            return mk_and(*(go(t, bound) for t in node.terms))
        return mk_forall(node.var, go(node.lo, bound), go(node.hi, bound), go(node.body, bound | {node.var}))

    return go(e, frozenset())


# ---------------------------------------------------------------- rendering

_RENDER_OPS = {
    BinaryOperator.AND: "∧",
    BinaryOperator.OR: "∨",
    BinaryOperator.LE: "≤",
    BinaryOperator.GE: "≥",
    BinaryOperator.NE: "≠",
    BinaryOperator.EQ: "=",
}


def render(e: SymExpr) -> str:
    """Canonical infix text with every binary operator parenthesised."""
    if isinstance(e, IntConst):
        return str(e.value)
    if isinstance(e, BoolConst):
        return "true" if e.value else "false"
    if isinstance(e, Symbol):
        return f"α{e.index}"
    if isinstance(e, Parameter):
        return str(e)
    if isinstance(e, Select):
        return f"{render(e.array)}({render(e.index)})"
    if isinstance(e, UnaryOp):
        return f"¬{render(e.operand)}" if e.op is UnaryOperator.NOT else f"-{render(e.operand)}"
    if isinstance(e, BinaryOp):
        return f"({render(e.left)} {_RENDER_OPS.get(e.op, e.op.value)} {render(e.right)})"
    if isinstance(e, Conjunction):
        return "(" + " ∧ ".join(render(t) for t in e.terms) + ")"
    return f"∀{e.var}.({render(e.lo)} ≤ {e.var} < {render(e.hi)} → {render(e.body)})"
