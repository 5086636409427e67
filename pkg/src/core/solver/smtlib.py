"""SMT-LIB v2 rendering of satisfiability queries.

Symbols αᵢ become ``aᵢ``, parameters κᵢ/τᵢ become ``kᵢ``/``tᵢ``. Arrays are
uninterpreted ``Int → Int`` functions, so only reads ``(aᵢ idx)`` are
expressible.
"""

from typing import List

from models.errors import UnsupportedSort
from models.operators import BinaryOperator, UnaryOperator
from models.symbolic import (
    BinaryOp,
    BoolConst,
    Conjunction,
    Forall,
    IntConst,
    ParamKind,
    Parameter,
    Select,
    Sort,
    SymExpr,
    Symbol,
    UnaryOp,
)

from .base import SatQuery

LOGIC = "ALL"

_OPS = {
    BinaryOperator.ADD: "+",
    BinaryOperator.SUB: "-",
    BinaryOperator.MUL: "*",
    BinaryOperator.DIV: "div",
    BinaryOperator.MOD: "mod",
    BinaryOperator.LT: "<",
    BinaryOperator.LE: "<=",
    BinaryOperator.GT: ">",
    BinaryOperator.GE: ">=",
    BinaryOperator.EQ: "=",
    BinaryOperator.OR: "or",
    BinaryOperator.AND: "and",
}


def symbol_name(symbol: Symbol) -> str:
    return f"a{symbol.index}"


def parameter_name(parameter: Parameter) -> str:
    prefix = "k" if parameter.kind is ParamKind.KAPPA else "t"
    return f"{prefix}{parameter.index}"


def _int(value: int) -> str:
    return str(value) if value >= 0 else f"(- {-value})"


def to_term(e: SymExpr) -> str:
    if isinstance(e, IntConst):
        return _int(e.value)
    if isinstance(e, BoolConst):
        return "true" if e.value else "false"
    if isinstance(e, Symbol):
        if e.sort is Sort.ARRAY:
            raise UnsupportedSort(f"Array symbol α{e.index} used as a value")
        return symbol_name(e)
    if isinstance(e, Parameter):
        return parameter_name(e)
    if isinstance(e, Select):
        if not isinstance(e.array, Symbol):
            raise UnsupportedSort("Only reads of initial array symbols are supported")
        return f"({symbol_name(e.array)} {to_term(e.index)})"
    if isinstance(e, UnaryOp):
        op = "not" if e.op is UnaryOperator.NOT else "-"
        return f"({op} {to_term(e.operand)})"
    if isinstance(e, BinaryOp):
        if e.op is BinaryOperator.NE:
            return f"(not (= {to_term(e.left)} {to_term(e.right)}))"
        return f"({_OPS[e.op]} {to_term(e.left)} {to_term(e.right)})"
    if isinstance(e, Conjunction):
        return "(and " + " ".join(to_term(t) for t in e.terms) + ")"
    var = parameter_name(e.var)
    return (
        f"(forall (({var} Int)) (=> (and (<= {to_term(e.lo)} {var}) (< {var} {to_term(e.hi)})) "
        f"{to_term(e.body)}))"
    )


def declarations(query: SatQuery) -> List[str]:
    lines = []
    for symbol in query.symbols:
        if symbol.sort is Sort.ARRAY:
            lines.append(f"(declare-fun {symbol_name(symbol)} (Int) Int)")
        else:
            lines.append(f"(declare-fun {symbol_name(symbol)} () {symbol.sort.value})")
    for parameter in query.parameters:
        name = parameter_name(parameter)
        lines.append(f"(declare-fun {name} () Int)")
        lines.append(f"(assert (>= {name} 0))")
    return lines


def query_body(query: SatQuery) -> str:
    """Declarations and assertions only, as fed to an incremental session."""
    lines = declarations(query)
    lines.append(f"(assert {to_term(query.formula)})")
    return "\n".join(lines) + "\n"


def to_smtlib(query: SatQuery) -> str:
    """A complete stand-alone script for ``query``.

    Raises:
        UnsupportedSort: the formula uses an array value other than through a read.
    """
    return f"(set-logic {LOGIC})\n" + query_body(query) + "(check-sat)\n(get-model)\n"
