"""Ground evaluation of symbolic expressions under a model."""

from typing import Dict, Optional, Union

from models.errors import UnboundParameter
from models.operators import BinaryOperator, UnaryOperator, euclidean_divmod
from models.symbolic import (
    BinaryOp,
    BoolConst,
    Conjunction,
    Forall,
    IntConst,
    Parameter,
    Select,
    Sort,
    SymExpr,
    Symbol,
    UnaryOp,
)

from .base import ArrayModel, Model, ModelValue


def _default(symbol: Symbol) -> ModelValue:
    if symbol.sort is Sort.BOOL:
        return False
    if symbol.sort is Sort.ARRAY:
        return ArrayModel()
    return 0


def _arith(op: BinaryOperator, a: int, b: int) -> int:
    if op is BinaryOperator.ADD:
        return a + b
    if op is BinaryOperator.SUB:
        return a - b
    if op is BinaryOperator.MUL:
        return a * b
    # division by zero is unspecified in SMT-LIB; pick 0 and the dividend
    if b == 0:
        return 0 if op is BinaryOperator.DIV else a
    q, r = euclidean_divmod(a, b)
    return q if op is BinaryOperator.DIV else r


def _compare(op: BinaryOperator, a: Union[int, bool], b: Union[int, bool]) -> bool:
    if op is BinaryOperator.EQ:
        return a == b
    if op is BinaryOperator.NE:
        return a != b
    if op is BinaryOperator.LT:
        return a < b
    if op is BinaryOperator.LE:
        return a <= b
    if op is BinaryOperator.GT:
        return a > b
    return a >= b


def evaluate(e: SymExpr, model: Model, bound: Optional[Dict[Parameter, int]] = None) -> ModelValue:
    """Value of ``e`` with symbols and parameters taken from ``model``.

    Symbols missing from the model take their sort's default; a missing
    parameter raises UnboundParameter.
    """
    env = bound or {}
    if isinstance(e, (IntConst, BoolConst)):
        return e.value
    if isinstance(e, Symbol):
        return model.get(e, _default(e))
    if isinstance(e, Parameter):
        if e in env:
            return env[e]
        value = model.get(e)
        if value is None:
            raise UnboundParameter(str(e))
        return value
    if isinstance(e, Select):
        array = evaluate(e.array, model, env)
        assert isinstance(array, ArrayModel)
        return array[int(evaluate(e.index, model, env))]
    if isinstance(e, UnaryOp):
        value = evaluate(e.operand, model, env)
        return (not value) if e.op is UnaryOperator.NOT else -int(value)
    if isinstance(e, Conjunction):
        return all(evaluate(t, model, env) for t in e.terms)
    if isinstance(e, Forall):
        lo, hi = int(evaluate(e.lo, model, env)), int(evaluate(e.hi, model, env))
        return all(evaluate(e.body, model, {**env, e.var: v}) for v in range(lo, hi))

    assert isinstance(e, BinaryOp)
    if e.op is BinaryOperator.AND:
        return bool(evaluate(e.left, model, env)) and bool(evaluate(e.right, model, env))
    if e.op is BinaryOperator.OR:
        return bool(evaluate(e.left, model, env)) or bool(evaluate(e.right, model, env))
    left, right = evaluate(e.left, model, env), evaluate(e.right, model, env)
    assert not isinstance(left, ArrayModel) and not isinstance(right, ArrayModel)
    if e.op.is_arithmetic:
        return _arith(e.op, int(left), int(right))
    return _compare(e.op, left, right)
