"""Operators shared by concrete and symbolic expressions."""

import enum


class UnaryOperator(str, enum.Enum):
    NOT = "!"
    NEG = "-"


class BinaryOperator(str, enum.Enum):
    ADD = "+"
    SUB = "-"
    MUL = "*"
    DIV = "/"
    MOD = "%"
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="
    EQ = "=="
    NE = "!="
    AND = "&&"
    OR = "||"

    @property
    def is_arithmetic(self) -> bool:
        return self in _ARITHMETIC

    @property
    def is_comparison(self) -> bool:
        return self in _COMPARISON

    @property
    def is_logical(self) -> bool:
        return self in (BinaryOperator.AND, BinaryOperator.OR)


_ARITHMETIC = frozenset({
    BinaryOperator.ADD, BinaryOperator.SUB, BinaryOperator.MUL, BinaryOperator.DIV, BinaryOperator.MOD,
})
_COMPARISON = frozenset({
    BinaryOperator.LT, BinaryOperator.LE, BinaryOperator.GT, BinaryOperator.GE,
    BinaryOperator.EQ, BinaryOperator.NE,
})

# a < b is refuted exactly by a >= b, and so on
COMPLEMENT = {
    BinaryOperator.LT: BinaryOperator.GE,
    BinaryOperator.GE: BinaryOperator.LT,
    BinaryOperator.GT: BinaryOperator.LE,
    BinaryOperator.LE: BinaryOperator.GT,
    BinaryOperator.EQ: BinaryOperator.NE,
    BinaryOperator.NE: BinaryOperator.EQ,
}

# Binding strength used by the parser, loosest first
PRECEDENCE = {
    BinaryOperator.OR: 1,
    BinaryOperator.AND: 2,
    BinaryOperator.LT: 3, BinaryOperator.LE: 3, BinaryOperator.GT: 3,
    BinaryOperator.GE: 3, BinaryOperator.EQ: 3, BinaryOperator.NE: 3,
    BinaryOperator.ADD: 4, BinaryOperator.SUB: 4,
    BinaryOperator.MUL: 5, BinaryOperator.DIV: 5, BinaryOperator.MOD: 5,
}


def euclidean_divmod(a: int, b: int) -> tuple[int, int]:
    """SMT-LIB integer division: the remainder is always in [0, |b|)."""
    r = a % abs(b)
    return (a - r) // b, r
