"""Program text frontend: parsing, rendering and structural validation."""

from .parser import parse_program, parse_expression, tokenize
from .render import render_program, render_function, render_action, render_expr
from .validator import validate_program

__all__ = [
    "parse_program", "parse_expression", "tokenize",
    "render_program", "render_function", "render_action", "render_expr",
    "validate_program",
]
