"""Render programs back to ``.cse`` text; parse(render(p)) == p."""

from typing import List

from models.operators import UnaryOperator
from models.program import (
    Action,
    Assign,
    Bind,
    Binary,
    BoolLit,
    CallAssign,
    CallVoid,
    Expr,
    Function,
    Guard,
    Index,
    IntLit,
    Program,
    Ret,
    Skip,
    Unary,
    Var,
    VarDecl,
)


def _operand(expr: Expr) -> str:
    text = render_expr(expr)
    return f"({text})" if isinstance(expr, Binary) else text


def render_expr(expr: Expr) -> str:
    if isinstance(expr, IntLit):
        return str(expr.value)
    if isinstance(expr, BoolLit):
        return "true" if expr.value else "false"
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Index):
        return f"{expr.array}[{render_expr(expr.index)}]"
    if isinstance(expr, Unary):
        if expr.op is UnaryOperator.NEG and isinstance(expr.operand, IntLit):
            return f"-({expr.operand.value})"
        return f"{expr.op.value}{_operand(expr.operand)}"
    return f"{_operand(expr.left)} {expr.op.value} {_operand(expr.right)}"


def render_action(action: Action) -> str:
    if isinstance(action, Assign):
        return f"{action.target} := {render_expr(action.expr)}"
    if isinstance(action, CallAssign):
        args = ", ".join(render_expr(a) for a in action.args)
        return f"{action.target} := {action.callee}({args})"
    if isinstance(action, CallVoid):
        args = ", ".join(render_expr(a) for a in action.args)
        return f"{action.callee}({args})"
    if isinstance(action, Ret):
        return f"ret {render_expr(action.expr)}"
    if isinstance(action, Skip):
        return "skip"
    if isinstance(action, Guard):
        return render_expr(action.cond)
    assert isinstance(action, Bind)
    bindings = ", ".join(f"{name} := {render_expr(expr)}" for name, expr in action.bindings)
    resets = f"; reset {', '.join(action.resets)}" if action.resets else ""
    return f"bind({bindings}{resets})"


def _decls(decls: tuple[VarDecl, ...]) -> str:
    return ", ".join(f"{d.name}: {d.type.value}" for d in decls)


def render_function(fn: Function, is_start: bool) -> str:
    lines = [f"fn {fn.name}({_decls(fn.params)}) -> {fn.return_type.value}{' start' if is_start else ''} {{"]
    lines.append(f"  entry {fn.entry};")
    lines.append(f"  exit {fn.exit};")
    if fn.locals:
        lines.append(f"  locals {_decls(fn.locals)};")
    for edge in fn.edges:
        lines.append(f"  {edge.src} -> {edge.dst} : {render_action(edge.action)};")
    lines.append("}")
    return "\n".join(lines)


def render_program(p: Program) -> str:
    parts: List[str] = [f"global {d.name} : {d.type.value};" for d in p.globals]
    if parts:
        parts.append("")
    for fn in p.functions:
        parts.append(render_function(fn, fn.name == p.start_function))
        parts.append("")
    return "\n".join(parts)
