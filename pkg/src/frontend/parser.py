"""Parser for the ``.cse`` edge-list program syntax.

A regex tokenizer feeds a recursive-descent parser; precedence climbing handles
binary operators. Names and types are checked once the whole file is read,
since calls may refer to functions declared further down.
"""

import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Set, Tuple

from models.errors import CseNameError, CseTypeError, ParseError
from models.operators import PRECEDENCE, BinaryOperator, UnaryOperator
from models.program import (
    Action,
    Assign,
    Bind,
    Binary,
    BoolLit,
    CallAssign,
    CallVoid,
    Edge,
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
    VarType,
    ret_var_name,
)
from utils.logging import LogEvent, LogRecord, debug

KEYWORDS = frozenset({
    "global", "fn", "start", "entry", "exit", "locals", "ret", "skip",
    "true", "false", "int", "bool", "bind", "reset",
})

_TOKEN_SPEC = [
    ("COMMENT", r"//[^\n]*"),
    ("NEWLINE", r"\n"),
    ("WS", r"[ \t\r]+"),
    ("INT", r"\d+"),
    ("IDENT", r"[A-Za-z_][A-Za-z0-9_]*'*"),
    ("OP", r":=|->|<=|>=|==|!=|&&|\|\||[-+*/%<>!(){}\[\];:,]"),
    ("MISMATCH", r"."),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in _TOKEN_SPEC))

_BINARY_OPS = {op.value: op for op in BinaryOperator}


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    line: int
    column: int


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    line, line_start = 1, 0
    for match in _TOKEN_RE.finditer(text):
        kind, value = match.lastgroup or "MISMATCH", match.group()
        column = match.start() - line_start + 1
        if kind == "NEWLINE":
            line, line_start = line + 1, match.end()
        elif kind == "MISMATCH":
            raise ParseError(f"Unexpected character {value!r}", line, column)
        elif kind not in ("WS", "COMMENT"):
            tokens.append(Token(kind, value, line, column))
    tokens.append(Token("EOF", "", line, len(text) - line_start + 1))
    return tokens


@dataclass
class _FunctionSyntax:
    name: str
    params: Tuple[VarDecl, ...]
    return_type: VarType
    is_start: bool
    token: Token
    entry: Optional[str] = None
    exit: Optional[str] = None
    locals: Tuple[VarDecl, ...] = ()
    edges: Tuple[Tuple[Edge, Token], ...] = ()


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    # ------------------------------------------------------------ token helpers

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        token = self.current
        if token.kind != "EOF":
            self.pos += 1
        return token

    def at(self, value: str) -> bool:
        return self.current.kind in ("OP", "IDENT") and self.current.value == value

    def accept(self, value: str) -> bool:
        if self.at(value):
            self.advance()
            return True
        return False

    def expect(self, value: str) -> Token:
        if not self.at(value):
            raise self.error(f"Expected {value!r}")
        return self.advance()

    def error(self, message: str, token: Optional[Token] = None) -> ParseError:
        token = token or self.current
        found = "end of input" if token.kind == "EOF" else repr(token.value)
        return ParseError(f"{message}, found {found}", token.line, token.column)

    def name(self, what: str = "identifier") -> Token:
        token = self.current
        if token.kind != "IDENT" or token.value in KEYWORDS:
            raise self.error(f"Expected {what}")
        return self.advance()

    # ------------------------------------------------------------ declarations

    def program(self) -> Tuple[List[Tuple[VarDecl, Token]], List[_FunctionSyntax]]:
        globals_: List[Tuple[VarDecl, Token]] = []
        functions: List[_FunctionSyntax] = []
        while self.current.kind != "EOF":
            if self.accept("global"):
                token = self.current
                decl = self.declaration()
                self.expect(";")
                globals_.append((decl, token))
            elif self.at("fn"):
                functions.append(self.function())
            else:
                raise self.error("Expected 'global' or 'fn'")
        return globals_, functions

    def var_type(self) -> VarType:
        if self.accept("bool"):
            return VarType.BOOL
        if self.accept("int"):
            if self.accept("["):
                self.expect("]")
                return VarType.INT_ARRAY
            return VarType.INT
        raise self.error("Expected a type (int, bool or int[])")

    def declaration(self) -> VarDecl:
        name = self.name("variable name").value
        self.expect(":")
        return VarDecl(name, self.var_type())

    def declarations(self, closing: str) -> Tuple[VarDecl, ...]:
        decls: List[VarDecl] = []
        if self.at(closing):
            return ()
        decls.append(self.declaration())
        while self.accept(","):
            decls.append(self.declaration())
        return tuple(decls)

    def function(self) -> _FunctionSyntax:
        token = self.expect("fn")
        name = self.name("function name")
        self.expect("(")
        params = self.declarations(")")
        self.expect(")")
        self.expect("->")
        return_type = self.var_type()
        is_start = self.accept("start")
        fn = _FunctionSyntax(name.value, params, return_type, is_start, name)
        self.expect("{")
        edges: List[Tuple[Edge, Token]] = []
        while not self.accept("}"):
            if self.accept("entry"):
                fn.entry = self.name("location").value
                self.expect(";")
            elif self.accept("exit"):
                fn.exit = self.name("location").value
                self.expect(";")
            elif self.accept("locals"):
                fn.locals = fn.locals + self.declarations(";")
                self.expect(";")
            else:
                edges.append(self.edge())
        if fn.entry is None or fn.exit is None:
            raise ParseError(f"Function {fn.name} needs both 'entry' and 'exit'", token.line, token.column)
        fn.edges = tuple(edges)
        return fn

    def edge(self) -> Tuple[Edge, Token]:
        src = self.name("location")
        self.expect("->")
        dst = self.name("location").value
        self.expect(":")
        action = self.action()
        self.expect(";")
        return Edge(src.value, dst, action), src

    # ------------------------------------------------------------ actions

    def action(self) -> Action:
        if self.accept("skip"):
            return Skip()
        if self.accept("ret"):
            return Ret(self.expression())
        if self.accept("bind"):
            return self.bind()
        token = self.current
        if token.kind == "IDENT" and token.value not in KEYWORDS:
            nxt = self.peek()
            if nxt.value == ":=":
                self.advance()
                self.advance()
                callee = self.current
                if callee.kind == "IDENT" and callee.value not in KEYWORDS and self.peek().value == "(":
                    self.advance()
                    return CallAssign(token.value, callee.value, self.arguments())
                return Assign(token.value, self.expression())
            if nxt.value == "(":
                self.advance()
                return CallVoid(token.value, self.arguments())
        return Guard(self.expression())

    def arguments(self) -> Tuple[Expr, ...]:
        self.expect("(")
        args: List[Expr] = []
        if not self.at(")"):
            args.append(self.expression())
            while self.accept(","):
                args.append(self.expression())
        self.expect(")")
        return tuple(args)

    def bind(self) -> Bind:
        self.expect("(")
        bindings: List[Tuple[str, Expr]] = []
        resets: List[str] = []
        if not self.at(";") and not self.at(")"):
            while True:
                target = self.name("variable").value
                self.expect(":=")
                bindings.append((target, self.expression()))
                if not self.accept(","):
                    break
        if self.accept(";"):
            self.expect("reset")
            resets.append(self.name("variable").value)
            while self.accept(","):
                resets.append(self.name("variable").value)
        self.expect(")")
        return Bind(tuple(bindings), tuple(resets))

    # ------------------------------------------------------------ expressions

    def expression(self, min_prec: int = 1) -> Expr:
        left = self.unary()
        while self.current.kind == "OP" and self.current.value in _BINARY_OPS:
            op = _BINARY_OPS[self.current.value]
            prec = PRECEDENCE[op]
            if prec < min_prec:
                break
            self.advance()
            right = self.expression(prec + 1)
            left = Binary(op, left, right)
        return left

    def unary(self) -> Expr:
        if self.accept("!"):
            return Unary(UnaryOperator.NOT, self.unary())
        if self.accept("-"):
            # A literal directly after '-' is a negative literal; -(3) stays a negation
            if self.current.kind == "INT":
                return IntLit(-int(self.advance().value))
            return Unary(UnaryOperator.NEG, self.unary())
        return self.primary()

    def primary(self) -> Expr:
        token = self.current
        if token.kind == "INT":
            self.advance()
            return IntLit(int(token.value))
        if self.accept("true"):
            return BoolLit(True)
        if self.accept("false"):
            return BoolLit(False)
        if self.accept("("):
            inner = self.expression()
            self.expect(")")
            return inner
        name = self.name("expression")
        if self.accept("["):
            index = self.expression()
            self.expect("]")
            return Index(name.value, index)
        return Var(name.value)


# ---------------------------------------------------------------- checking


class _Checker:
    """Resolves names and types over the whole program."""

    def __init__(self, globals_: List[Tuple[VarDecl, Token]], functions: List[_FunctionSyntax]):
        self.globals = globals_
        self.functions = {fn.name: fn for fn in functions}
        self.ordered = functions
        self.global_types: Dict[str, VarType] = {}

    def check(self) -> None:
        taken: Set[str] = set()

        def claim(name: str, token: Token, what: str) -> None:
            if name in taken:
                raise CseNameError(f"Duplicate name {name!r} ({what})", token.line, token.column)
            taken.add(name)

        for fn in self.ordered:
            claim(fn.name, fn.token, "function")
        for fn in self.ordered:
            claim(ret_var_name(fn.name), fn.token, f"return variable of {fn.name}")
            self.global_types[ret_var_name(fn.name)] = fn.return_type
        for decl, token in self.globals:
            claim(decl.name, token, "global")
            self.global_types[decl.name] = decl.type
        for fn in self.ordered:
            for decl in fn.params + fn.locals:
                claim(decl.name, fn.token, f"variable of {fn.name}")

        owner: Dict[str, str] = {}
        for fn in self.ordered:
            locations = [fn.entry, fn.exit] + [loc for edge, _ in fn.edges for loc in (edge.src, edge.dst)]
            for loc in locations:
                assert loc is not None
                if owner.setdefault(loc, fn.name) != fn.name:
                    raise CseNameError(
                        f"Location {loc!r} used in both {owner[loc]} and {fn.name}", fn.token.line, fn.token.column
                    )
            for edge, token in fn.edges:
                self.check_action(fn, edge.action, token)

    def scope(self, fn: _FunctionSyntax) -> Dict[str, VarType]:
        scope = dict(self.global_types)
        scope.update({decl.name: decl.type for decl in fn.params + fn.locals})
        return scope

    def lookup(self, scope: Dict[str, VarType], name: str, token: Token) -> VarType:
        if name not in scope:
            raise CseNameError(f"Unknown variable {name!r}", token.line, token.column)
        return scope[name]

    def type_of(self, scope: Dict[str, VarType], expr: Expr, token: Token) -> VarType:
        if isinstance(expr, IntLit):
            return VarType.INT
        if isinstance(expr, BoolLit):
            return VarType.BOOL
        if isinstance(expr, Var):
            return self.lookup(scope, expr.name, token)
        if isinstance(expr, Index):
            if self.lookup(scope, expr.array, token) is not VarType.INT_ARRAY:
                raise CseTypeError(f"{expr.array!r} is not an array", token.line, token.column)
            self.require(scope, expr.index, VarType.INT, token, "array index")
            return VarType.INT
        if isinstance(expr, Unary):
            wanted = VarType.BOOL if expr.op is UnaryOperator.NOT else VarType.INT
            self.require(scope, expr.operand, wanted, token, f"operand of {expr.op.value}")
            return wanted
        op = expr.op
        if op.is_logical:
            self.require(scope, expr.left, VarType.BOOL, token, f"operand of {op.value}")
            self.require(scope, expr.right, VarType.BOOL, token, f"operand of {op.value}")
            return VarType.BOOL
        if op in (BinaryOperator.EQ, BinaryOperator.NE):
            left = self.type_of(scope, expr.left, token)
            right = self.type_of(scope, expr.right, token)
            if left is not right or left is VarType.INT_ARRAY:
                raise CseTypeError(
                    f"Cannot compare {left.value} with {right.value}", token.line, token.column
                )
            return VarType.BOOL
        self.require(scope, expr.left, VarType.INT, token, f"operand of {op.value}")
        self.require(scope, expr.right, VarType.INT, token, f"operand of {op.value}")
        return VarType.INT if op.is_arithmetic else VarType.BOOL

    def require(self, scope: Dict[str, VarType], expr: Expr, wanted: VarType, token: Token, what: str) -> None:
        actual = self.type_of(scope, expr, token)
        if actual is not wanted:
            raise CseTypeError(f"{what} must be {wanted.value}, got {actual.value}", token.line, token.column)

    def check_call(self, scope: Dict[str, VarType], callee: str, args: Tuple[Expr, ...], token: Token) -> VarType:
        target = self.functions.get(callee)
        if target is None:
            raise CseNameError(f"Unknown function {callee!r}", token.line, token.column)
        if len(args) != len(target.params):
            raise CseTypeError(
                f"{callee} expects {len(target.params)} arguments, got {len(args)}", token.line, token.column
            )
        for arg, param in zip(args, target.params):
            self.require(scope, arg, param.type, token, f"argument {param.name} of {callee}")
        return target.return_type

    def check_action(self, fn: _FunctionSyntax, action: Action, token: Token) -> None:
        scope = self.scope(fn)
        if isinstance(action, Assign):
            target = self.lookup(scope, action.target, token)
            if target is VarType.INT_ARRAY and not isinstance(action.expr, Var):
                raise CseTypeError("Arrays are assigned whole, from another array variable", token.line, token.column)
            self.require(scope, action.expr, target, token, f"value assigned to {action.target}")
        elif isinstance(action, CallAssign):
            target = self.lookup(scope, action.target, token)
            returned = self.check_call(scope, action.callee, action.args, token)
            if returned is not target:
                raise CseTypeError(
                    f"{action.callee} returns {returned.value}, {action.target} is {target.value}",
                    token.line, token.column,
                )
        elif isinstance(action, CallVoid):
            self.check_call(scope, action.callee, action.args, token)
        elif isinstance(action, Ret):
            self.require(scope, action.expr, fn.return_type, token, f"return value of {fn.name}")
        elif isinstance(action, Guard):
            self.require(scope, action.cond, VarType.BOOL, token, "guard")
        elif isinstance(action, Bind):
            for target_name, expr in action.bindings:
                self.require(scope, expr, self.lookup(scope, target_name, token), token, f"binding of {target_name}")
            for name in action.resets:
                self.lookup(scope, name, token)


def _start_function(functions: List[_FunctionSyntax]) -> str:
    marked = [fn for fn in functions if fn.is_start]
    if len(marked) > 1:
        token = marked[1].token
        raise CseNameError(
            f"Multiple start functions: {', '.join(fn.name for fn in marked)}", token.line, token.column
        )
    if marked:
        return marked[0].name
    # Unmarked files fall back to `main`, or to their only function
    names = [fn.name for fn in functions]
    if "main" in names:
        return "main"
    return names[0] if len(names) == 1 else ""


def parse_program(text: str) -> Program:
    """Parse ``.cse`` source text into a Program.

    Raises:
        ParseError: Malformed syntax.
        CseNameError: Duplicate or unknown names, or several start functions.
        CseTypeError: Ill-typed expressions or actions.
    """
    parser = _Parser(text)
    globals_, functions = parser.program()
    _Checker(globals_, functions).check()

    program = Program(
        globals=tuple(decl for decl, _ in globals_),
        functions=tuple(
            Function(
                name=fn.name,
                params=fn.params,
                locals=fn.locals,
                return_type=fn.return_type,
                entry=fn.entry or "",
                exit=fn.exit or "",
                edges=tuple(edge for edge, _ in fn.edges),
            )
            for fn in functions
        ),
        start_function=_start_function(functions),
    )
    debug(LogRecord(
        event=LogEvent.PROGRAM_PARSED.value,
        message=f"Parsed program with {len(program.functions)} functions",
        data={"functions": [fn.name for fn in program.functions], "start": program.start_function},
    ))
    return program


def parse_expression(text: str) -> Expr:
    """Parse a single expression (no name or type checks)."""
    parser = _Parser(text)
    expr = parser.expression()
    if parser.current.kind != "EOF":
        raise parser.error("Unexpected trailing input")
    return expr
