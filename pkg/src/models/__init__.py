"""Data models: programs, symbolic values, states, templates, reports and errors."""

from .errors import (
    CseError,
    SourceError,
    ParseError,
    CseNameError,
    CseTypeError,
    UnknownLocation,
    SortError,
    UnboundParameter,
    SolverError,
    SolverProcessError,
    UnsupportedSort,
    DomainTooLarge,
    ExitOnCycle,
    MalformedPart,
    NonTermination,
    StuckState,
    LocationMismatch,
    MarkerMismatch,
    ConfigError,
    ViolationKind,
    Violation,
)

from .operators import (
    UnaryOperator,
    BinaryOperator,
)

from .program import (
    VarType,
    VarDecl,
    IntLit,
    BoolLit,
    Var,
    Index,
    Unary,
    Binary,
    Expr,
    negate,
    Assign,
    CallAssign,
    CallVoid,
    Ret,
    Skip,
    Guard,
    Bind,
    Action,
    Edge,
    Function,
    Program,
    out_edges,
    ret_var_name,
)

from .symbolic import (
    Sort,
    ParamKind,
    IntConst,
    BoolConst,
    Symbol,
    Parameter,
    Select,
    UnaryOp,
    BinaryOp,
    Conjunction,
    Forall,
    SymExpr,
    TRUE,
    FALSE,
    render,
)

from .state import (
    SymMemory,
    InitialMemory,
    Frame,
    RecMarker,
    Wildcard,
    StackRecord,
    CallStack,
    ProgramState,
    Valuation,
)

from .template import (
    PartKind,
    CandidatePart,
    PartProgram,
    TemplateExit,
    RecursionSummary,
    Template,
    FailureReason,
    TemplateFailure,
    Mutation,
)

from .reports import (
    VertexExport,
    TreeExport,
    DiffReport,
)

__all__ = [
    # Errors
    "CseError", "SourceError", "ParseError", "CseNameError", "CseTypeError", "UnknownLocation",
    "SortError", "UnboundParameter", "SolverError", "SolverProcessError", "UnsupportedSort",
    "DomainTooLarge", "ExitOnCycle", "MalformedPart", "NonTermination", "StuckState",
    "LocationMismatch", "MarkerMismatch", "ConfigError", "ViolationKind", "Violation",
    # Operators
    "UnaryOperator", "BinaryOperator",
    # Programs
    "VarType", "VarDecl", "IntLit", "BoolLit", "Var", "Index", "Unary", "Binary", "Expr", "negate",
    "Assign", "CallAssign", "CallVoid", "Ret", "Skip", "Guard", "Bind", "Action",
    "Edge", "Function", "Program", "out_edges", "ret_var_name",
    # Symbolic expressions
    "Sort", "ParamKind", "IntConst", "BoolConst", "Symbol", "Parameter", "Select", "UnaryOp",
    "BinaryOp", "Conjunction", "Forall", "SymExpr", "TRUE", "FALSE", "render",
    # States
    "SymMemory", "InitialMemory", "Frame", "RecMarker", "Wildcard", "StackRecord", "CallStack",
    "ProgramState", "Valuation",
    # Templates
    "PartKind", "CandidatePart", "PartProgram", "TemplateExit", "RecursionSummary", "Template",
    "FailureReason", "TemplateFailure", "Mutation",
    # Reports
    "VertexExport", "TreeExport", "DiffReport",
]
