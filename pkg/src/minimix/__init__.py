"""minimix: a tiny first-order functional language with an interpreter,
a naive inlining partial evaluator, and an online program specializer."""

from .lang import (
    INT_MAX,
    INT_MIN,
    Apply,
    BoolV,
    Const,
    Expr,
    FDef,
    If,
    IntV,
    JustV,
    ListV,
    NothingV,
    PairV,
    Prim,
    PrimOp,
    Prog,
    StrV,
    ValidationError,
    Value,
    Var,
    free_vars,
    lookup_fdef,
    lookup_var,
    structured_const_count,
    validate,
    value_eq,
)
from .interp import (
    DEFAULT_FUEL,
    ErrorKind,
    Exhausted,
    Failed,
    Ok,
    Outcome,
    OutOfFuel,
    apply_prim,
    evaluate,
)
from .naive import peval_naive
from .specialize import SpecStore, partition_args, peval
from .inline import call_graph, inline_residual, non_recursive_functions
from .dfa import (
    InvalidMachineError,
    Machine,
    encode_dfa_bti,
    encode_dfa_naive,
    parse_machine,
    run_machine,
    word_value,
)
from .syntax import (
    DuplicateBindingError,
    ParseError,
    format_value,
    parse_bindings,
    parse_program,
    pretty_expr,
    pretty_program,
)

__version__ = "0.1.0"

__all__ = [
    "INT_MAX",
    "INT_MIN",
    "Apply",
    "BoolV",
    "Const",
    "DEFAULT_FUEL",
    "DuplicateBindingError",
    "ErrorKind",
    "Exhausted",
    "Expr",
    "FDef",
    "Failed",
    "If",
    "IntV",
    "InvalidMachineError",
    "JustV",
    "ListV",
    "Machine",
    "NothingV",
    "Ok",
    "OutOfFuel",
    "Outcome",
    "PairV",
    "ParseError",
    "Prim",
    "PrimOp",
    "Prog",
    "SpecStore",
    "StrV",
    "ValidationError",
    "Value",
    "Var",
    "apply_prim",
    "call_graph",
    "encode_dfa_bti",
    "encode_dfa_naive",
    "evaluate",
    "format_value",
    "free_vars",
    "inline_residual",
    "lookup_fdef",
    "lookup_var",
    "non_recursive_functions",
    "parse_bindings",
    "parse_machine",
    "parse_program",
    "partition_args",
    "peval",
    "peval_naive",
    "pretty_expr",
    "pretty_program",
    "run_machine",
    "structured_const_count",
    "validate",
    "value_eq",
    "word_value",
]
