"""Core definitions for a small first-order functional language.

Values, abstract syntax, environments, and the well-formedness checks shared
by the interpreter and both partial evaluators. Everything here is immutable
data; the modules that evaluate or transform programs live elsewhere.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Mapping, Optional, Union

# Integers are 64-bit signed; arithmetic that leaves this range is a runtime
# error, not a silent wrap.
INT_MIN = -(2**63)
INT_MAX = 2**63 - 1


# ---------------------------------------------------------------------------
# Runtime values


@dataclass(frozen=True)
class IntV:
    n: int


@dataclass(frozen=True)
class BoolV:
    b: bool


@dataclass(frozen=True)
class StrV:
    s: str


@dataclass(frozen=True)
class PairV:
    first: "Value"
    second: "Value"


@dataclass(frozen=True)
class ListV:
    items: tuple["Value", ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "items", tuple(self.items))


@dataclass(frozen=True)
class NothingV:
    pass


@dataclass(frozen=True)
class JustV:
    value: "Value"


Value = Union[IntV, BoolV, StrV, PairV, ListV, NothingV, JustV]


def value_eq(a: Value, b: Value) -> bool:
    """Structural equality, total over all value variants.

    Comparing values of different variants is False, never an error.
    """
    return a == b


# ---------------------------------------------------------------------------
# Abstract syntax


class PrimOp(Enum):
    """Primitive operators; the enum value is the surface spelling."""

    EQUAL = "=="
    ADD = "+"
    SUB = "-"
    MUL = "*"
    DIV = "/"
    LT = "<"
    GT = ">"
    AND = "&&"
    OR = "||"
    NOT = "!"
    PAIR = "pair"
    FST = "fst"
    SND = "snd"
    CONS = "cons"
    HEAD = "head"
    TAIL = "tail"
    IS_NIL = "isnil"
    JUST = "just"
    IS_NOTHING = "isnothing"
    FROM_JUST = "fromjust"

    @property
    def arity(self) -> int:
        return 1 if self in _UNARY_OPS else 2


_UNARY_OPS = frozenset()  # filled in below, PrimOp must exist first
_UNARY_OPS = frozenset(
    {
        PrimOp.NOT,
        PrimOp.FST,
        PrimOp.SND,
        PrimOp.HEAD,
        PrimOp.TAIL,
        PrimOp.IS_NIL,
        PrimOp.JUST,
        PrimOp.IS_NOTHING,
        PrimOp.FROM_JUST,
    }
)


@dataclass(frozen=True)
class Const:
    value: Value


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Apply:
    fname: str
    args: tuple["Expr", ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Prim:
    op: PrimOp
    args: tuple["Expr", ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "args", tuple(self.args))
        if len(self.args) != self.op.arity:
            raise ValueError(
                f"{self.op.value} takes {self.op.arity} argument(s), "
                f"got {len(self.args)}"
            )


@dataclass(frozen=True)
class If:
    cond: "Expr"
    then: "Expr"
    orelse: "Expr"


Expr = Union[Const, Var, Apply, Prim, If]


@dataclass(frozen=True)
class FDef:
    name: str
    params: tuple[str, ...]
    body: Expr

    def __post_init__(self) -> None:
        object.__setattr__(self, "params", tuple(self.params))


@dataclass(frozen=True)
class Prog:
    defs: tuple[FDef, ...]
    main: Expr

    def __post_init__(self) -> None:
        object.__setattr__(self, "defs", tuple(self.defs))


# ---------------------------------------------------------------------------
# Identifiers

# Builtin operator names and keywords are reserved; they can never be
# variable or function names, which keeps the surface syntax unambiguous.
BUILTIN_NAMES: dict[str, PrimOp] = {
    op.value: op for op in PrimOp if op.value[0].isalpha()
}
KEYWORDS = frozenset(
    {"fun", "main", "if", "then", "else", "true", "false", "nothing"}
) | frozenset(BUILTIN_NAMES)

_IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_']*\Z")


def is_identifier(name: str) -> bool:
    """Letters/digits/underscore/apostrophe, starting with a letter, and
    not a reserved word."""
    return bool(_IDENT_RE.match(name)) and name not in KEYWORDS


# ---------------------------------------------------------------------------
# Environments and lookups

Env = Mapping[str, Value]  # the partial evaluators also use Mapping[str, Expr]


def lookup_var(env: Mapping[str, object], name: str) -> Optional[object]:
    """The binding for name, or None when absent. Never fails."""
    return env.get(name)


def lookup_fdef(defs, name: str) -> Optional[FDef]:
    """The unique definition with the given name, or None."""
    for fdef in defs:
        if fdef.name == name:
            return fdef
    return None


def fdef_index(prog: Prog) -> dict[str, FDef]:
    return {fdef.name: fdef for fdef in prog.defs}


def free_vars(e: Expr) -> set[str]:
    """Names of all variables occurring in the expression."""
    out: set[str] = set()
    for node in iter_exprs(e):
        if isinstance(node, Var):
            out.add(node.name)
    return out


def iter_exprs(e: Expr) -> Iterator[Expr]:
    """Pre-order walk over an expression tree."""
    stack = [e]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, (Apply, Prim)):
            stack.extend(reversed(node.args))
        elif isinstance(node, If):
            stack.extend((node.orelse, node.then, node.cond))


def _contains_structured(v: Value) -> bool:
    if isinstance(v, (ListV, PairV)):
        return True
    if isinstance(v, JustV):
        return _contains_structured(v.value)
    return False


def structured_const_count(prog: Prog) -> int:
    """Number of constants (in any body or main) holding a list or a pair."""
    count = 0
    for body in [d.body for d in prog.defs] + [prog.main]:
        for node in iter_exprs(body):
            if isinstance(node, Const) and _contains_structured(node.value):
                count += 1
    return count


# ---------------------------------------------------------------------------
# Well-formedness


class ValidationError(Exception):
    pass


def _check_value(v: Value, where: str) -> None:
    if isinstance(v, IntV):
        if not (INT_MIN <= v.n <= INT_MAX):
            raise ValidationError(f"{where}: integer out of 64-bit range: {v.n}")
    elif isinstance(v, StrV):
        if "\n" in v.s or "\r" in v.s:
            raise ValidationError(f"{where}: string contains a line break")
    elif isinstance(v, PairV):
        _check_value(v.first, where)
        _check_value(v.second, where)
    elif isinstance(v, ListV):
        for item in v.items:
            _check_value(item, where)
    elif isinstance(v, JustV):
        _check_value(v.value, where)


def _check_body(e: Expr, arities: dict[str, int], where: str) -> None:
    for node in iter_exprs(e):
        if isinstance(node, Var):
            if not is_identifier(node.name):
                raise ValidationError(f"{where}: bad variable name {node.name!r}")
        elif isinstance(node, Const):
            _check_value(node.value, where)
        elif isinstance(node, Apply):
            if node.fname not in arities:
                raise ValidationError(f"{where}: unknown function {node.fname!r}")
            if len(node.args) != arities[node.fname]:
                raise ValidationError(
                    f"{where}: {node.fname} takes {arities[node.fname]} "
                    f"argument(s), got {len(node.args)}"
                )


def validate(prog: Prog) -> None:
    """Check program well-formedness, raising ValidationError.

    Definition names are distinct valid identifiers, parameters are distinct,
    bodies are closed over their parameters, and every application targets a
    known definition with matching arity. The main expression may have free
    variables; they are the program's inputs.
    """
    arities: dict[str, int] = {}
    for fdef in prog.defs:
        if not is_identifier(fdef.name):
            raise ValidationError(f"bad function name {fdef.name!r}")
        if fdef.name in arities:
            raise ValidationError(f"duplicate function {fdef.name!r}")
        arities[fdef.name] = len(fdef.params)
        if len(set(fdef.params)) != len(fdef.params):
            raise ValidationError(f"{fdef.name}: duplicate parameter names")
        for p in fdef.params:
            if not is_identifier(p):
                raise ValidationError(f"{fdef.name}: bad parameter name {p!r}")
    for fdef in prog.defs:
        where = f"fun {fdef.name}"
        _check_body(fdef.body, arities, where)
        extra = free_vars(fdef.body) - set(fdef.params)
        if extra:
            raise ValidationError(f"{where}: unbound variable(s) {sorted(extra)}")
    _check_body(prog.main, arities, "main")
