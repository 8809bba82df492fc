"""Big-step evaluator for the language in `lang`.

`evaluate` reduces a program's main expression to a value under an initial
environment. The environment may be partial or empty; touching an unbound
variable is a reported runtime failure, not a crash. A fuel budget counts
function applications and turns divergence into an `Exhausted` outcome.
"""

from __future__ import annotations

import queue
import sys
import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Optional, Union

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
    Value,
    Var,
    fdef_index,
    value_eq,
)

DEFAULT_FUEL = 10_000


class ErrorKind(Enum):
    UNBOUND_VARIABLE = "UnboundVariable"
    UNKNOWN_FUNCTION = "UnknownFunction"
    ARITY_MISMATCH = "ArityMismatch"
    TYPE_ERROR = "TypeError"
    DIV_BY_ZERO = "DivByZero"
    HEAD_OF_NIL = "HeadOfNil"
    FROM_JUST_NOTHING = "FromJustNothing"
    OVERFLOW = "Overflow"


class EvalFailure(Exception):
    """Raised internally while evaluating; surfaced as a Failed outcome."""

    def __init__(self, kind: ErrorKind, context: str = ""):
        super().__init__(f"{kind.value}: {context}" if context else kind.value)
        self.kind = kind
        self.context = context


class OutOfFuel(Exception):
    """The fuel budget (or the host recursion bound) was exceeded."""


@dataclass(frozen=True)
class Ok:
    value: Value


@dataclass(frozen=True)
class Failed:
    kind: ErrorKind
    context: str = field(default="", compare=False)


@dataclass(frozen=True)
class Exhausted:
    pass


Outcome = Union[Ok, Failed, Exhausted]


class Fuel:
    """Mutable budget of function applications."""

    __slots__ = ("remaining",)

    def __init__(self, remaining: int):
        self.remaining = remaining

    def spend(self) -> None:
        if self.remaining <= 0:
            raise OutOfFuel()
        self.remaining -= 1


# ---------------------------------------------------------------------------
# Deep recursion support
#
# Evaluation maps object-language recursion onto host recursion. Work is sent
# to a persistent worker thread with a large stack so that fuel, not the C
# stack, is the effective bound; blowing through _RECURSION_LIMIT anyway
# surfaces as a clean RecursionError, which callers report the same way as
# running out of fuel.

_STACK_BYTES = 128 * 1024 * 1024
_RECURSION_LIMIT = 150_000

_worker: Optional[threading.Thread] = None
_worker_jobs: "queue.SimpleQueue" = None  # type: ignore[assignment]
_worker_init = threading.Lock()


def _worker_loop(jobs) -> None:
    sys.setrecursionlimit(_RECURSION_LIMIT)
    while True:
        fn, args, out = jobs.get()
        try:
            out.put((True, fn(*args)))
        except BaseException as exc:  # noqa: BLE001 - rethrown by run_deep
            out.put((False, exc))


def run_deep(fn, *args):
    """Run fn(*args) on the big-stack worker thread (directly when already
    on it), pass the result or exception back."""
    global _worker, _worker_jobs
    if threading.current_thread() is _worker:
        return fn(*args)
    with _worker_init:
        if _worker is None or not _worker.is_alive():
            _worker_jobs = queue.SimpleQueue()
            old_size = threading.stack_size(_STACK_BYTES)
            try:
                _worker = threading.Thread(
                    target=_worker_loop,
                    args=(_worker_jobs,),
                    name="minimix-eval",
                    daemon=True,
                )
                _worker.start()
            finally:
                threading.stack_size(old_size)
    out: "queue.SimpleQueue" = queue.SimpleQueue()
    _worker_jobs.put((fn, args, out))
    ok, result = out.get()
    if not ok:
        raise result
    return result


# ---------------------------------------------------------------------------
# Evaluation


def evaluate(
    prog: Prog,
    env: Optional[Mapping[str, Value]] = None,
    fuel: int = DEFAULT_FUEL,
) -> Outcome:
    """Evaluate the program's main expression under an initial environment.

    The environment may bind any subset of main's free variables (residual
    programs are run by binding their remaining dynamic inputs). The program
    is assumed well-formed; see `lang.validate`.
    """
    defs = fdef_index(prog)
    initial = dict(env) if env else {}
    try:
        return Ok(run_deep(_eval, prog.main, initial, defs, Fuel(fuel)))
    except EvalFailure as failure:
        return Failed(failure.kind, failure.context)
    except (OutOfFuel, RecursionError):
        return Exhausted()


def _eval(e: Expr, env: dict[str, Value], defs: dict[str, FDef], fuel: Fuel) -> Value:
    match e:
        case Const(value):
            return value
        case Var(name):
            try:
                return env[name]
            except KeyError:
                raise EvalFailure(ErrorKind.UNBOUND_VARIABLE, name) from None
        case Prim(op, args):
            return apply_prim(op, [_eval(a, env, defs, fuel) for a in args])
        case If(cond, then, orelse):
            test = _eval(cond, env, defs, fuel)
            if not isinstance(test, BoolV):
                raise EvalFailure(ErrorKind.TYPE_ERROR, "if condition is not a boolean")
            return _eval(then if test.b else orelse, env, defs, fuel)
        case Apply(fname, args):
            fdef = defs.get(fname)
            if fdef is None:
                raise EvalFailure(ErrorKind.UNKNOWN_FUNCTION, fname)
            if len(args) != len(fdef.params):
                raise EvalFailure(
                    ErrorKind.ARITY_MISMATCH,
                    f"{fname} takes {len(fdef.params)} argument(s), got {len(args)}",
                )
            values = [_eval(a, env, defs, fuel) for a in args]
            fuel.spend()
            return _eval(fdef.body, dict(zip(fdef.params, values)), defs, fuel)
    raise TypeError(f"not an expression: {e!r}")


# ---------------------------------------------------------------------------
# Primitive operators


def _int(op: PrimOp, v: Value) -> int:
    if not isinstance(v, IntV):
        raise EvalFailure(
            ErrorKind.TYPE_ERROR, f"{op.value} expects an integer, got {_tag(v)}"
        )
    return v.n


def _bool(op: PrimOp, v: Value) -> bool:
    if not isinstance(v, BoolV):
        raise EvalFailure(
            ErrorKind.TYPE_ERROR, f"{op.value} expects a boolean, got {_tag(v)}"
        )
    return v.b


def _tag(v: Value) -> str:
    return type(v).__name__.removesuffix("V").lower()


def _fit(n: int, what: str) -> IntV:
    if not (INT_MIN <= n <= INT_MAX):
        raise EvalFailure(ErrorKind.OVERFLOW, what)
    return IntV(n)


def apply_prim(op: PrimOp, args: list[Value]) -> Value:
    """Apply a primitive to already-evaluated arguments (arity must match).

    Division is floor division. And/or are strict: both arguments are values
    by the time this runs; short-circuiting must be written with `if` in the
    object language.
    """
    match op:
        case PrimOp.EQUAL:
            return BoolV(value_eq(args[0], args[1]))
        case PrimOp.ADD:
            return _fit(_int(op, args[0]) + _int(op, args[1]), "+")
        case PrimOp.SUB:
            return _fit(_int(op, args[0]) - _int(op, args[1]), "-")
        case PrimOp.MUL:
            return _fit(_int(op, args[0]) * _int(op, args[1]), "*")
        case PrimOp.DIV:
            a, b = _int(op, args[0]), _int(op, args[1])
            if b == 0:
                raise EvalFailure(ErrorKind.DIV_BY_ZERO, f"{a}/0")
            return _fit(a // b, "/")
        case PrimOp.LT:
            return BoolV(_int(op, args[0]) < _int(op, args[1]))
        case PrimOp.GT:
            return BoolV(_int(op, args[0]) > _int(op, args[1]))
        case PrimOp.AND:
            return BoolV(_bool(op, args[0]) and _bool(op, args[1]))
        case PrimOp.OR:
            return BoolV(_bool(op, args[0]) or _bool(op, args[1]))
        case PrimOp.NOT:
            return BoolV(not _bool(op, args[0]))
        case PrimOp.PAIR:
            return PairV(args[0], args[1])
        case PrimOp.FST | PrimOp.SND:
            v = args[0]
            if not isinstance(v, PairV):
                raise EvalFailure(
                    ErrorKind.TYPE_ERROR, f"{op.value} expects a pair, got {_tag(v)}"
                )
            return v.first if op is PrimOp.FST else v.second
        case PrimOp.CONS:
            tail = args[1]
            if not isinstance(tail, ListV):
                raise EvalFailure(
                    ErrorKind.TYPE_ERROR, f"cons expects a list, got {_tag(tail)}"
                )
            return ListV((args[0],) + tail.items)
        case PrimOp.HEAD | PrimOp.TAIL:
            v = args[0]
            if not isinstance(v, ListV):
                raise EvalFailure(
                    ErrorKind.TYPE_ERROR, f"{op.value} expects a list, got {_tag(v)}"
                )
            if not v.items:
                raise EvalFailure(ErrorKind.HEAD_OF_NIL, f"{op.value} of empty list")
            return v.items[0] if op is PrimOp.HEAD else ListV(v.items[1:])
        case PrimOp.IS_NIL:
            v = args[0]
            if not isinstance(v, ListV):
                raise EvalFailure(
                    ErrorKind.TYPE_ERROR, f"isnil expects a list, got {_tag(v)}"
                )
            return BoolV(not v.items)
        case PrimOp.JUST:
            return JustV(args[0])
        case PrimOp.IS_NOTHING:
            v = args[0]
            if isinstance(v, NothingV):
                return BoolV(True)
            if isinstance(v, JustV):
                return BoolV(False)
            raise EvalFailure(
                ErrorKind.TYPE_ERROR, f"isnothing expects a maybe, got {_tag(v)}"
            )
        case PrimOp.FROM_JUST:
            v = args[0]
            if isinstance(v, JustV):
                return v.value
            if isinstance(v, NothingV):
                raise EvalFailure(ErrorKind.FROM_JUST_NOTHING, "fromjust(nothing)")
            raise EvalFailure(
                ErrorKind.TYPE_ERROR, f"fromjust expects a maybe, got {_tag(v)}"
            )
    raise TypeError(f"not a primitive: {op!r}")
