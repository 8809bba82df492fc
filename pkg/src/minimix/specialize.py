"""Online program specializer: polyvariant specialization with memoization.

Where the naive partial evaluator inlines every call (and diverges on
recursion over unknown data), this one produces a whole residual program.
Each application whose arguments are only partly known becomes a call to a
specialized copy of the function, keyed by the known argument values. The
key table doubles as a memo: a specialization that is already under way is
reused immediately, which is what lets recursive residual definitions tie
the knot instead of unfolding forever.

Expression-level rules (constants, variables, primitives, conditionals) are
the same as the naive evaluator's; only application differs. The store is
threaded depth-first, left to right, then-branch before else-branch, so
output is deterministic.
"""

from __future__ import annotations

from typing import Mapping, Optional

from .lang import (
    Apply,
    BoolV,
    Const,
    Expr,
    FDef,
    If,
    Prim,
    Prog,
    Value,
    Var,
    fdef_index,
    validate,
)
from .interp import DEFAULT_FUEL, EvalFailure, Fuel, OutOfFuel, apply_prim, run_deep

# (function name, ((param, value), ...)) -- the params follow the original
# definition's parameter order, so equal static environments compare equal.
StaticBindings = tuple[tuple[str, Value], ...]
SpecKey = tuple[str, StaticBindings]


class _Entry:
    __slots__ = ("name", "dyn_params", "body")

    def __init__(self, name: str, dyn_params: tuple[str, ...]):
        self.name = name
        self.dyn_params = dyn_params
        self.body: Optional[Expr] = None  # None until specialization finishes


class SpecStore:
    """Insertion-ordered table of specialized definitions.

    Entries are registered before their bodies are computed; a self-referring
    specialization finds its own pending entry and emits a call to it.
    """

    def __init__(self, reserved=()):
        self._entries: dict[SpecKey, _Entry] = {}
        self._used: set[str] = set(reserved)
        self._counters: dict[str, int] = {}

    def get(self, key: SpecKey) -> Optional[_Entry]:
        return self._entries.get(key)

    def add(self, key: SpecKey, dyn_params: tuple[str, ...]) -> _Entry:
        entry = _Entry(self.fresh_name(key[0]), dyn_params)
        self._entries[key] = entry
        return entry

    def fresh_name(self, origin: str) -> str:
        """Deterministic `origin_k` names, nudged until unused."""
        k = self._counters.get(origin, 0) + 1
        self._counters[origin] = k
        name = f"{origin}_{k}"
        while name in self._used:
            name += "_"
        self._used.add(name)
        return name

    def definitions(self) -> tuple[FDef, ...]:
        defs = []
        for entry in self._entries.values():
            if entry.body is None:
                raise AssertionError(f"pending body left in store: {entry.name}")
            defs.append(FDef(entry.name, entry.dyn_params, entry.body))
        return tuple(defs)


def partition_args(
    params: tuple[str, ...], arg_residuals
) -> tuple[StaticBindings, tuple[str, ...], tuple[Expr, ...]]:
    """Split partially evaluated arguments into static and dynamic positions.

    A position is static exactly when its residual is a constant (structured
    values included). Order is preserved on both sides.
    """
    statics: list[tuple[str, Value]] = []
    dyn_params: list[str] = []
    dyn_args: list[Expr] = []
    for param, arg in zip(params, arg_residuals):
        if isinstance(arg, Const):
            statics.append((param, arg.value))
        else:
            dyn_params.append(param)
            dyn_args.append(arg)
    return tuple(statics), tuple(dyn_params), tuple(dyn_args)


def peval(
    prog: Prog,
    static_env: Optional[Mapping[str, Value]] = None,
    fuel: int = DEFAULT_FUEL,
) -> Prog:
    """Specialize a program to the given known inputs.

    The result is a well-formed program over the remaining (dynamic) inputs
    of main: its definitions are the specialized functions in the order they
    were first needed, and its main only calls those. Fuel is charged once
    per new specialization and once per fully-static unfolding; memo hits are
    free. Raises OutOfFuel.
    """
    defs = fdef_index(prog)
    store = SpecStore(reserved=defs)
    env = dict(static_env) if static_env else {}
    try:
        main = run_deep(_spec, prog.main, env, store, defs, Fuel(fuel))
    except RecursionError:
        raise OutOfFuel() from None
    residual = Prog(store.definitions(), main)
    validate(residual)
    return residual


def _spec(
    e: Expr,
    env: dict[str, Value],
    store: SpecStore,
    defs: dict[str, FDef],
    fuel: Fuel,
) -> Expr:
    match e:
        case Const():
            return e
        case Var(name):
            return Const(env[name]) if name in env else e
        case Prim(op, args):
            residuals = [_spec(a, env, store, defs, fuel) for a in args]
            if all(isinstance(r, Const) for r in residuals):
                try:
                    return Const(apply_prim(op, [r.value for r in residuals]))
                except EvalFailure:
                    pass  # delay the error into the residual code
            return Prim(op, tuple(residuals))
        case If(cond, then, orelse):
            test = _spec(cond, env, store, defs, fuel)
            if isinstance(test, Const) and isinstance(test.value, BoolV):
                return _spec(then if test.value.b else orelse, env, store, defs, fuel)
            return If(
                test,
                _spec(then, env, store, defs, fuel),
                _spec(orelse, env, store, defs, fuel),
            )
        case Apply(fname, args):
            residuals = [_spec(a, env, store, defs, fuel) for a in args]
            return _specialize_apply(fname, residuals, store, defs, fuel)
    raise TypeError(f"not an expression: {e!r}")


def _specialize_apply(
    fname: str,
    arg_residuals: list[Expr],
    store: SpecStore,
    defs: dict[str, FDef],
    fuel: Fuel,
) -> Expr:
    fdef = defs[fname]
    statics, dyn_params, dyn_args = partition_args(fdef.params, arg_residuals)
    if not dyn_args:
        # Everything is known: behave like the interpreter and unfold.
        fuel.spend()
        return _spec(fdef.body, dict(statics), store, defs, fuel)
    key: SpecKey = (fname, statics)
    entry = store.get(key)
    if entry is None:
        fuel.spend()
        # Register before descending into the body so that a recursive call
        # with the same known arguments becomes a call to this very entry.
        entry = store.add(key, dyn_params)
        entry.body = _spec(fdef.body, dict(statics), store, defs, fuel)
    return Apply(entry.name, tuple(dyn_args))
