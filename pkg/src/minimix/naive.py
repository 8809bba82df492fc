"""Naive partial evaluator: unconditional unfolding of every application.

The environment binds variables to expressions (known inputs are lifted to
constants), constants fold through primitives, and conditionals whose test
stays unknown keep both branches. Every function application is inlined on
the spot, so the residual is a single expression with no applications left;
the price is divergence on recursion that consumes an unknown argument,
which the fuel budget converts into `OutOfFuel`.
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
)
from .interp import DEFAULT_FUEL, EvalFailure, Fuel, OutOfFuel, apply_prim, run_deep


def peval_naive(
    prog: Prog,
    static_env: Optional[Mapping[str, Value]] = None,
    fuel: int = DEFAULT_FUEL,
) -> Expr:
    """Residual expression for main, given bindings for some of its inputs.

    Raises OutOfFuel when the unfolding budget (or the host recursion bound)
    runs out. Runtime errors never escape: a primitive over known arguments
    that would fail is left in the residual, to fail at the original point if
    it is ever reached.
    """
    defs = fdef_index(prog)
    env = {name: Const(v) for name, v in (static_env or {}).items()}
    try:
        return run_deep(_pe, prog.main, env, defs, Fuel(fuel))
    except RecursionError:
        raise OutOfFuel() from None


def _pe(e: Expr, env: dict[str, Expr], defs: dict[str, FDef], fuel: Fuel) -> Expr:
    match e:
        case Const():
            return e
        case Var(name):
            # Bound expressions are spliced as-is, never re-resolved, so a
            # callee parameter can never capture a caller variable.
            return env.get(name, e)
        case Prim(op, args):
            residuals = [_pe(a, env, defs, fuel) for a in args]
            if all(isinstance(r, Const) for r in residuals):
                try:
                    return Const(apply_prim(op, [r.value for r in residuals]))
                except EvalFailure:
                    pass  # delay the error into the residual code
            return Prim(op, tuple(residuals))
        case If(cond, then, orelse):
            test = _pe(cond, env, defs, fuel)
            if isinstance(test, Const) and isinstance(test.value, BoolV):
                return _pe(then if test.value.b else orelse, env, defs, fuel)
            return If(
                test,
                _pe(then, env, defs, fuel),
                _pe(orelse, env, defs, fuel),
            )
        case Apply(fname, args):
            fdef = defs[fname]
            residuals = [_pe(a, env, defs, fuel) for a in args]
            fuel.spend()
            return _pe(fdef.body, dict(zip(fdef.params, residuals)), defs, fuel)
    raise TypeError(f"not an expression: {e!r}")
