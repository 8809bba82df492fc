"""Inlining pass for residual programs.

Specialized output is often a chain of single-use definitions; this pass
substitutes every call to a non-recursive function with its body and drops
definitions that main no longer reaches. Functions on a call-graph cycle
(including self-loops) are kept as definitions, since inlining them cannot
terminate. Substitution splices argument expressions verbatim; bodies are
closed over their parameters and the language has no binders inside
expressions, so capture cannot occur. Arguments used several times are
duplicated; the language is pure, so only work is duplicated, not meaning.
"""

from __future__ import annotations

from .lang import Apply, Const, Expr, FDef, If, Prim, Prog, Var, iter_exprs


def call_graph(prog: Prog) -> dict[str, set[str]]:
    """Which definitions each definition applies (main excluded)."""
    names = {d.name for d in prog.defs}
    graph: dict[str, set[str]] = {}
    for d in prog.defs:
        graph[d.name] = {
            node.fname
            for node in _applies(d.body)
            if node.fname in names
        }
    return graph


def _applies(e: Expr):
    return (node for node in iter_exprs(e) if isinstance(node, Apply))


def non_recursive_functions(prog: Prog) -> set[str]:
    """Names of definitions that sit on no call-graph cycle."""
    graph = call_graph(prog)
    out = set()
    for name in graph:
        seen: set[str] = set()
        stack = list(graph[name])
        while stack:
            cur = stack.pop()
            if cur == name:
                break
            if cur not in seen:
                seen.add(cur)
                stack.extend(graph[cur])
        else:
            out.add(name)
    return out


def _subst(e: Expr, mapping: dict[str, Expr]) -> Expr:
    match e:
        case Const():
            return e
        case Var(name):
            return mapping.get(name, e)
        case Apply(fname, args):
            return Apply(fname, tuple(_subst(a, mapping) for a in args))
        case Prim(op, args):
            return Prim(op, tuple(_subst(a, mapping) for a in args))
        case If(cond, then, orelse):
            return If(
                _subst(cond, mapping),
                _subst(then, mapping),
                _subst(orelse, mapping),
            )
    raise TypeError(f"not an expression: {e!r}")


def inline_residual(prog: Prog) -> Prog:
    """Inline all non-recursive definitions and drop what main cannot reach.

    Callees are processed before callers, so one sweep reaches a fixpoint:
    the output contains no application of a non-recursive function.
    """
    graph = call_graph(prog)
    inlinable = non_recursive_functions(prog)
    params = {d.name: d.params for d in prog.defs}
    bodies = {d.name: d.body for d in prog.defs}

    order: list[str] = []
    visited: set[str] = set()

    def visit(name: str) -> None:
        visited.add(name)
        for callee in graph[name]:
            if callee in inlinable and callee not in visited:
                visit(callee)
        order.append(name)

    for name in sorted(inlinable):
        if name not in visited:
            visit(name)

    def rewrite(e: Expr) -> Expr:
        match e:
            case Const() | Var():
                return e
            case Apply(fname, args):
                new_args = tuple(rewrite(a) for a in args)
                if fname in inlinable:
                    return _subst(bodies[fname], dict(zip(params[fname], new_args)))
                return Apply(fname, new_args)
            case Prim(op, args):
                return Prim(op, tuple(rewrite(a) for a in args))
            case If(cond, then, orelse):
                return If(rewrite(cond), rewrite(then), rewrite(orelse))
        raise TypeError(f"not an expression: {e!r}")

    for name in order:
        bodies[name] = rewrite(bodies[name])
    for d in prog.defs:
        if d.name not in inlinable:
            bodies[d.name] = rewrite(d.body)
    main = rewrite(prog.main)

    reachable: set[str] = set()
    pending = [node.fname for node in _applies(main)]
    while pending:
        name = pending.pop()
        if name in reachable or name not in bodies:
            continue
        reachable.add(name)
        pending.extend(node.fname for node in _applies(bodies[name]))

    defs = tuple(
        FDef(d.name, d.params, bodies[d.name])
        for d in prog.defs
        if d.name in reachable
    )
    return Prog(defs, main)
