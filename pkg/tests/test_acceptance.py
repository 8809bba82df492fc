"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines as they
happen (without -s pytest shows them only for failures).
"""

import random
from contextlib import contextmanager
from itertools import product

import pytest

from conftest import corpus_paths
from minimix import (
    Apply,
    BoolV,
    Const,
    If,
    IntV,
    JustV,
    ListV,
    NothingV,
    Ok,
    OutOfFuel,
    PairV,
    Prim,
    PrimOp,
    Prog,
    StrV,
    Var,
    encode_dfa_bti,
    encode_dfa_naive,
    evaluate,
    free_vars,
    inline_residual,
    parse_program,
    peval,
    peval_naive,
    pretty_expr,
    pretty_program,
    run_machine,
    structured_const_count,
    validate,
    value_eq,
    word_value,
)
from minimix.cli import check_equivalence
from minimix.lang import iter_exprs


@contextmanager
def criterion(number: int, description: str):
    try:
        yield
    except BaseException:
        print(f"criterion {number} FAIL: {description}")
        raise
    print(f"criterion {number} PASS: {description}")


def peval_checked(prog, static_env, fuel=10_000):
    """Specialize and check the store/residual invariants on every call."""
    residual = peval(prog, static_env, fuel)
    validate(residual)  # no pending bodies, no dangling applications
    assert free_vars(residual.main) & set(static_env) == set()
    return residual


def naive_checked(prog, static_env, fuel=10_000):
    residual = peval_naive(prog, static_env, fuel)
    assert free_vars(residual) & set(static_env) == set()
    assert not any(isinstance(n, Apply) for n in iter_exprs(residual))
    return residual


X_CUBED = Prim(
    PrimOp.MUL,
    (Var("x"), Prim(PrimOp.MUL, (Var("x"), Prim(PrimOp.MUL, (Var("x"), Const(IntV(1))))))),
)


def test_criterion_1(exp_prog):
    with criterion(1, "interpreter golden: exp(2,3) evaluates to 8"):
        assert evaluate(exp_prog) == Ok(IntV(8))


def test_criterion_2(exp_xn_prog):
    with criterion(2, "naive residual for exponent 3 is x*(x*(x*1)) node-for-node"):
        residual = naive_checked(exp_xn_prog, {"n": IntV(3)})
        assert residual == X_CUBED
        assert pretty_expr(residual) == "x*(x*(x*1))"


def test_criterion_3(exp_xn_prog):
    with criterion(
        3, "known base: naive inlining exhausts fuel, specializer terminates"
    ):
        for fuel in (10, 100, 1000):
            with pytest.raises(OutOfFuel):
                peval_naive(exp_xn_prog, {"x": IntV(2)}, fuel=fuel)
        residual = peval_checked(exp_xn_prog, {"x": IntV(2)})
        assert len(residual.defs) == 1
        spec = residual.defs[0]
        assert spec.body == If(
            Prim(PrimOp.EQUAL, (Var("n"), Const(IntV(0)))),
            Const(IntV(1)),
            Prim(
                PrimOp.MUL,
                (
                    Const(IntV(2)),
                    Apply(spec.name, (Prim(PrimOp.SUB, (Var("n"), Const(IntV(1)))),)),
                ),
            ),
        )


def test_criterion_4(exp_xn_prog):
    with criterion(4, "specializer golden: four-definition chain, then inlining"):
        residual = peval_checked(exp_xn_prog, {"n": IntV(3)})
        assert len(residual.defs) == 4
        names = [d.name for d in residual.defs]
        for d, nxt in zip(residual.defs[:-1], names[1:]):
            assert d.body == Prim(PrimOp.MUL, (Var("x"), Apply(nxt, (Var("x"),))))
        assert residual.defs[-1].body == Const(IntV(1))
        assert residual.main == Apply(names[0], (Var("x"),))
        assert inline_residual(residual) == Prog((), X_CUBED)


def test_criterion_5(cond_prog):
    with criterion(5, "conditional goldens: static elimination and delayed error"):
        with_y = naive_checked(cond_prog, {"y": IntV(0)})
        assert pretty_expr(with_y) == "if x>0 then 10/x else 0"
        assert with_y == If(
            Prim(PrimOp.GT, (Var("x"), Const(IntV(0)))),
            Prim(PrimOp.DIV, (Const(IntV(10)), Var("x"))),
            Const(IntV(0)),
        )
        with_x = naive_checked(cond_prog, {"x": IntV(0)})
        assert isinstance(with_x, If)
        assert with_x.then == Prim(
            PrimOp.DIV,
            (Prim(PrimOp.ADD, (Const(IntV(10)), Var("y"))), Const(IntV(0))),
        )


def test_criterion_6(exp_xn_prog, two_state):
    with criterion(6, "residual correctness over random splits and DFA words"):
        rng = random.Random(20260810)
        splits = [set(), {"x"}, {"n"}, {"x", "n"}]
        for _ in range(200):
            full = {"x": IntV(rng.randint(0, 8)), "n": IntV(rng.randint(0, 8))}
            for split in splits:
                static = {k: v for k, v in full.items() if k in split}
                dynamic = {k: v for k, v in full.items() if k not in split}
                verdict, detail = check_equivalence(exp_xn_prog, static, dynamic)
                assert verdict == "EQUAL", (full, split, detail)
        bti = encode_dfa_bti(two_state)
        for k in range(5):
            for word in product("ab", repeat=k):
                full = {"input": word_value(word)}
                for static in ({}, full):
                    dynamic = {} if static else full
                    verdict, detail = check_equivalence(bti, static, dynamic)
                    assert verdict == "EQUAL", (word, detail)


def test_criterion_7(two_state):
    with criterion(7, "naive DFA residual keeps the table, improved one drops it"):
        naive = peval_checked(encode_dfa_naive(two_state), {})
        assert structured_const_count(naive) >= 1
        assert structured_const_count(inline_residual(naive)) >= 1

        bti = peval_checked(encode_dfa_bti(two_state), {})
        assert structured_const_count(bti) == 0
        per_state = [d for d in bti.defs if d.name.startswith("run_")]
        assert len(per_state) == 2  # one per reachable state
        inlined = inline_residual(bti)
        assert structured_const_count(inlined) == 0
        for k in range(5):
            for word in product("ab", repeat=k):
                expected = Ok(BoolV(run_machine(two_state, list(word))))
                assert evaluate(inlined, {"input": word_value(word)}) == expected


def _seeded_values(rng: random.Random, depth: int = 3):
    choice = rng.randrange(7 if depth > 0 else 4)
    if choice == 0:
        return IntV(rng.randint(-(2**63), 2**63 - 1))
    if choice == 1:
        return BoolV(rng.random() < 0.5)
    if choice == 2:
        return StrV("".join(rng.choice("ab\"\\ _") for _ in range(rng.randrange(5))))
    if choice == 3:
        return NothingV()
    if choice == 4:
        return PairV(_seeded_values(rng, depth - 1), _seeded_values(rng, depth - 1))
    if choice == 5:
        return ListV(
            tuple(_seeded_values(rng, depth - 1) for _ in range(rng.randrange(3)))
        )
    return JustV(_seeded_values(rng, depth - 1))


def _rebuild(v):
    if isinstance(v, PairV):
        return PairV(_rebuild(v.first), _rebuild(v.second))
    if isinstance(v, ListV):
        return ListV(tuple(_rebuild(i) for i in v.items))
    if isinstance(v, JustV):
        return JustV(_rebuild(v.value))
    return type(v)(*[getattr(v, f) for f in v.__dataclass_fields__])


def test_criterion_8(exp_xn_prog, cond_prog, two_state):
    with criterion(8, "module invariant suites"):
        # value equality is an equivalence relation
        rng = random.Random(2026)
        pool = [_seeded_values(rng) for _ in range(200)]
        for v in pool:
            assert value_eq(v, v)
            copy1, copy2 = _rebuild(v), _rebuild(v)
            assert value_eq(v, copy1) and value_eq(copy1, v)
            assert value_eq(copy1, copy2) and value_eq(v, copy2)
        for a, b in zip(pool, pool[1:]):
            assert value_eq(a, b) == value_eq(b, a)

        # parser round-trip over the whole corpus
        for path in corpus_paths():
            prog = parse_program(path.read_text())
            assert parse_program(pretty_program(prog)) == prog, path

        # full-static collapse on seeded instances
        for _ in range(100):
            env = {"x": IntV(rng.randint(0, 8)), "n": IntV(rng.randint(0, 8))}
            outcome = evaluate(exp_xn_prog, env)
            assert isinstance(outcome, Ok)
            assert peval_checked(exp_xn_prog, env).main == Const(outcome.value)

        # store checks and static elimination run inside peval_checked /
        # naive_checked for every invocation; exercise each corpus program
        residuals = [
            peval_checked(exp_xn_prog, {"n": IntV(3)}),
            peval_checked(exp_xn_prog, {"x": IntV(2)}),
            peval_checked(exp_xn_prog, {}),
            peval_checked(cond_prog, {"y": IntV(0)}),
            peval_checked(cond_prog, {"x": IntV(0)}),
            peval_checked(cond_prog, {}),
            peval_checked(encode_dfa_naive(two_state), {}),
            peval_checked(encode_dfa_bti(two_state), {}),
        ]
        naive_checked(cond_prog, {"y": IntV(0)})
        naive_checked(exp_xn_prog, {"n": IntV(5)})

        # inlining: idempotent and semantics-preserving on corpus residuals
        sample_envs = {
            "x": [{"x": IntV(k)} for k in range(-2, 4)],
            "n": [{"n": IntV(k)} for k in range(0, 5)],
            "y": [{"y": IntV(k)} for k in range(-2, 3)],
            "input": [
                {"input": word_value(w)}
                for k in range(4)
                for w in product("ab", repeat=k)
            ],
        }
        for residual in residuals:
            inlined = inline_residual(residual)
            assert inline_residual(inlined) == inlined
            validate(inlined)
            names = free_vars(residual.main)
            envs = [{}]
            for name in names:
                envs = [dict(e, **extra) for e in envs for extra in sample_envs[name]]
            for env in envs:
                assert evaluate(inlined, env) == evaluate(residual, env)
