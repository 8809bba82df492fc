import pytest

from minimix import (
    Apply,
    Const,
    IntV,
    Prim,
    PrimOp,
    Prog,
    Var,
    call_graph,
    evaluate,
    encode_dfa_bti,
    encode_dfa_naive,
    inline_residual,
    non_recursive_functions,
    parse_program,
    peval,
    pretty_expr,
    validate,
)
from minimix.lang import iter_exprs


@pytest.fixture
def chain(exp_xn_prog):
    return peval(exp_xn_prog, {"n": IntV(3)})


@pytest.fixture
def recursive(exp_xn_prog):
    return peval(exp_xn_prog, {"x": IntV(2)})


def test_non_recursive_of_chain(chain):
    assert non_recursive_functions(chain) == {"exp_1", "exp_2", "exp_3", "exp_4"}


def test_non_recursive_excludes_self_loop(recursive):
    assert non_recursive_functions(recursive) == set()


def test_non_recursive_of_empty_program():
    assert non_recursive_functions(Prog((), Var("x"))) == set()


def test_call_graph(chain):
    graph = call_graph(chain)
    assert graph["exp_1"] == {"exp_2"}
    assert graph["exp_4"] == set()


def test_inline_chain_collapses_to_naive_residual(chain):
    inlined = inline_residual(chain)
    assert inlined.defs == ()
    assert pretty_expr(inlined.main) == "x*(x*(x*1))"


def test_inline_keeps_recursive_residual(recursive):
    assert inline_residual(recursive) == recursive


def test_inline_identity_on_def_free_program():
    prog = Prog((), Const(IntV(8)))
    assert inline_residual(prog) == prog


def test_mutual_recursion_survives():
    prog = parse_program(
        "fun even(n) = if n==0 then true else odd(n-1);"
        "fun odd(n) = if n==0 then false else even(n-1);"
        "main = even(k);"
    )
    assert non_recursive_functions(prog) == set()
    assert inline_residual(prog) == prog


def test_wrapper_is_inlined_and_cycle_kept():
    prog = parse_program(
        "fun even(n) = if n==0 then true else odd(n-1);"
        "fun odd(n) = if n==0 then false else even(n-1);"
        "fun wrap(n) = if even(n) then 1 else 0;"
        "main = wrap(k);"
    )
    inlined = inline_residual(prog)
    assert {d.name for d in inlined.defs} == {"even", "odd"}
    expected_main = parse_program(
        "fun even(n) = true; main = if even(k) then 1 else 0;"
    ).main
    assert inlined.main == expected_main  # wrap's body with k for n, verbatim
    validate(inlined)


def test_unreferenced_defs_are_dropped():
    prog = parse_program(
        "fun used(n) = n+1; fun unused(n) = n*2; main = used(5);"
    )
    inlined = inline_residual(prog)
    assert inlined == Prog((), Prim(PrimOp.ADD, (Const(IntV(5)), Const(IntV(1)))))


def test_duplicated_arguments_are_accepted():
    prog = parse_program("fun twice(n) = n+n; main = twice(a*b);")
    inlined = inline_residual(prog)
    product = Prim(PrimOp.MUL, (Var("a"), Var("b")))
    assert inlined.main == Prim(PrimOp.ADD, (product, product))


def _residual_corpus(exp_xn_prog, cond_prog, two_state):
    return [
        (peval(exp_xn_prog, {"n": IntV(3)}), [{"x": IntV(k)} for k in range(-2, 5)]),
        (peval(exp_xn_prog, {"x": IntV(2)}), [{"n": IntV(k)} for k in range(0, 6)]),
        (peval(cond_prog, {"y": IntV(0)}), [{"x": IntV(k)} for k in range(-2, 3)]),
        (peval(cond_prog, {"x": IntV(0)}), [{"y": IntV(k)} for k in range(-2, 3)]),
        (
            peval(encode_dfa_naive(two_state), {}),
            [{"input": w} for w in _words()],
        ),
        (
            peval(encode_dfa_bti(two_state), {}),
            [{"input": w} for w in _words()],
        ),
    ]


def _words():
    from itertools import product as cartesian

    from minimix import word_value

    return [
        word_value(w) for k in range(0, 4) for w in cartesian("ab", repeat=k)
    ]


def test_semantics_preserved_on_residuals(exp_xn_prog, cond_prog, two_state):
    for residual, envs in _residual_corpus(exp_xn_prog, cond_prog, two_state):
        inlined = inline_residual(residual)
        validate(inlined)
        for env in envs:
            assert evaluate(inlined, env) == evaluate(residual, env), env


def test_no_calls_to_non_recursive_functions_remain(
    exp_xn_prog, cond_prog, two_state
):
    for residual, _ in _residual_corpus(exp_xn_prog, cond_prog, two_state):
        inlined = inline_residual(residual)
        surviving = non_recursive_functions(inlined)
        for body in [d.body for d in inlined.defs] + [inlined.main]:
            for node in iter_exprs(body):
                if isinstance(node, Apply):
                    assert node.fname not in surviving


def test_inline_is_idempotent(exp_xn_prog, cond_prog, two_state):
    for residual, _ in _residual_corpus(exp_xn_prog, cond_prog, two_state):
        once = inline_residual(residual)
        assert inline_residual(once) == once
