"""Shared fixtures and hypothesis strategies."""

from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from minimix import (
    INT_MAX,
    INT_MIN,
    Apply,
    BoolV,
    Const,
    If,
    IntV,
    JustV,
    ListV,
    Machine,
    NothingV,
    PairV,
    Prim,
    PrimOp,
    Prog,
    FDef,
    StrV,
    Var,
    parse_machine,
    parse_program,
)

settings.register_profile("suite", deadline=None)
settings.load_profile("suite")

ROOT = Path(__file__).resolve().parents[1]
PROGRAMS = ROOT / "programs"
MACHINES = ROOT / "machines"
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture(scope="session")
def exp_prog() -> Prog:
    return parse_program((PROGRAMS / "exp.fl").read_text())


@pytest.fixture(scope="session")
def exp_xn_prog() -> Prog:
    return parse_program((PROGRAMS / "exp_xn.fl").read_text())


@pytest.fixture(scope="session")
def cond_prog() -> Prog:
    return parse_program((PROGRAMS / "cond.fl").read_text())


@pytest.fixture(scope="session")
def two_state() -> Machine:
    return parse_machine((MACHINES / "two_state.mach").read_text())


def corpus_paths() -> list[Path]:
    return sorted(PROGRAMS.glob("*.fl")) + sorted(GOLDEN.glob("*.fl"))


# ---------------------------------------------------------------------------
# Random values and programs

_printable = st.characters(min_codepoint=32, max_codepoint=126)

scalar_values = st.one_of(
    st.integers(INT_MIN, INT_MAX).map(IntV),
    st.booleans().map(BoolV),
    st.text(_printable, max_size=6).map(StrV),
    st.just(NothingV()),
)

values = st.recursive(
    scalar_values,
    lambda children: st.one_of(
        st.tuples(children, children).map(lambda t: PairV(*t)),
        st.lists(children, max_size=3).map(lambda xs: ListV(tuple(xs))),
        children.map(JustV),
    ),
    max_leaves=8,
)

_FUN_SIGS = {"g": 1, "h": 2}


def exprs(var_names: tuple[str, ...]):
    leaves = st.one_of(
        values.map(Const),
        st.sampled_from(sorted(var_names)).map(Var),
    )

    def extend(children):
        prim = st.sampled_from(list(PrimOp)).flatmap(
            lambda op: st.tuples(*([children] * op.arity)).map(
                lambda args, op=op: Prim(op, args)
            )
        )
        conditional = st.tuples(children, children, children).map(lambda t: If(*t))
        applies = [
            st.tuples(*([children] * arity)).map(
                lambda args, fname=fname: Apply(fname, args)
            )
            for fname, arity in _FUN_SIGS.items()
        ]
        return st.one_of(prim, conditional, *applies)

    return st.recursive(leaves, extend, max_leaves=20)


programs = st.builds(
    lambda g_body, h_body, main: Prog(
        (FDef("g", ("a",), g_body), FDef("h", ("p", "q"), h_body)), main
    ),
    exprs(("a",)),
    exprs(("p", "q")),
    exprs(("x", "y", "z")),
)
