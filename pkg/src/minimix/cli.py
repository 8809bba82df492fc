"""Command-line interface.

Subcommands::

    run          evaluate a program under bindings
    peval-naive  inline-everything partial evaluation, prints `main = ...;`
    peval        program specialization, prints a whole residual program
    compile-dfa  encode a machine file and specialize the encoding
    check        differential test: direct run vs. residual vs. inlined

Exit codes: 0 success/EQUAL, 1 runtime error/MISMATCH, 2 fuel exhausted or
INCONCLUSIVE, 3 parse/validation errors. Results go to stdout, messages to
stderr; `-o` writes residual programs to a file instead of stdout.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Mapping, Optional

from .dfa import InvalidMachineError, encode_dfa_bti, encode_dfa_naive, parse_machine
from .inline import inline_residual
from .interp import (
    DEFAULT_FUEL,
    Exhausted,
    Failed,
    Ok,
    Outcome,
    OutOfFuel,
    evaluate,
    run_deep,
)
from .lang import Prog, ValidationError, Value, free_vars, structured_const_count
from .naive import peval_naive
from .specialize import peval
from .syntax import ParseError, format_value, parse_bindings, parse_program, pretty_program


def outcome_text(out: Outcome) -> str:
    if isinstance(out, Ok):
        return format_value(out.value)
    if isinstance(out, Failed):
        return out.kind.value
    return "FuelExhausted"


def check_equivalence(
    prog: Prog,
    static_env: Mapping[str, Value],
    dynamic_env: Mapping[str, Value],
    fuel: int = DEFAULT_FUEL,
) -> tuple[str, str]:
    """Compare a direct run against the residual and inlined-residual runs.

    Returns (verdict, detail) with verdict EQUAL, MISMATCH, or INCONCLUSIVE.
    Outcomes compare by value for successes and by error kind for failures;
    fuel exhaustion anywhere makes the comparison INCONCLUSIVE.
    """
    full = {**static_env, **dynamic_env}
    direct = evaluate(prog, full, fuel)
    try:
        residual = peval(prog, static_env, fuel)
    except OutOfFuel:
        return "INCONCLUSIVE", "specialization ran out of fuel"
    outcomes = (
        direct,
        evaluate(residual, dynamic_env, fuel),
        evaluate(inline_residual(residual), dynamic_env, fuel),
    )
    detail = "direct={} residual={} inlined={}".format(
        *(outcome_text(o) for o in outcomes)
    )
    if any(isinstance(o, Exhausted) for o in outcomes):
        return "INCONCLUSIVE", detail
    if outcomes[0] == outcomes[1] == outcomes[2]:
        return "EQUAL", detail
    return "MISMATCH", detail


# ---------------------------------------------------------------------------
# Plumbing


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _gather_bindings(pairs: list[str], env_file: Optional[str]) -> dict[str, Value]:
    merged: dict[str, Value] = {}
    sources = [parse_bindings(chunk) for chunk in pairs]
    if env_file:
        sources.append(parse_bindings(_read(env_file)))
    for bindings in sources:
        for name, value in bindings.items():
            if name in merged:
                raise ValidationError(f"duplicate binding for {name!r}")
            merged[name] = value
    return merged


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        print(text, end="")


# ---------------------------------------------------------------------------
# Commands


def _cmd_run(args: argparse.Namespace) -> int:
    prog = parse_program(_read(args.program))
    env = _gather_bindings(args.env, args.env_file)
    out = evaluate(prog, env, args.fuel)
    print(outcome_text(out))
    if isinstance(out, Failed):
        if out.context:
            print(f"error: {out.context}", file=sys.stderr)
        return 1
    if isinstance(out, Exhausted):
        return 2
    return 0


def _cmd_peval_naive(args: argparse.Namespace) -> int:
    prog = parse_program(_read(args.program))
    static_env = _gather_bindings(args.static, args.env_file)
    residual = peval_naive(prog, static_env, args.fuel)
    _emit(pretty_program(Prog((), residual)), args.output)
    return 0


def _cmd_peval(args: argparse.Namespace) -> int:
    prog = parse_program(_read(args.program))
    static_env = _gather_bindings(args.static, args.env_file)
    residual = peval(prog, static_env, args.fuel)
    if not args.no_inline:
        residual = inline_residual(residual)
    _emit(pretty_program(residual), args.output)
    return 0


def _cmd_compile_dfa(args: argparse.Namespace) -> int:
    machine = parse_machine(_read(args.machine))
    encode = encode_dfa_bti if args.style == "bti" else encode_dfa_naive
    residual = peval(encode(machine), {}, args.fuel)
    if not args.no_inline:
        residual = inline_residual(residual)
    _emit(pretty_program(residual), args.output)
    print(
        f"-- specialized defs: {len(residual.defs)}; "
        f"structured constants: {structured_const_count(residual)}"
    )
    return 0


def _cmd_check(args: argparse.Namespace) -> int:
    prog = parse_program(_read(args.program))
    static_env = _gather_bindings(args.static, args.static_file)
    dynamic_env = _gather_bindings(args.dynamic, args.dynamic_file)
    overlap = set(static_env) & set(dynamic_env)
    if overlap:
        raise ValidationError(f"bindings on both sides: {sorted(overlap)}")
    missing = free_vars(prog.main) - set(static_env) - set(dynamic_env)
    if missing:
        raise ValidationError(f"unbound inputs: {sorted(missing)}")
    verdict, detail = check_equivalence(prog, static_env, dynamic_env, args.fuel)
    print(f"{verdict}: {detail}")
    return {"EQUAL": 0, "MISMATCH": 1, "INCONCLUSIVE": 2}[verdict]


# ---------------------------------------------------------------------------
# Argument parsing


def _add_fuel(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--fuel",
        type=int,
        default=DEFAULT_FUEL,
        help=f"budget of unfoldings/specializations (default {DEFAULT_FUEL})",
    )


def _add_static(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--static",
        action="append",
        default=[],
        metavar="NAME=LITERAL",
        help="known input binding; repeatable",
    )
    p.add_argument("--env-file", metavar="PATH", help="read bindings from a .env file")


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("-o", "--output", metavar="PATH", help="write the program to a file")


class _Parser(argparse.ArgumentParser):
    # usage mistakes are parse errors (3), not the fuel-exhaustion code (2)
    # that argparse exits with by default
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(3, f"error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="minimix",
        description="Interpreter and online partial evaluator for a small "
        "first-order functional language.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="evaluate a program")
    p.add_argument("program")
    p.add_argument(
        "--env",
        action="append",
        default=[],
        metavar="NAME=LITERAL",
        help="input binding; repeatable",
    )
    p.add_argument("--env-file", metavar="PATH", help="read bindings from a .env file")
    _add_fuel(p)
    p.set_defaults(handler=_cmd_run)

    p = sub.add_parser("peval-naive", help="partially evaluate by inlining")
    p.add_argument("program")
    _add_static(p)
    _add_fuel(p)
    _add_output(p)
    p.set_defaults(handler=_cmd_peval_naive)

    p = sub.add_parser("peval", help="specialize to the static bindings")
    p.add_argument("program")
    _add_static(p)
    _add_fuel(p)
    _add_output(p)
    p.add_argument("--no-inline", action="store_true", help="skip the inlining pass")
    p.set_defaults(handler=_cmd_peval)

    p = sub.add_parser("compile-dfa", help="compile a state machine file")
    p.add_argument("machine")
    p.add_argument("--style", choices=("naive", "bti"), required=True)
    _add_fuel(p)
    _add_output(p)
    p.add_argument("--no-inline", action="store_true", help="skip the inlining pass")
    p.set_defaults(handler=_cmd_compile_dfa)

    p = sub.add_parser("check", help="differential-test specialization")
    p.add_argument("program")
    p.add_argument(
        "--static",
        action="append",
        default=[],
        metavar="NAME=LITERAL",
        help="known input binding; repeatable",
    )
    p.add_argument("--static-file", metavar="PATH")
    p.add_argument(
        "--dynamic",
        action="append",
        default=[],
        metavar="NAME=LITERAL",
        help="runtime input binding; repeatable",
    )
    p.add_argument("--dynamic-file", metavar="PATH")
    _add_fuel(p)
    p.set_defaults(handler=_cmd_check)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        # the whole command runs on the big-stack worker: parsing and
        # printing recurse over expression trees just like evaluation does
        return run_deep(args.handler, args)
    except OutOfFuel:
        print("error: fuel exhausted", file=sys.stderr)
        return 2
    except (ParseError, ValidationError, InvalidMachineError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
