"""State machines as object-language programs.

A deterministic finite automaton is compiled by *specializing an
interpreter for automata to one automaton* (the first Futamura projection,
at desk scale). Two encodings of that interpreter are provided:

* `encode_dfa_naive` looks edges up with an association-list `lookup`. The
  lookup key is dynamic (it depends on the input word), so specialization
  cannot see through the result and the transition table survives into the
  residual program as data.
* `encode_dfa_bti` applies the classic binding-time improvement: iterate
  over the (known) table with recursion and compare each key against the
  dynamic value. Specialization then unrolls the iteration completely and
  the residual program contains no table at all, just one definition per
  reachable state.

`run_machine` is a direct host-level simulator used as the oracle in
differential tests. Machine description files look like::

    start: 1
    accept: 2
    from 1 --a--> 2
    from 2 --a--> 1
    from 2 --b--> 2

`accept:` takes integers separated by commas or spaces (optionally inside
[brackets]), and may be empty. Missing transitions reject; a state with no
outgoing edges is simply dead. Labels may be any text without `-->`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .lang import IntV, ListV, PairV, Prog, StrV
from .syntax import format_value, parse_program

Edges = tuple[tuple[str, int], ...]


class InvalidMachineError(Exception):
    pass


@dataclass(frozen=True)
class Machine:
    start: int
    accept: tuple[int, ...]
    transitions: tuple[tuple[int, Edges], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "accept", tuple(self.accept))
        object.__setattr__(
            self,
            "transitions",
            tuple((s, tuple(edges)) for s, edges in self.transitions),
        )


def validate_machine(m: Machine) -> None:
    for field_name, ids in (("accept", m.accept), ("start", (m.start,))):
        for state in ids:
            if not isinstance(state, int) or isinstance(state, bool):
                raise InvalidMachineError(f"{field_name}: state ids must be integers")
    seen_states: set[int] = set()
    for state, edges in m.transitions:
        if not isinstance(state, int) or isinstance(state, bool):
            raise InvalidMachineError("transition source must be an integer")
        if state in seen_states:
            raise InvalidMachineError(f"duplicate transition row for state {state}")
        seen_states.add(state)
        labels: set[str] = set()
        for label, target in edges:
            if not isinstance(label, str):
                raise InvalidMachineError(f"state {state}: labels must be text")
            if not isinstance(target, int) or isinstance(target, bool):
                raise InvalidMachineError(f"state {state}: targets must be integers")
            if label in labels:
                raise InvalidMachineError(
                    f"state {state}: duplicate edge label {label!r}"
                )
            labels.add(label)


def run_machine(m: Machine, word: Sequence[str]) -> bool:
    """Direct simulation: True iff the whole word is consumed and the final
    state is accepting. A missing transition rejects."""
    validate_machine(m)
    rows = dict(m.transitions)
    state = m.start
    for label in word:
        edges = dict(rows.get(state, ()))
        if label not in edges:
            return False
        state = edges[label]
    return state in m.accept


# ---------------------------------------------------------------------------
# Encodings

_NAIVE_SOURCE = """\
fun lookup(key,table) = if isnil(table) then nothing else if fst(head(table))==key then just(snd(head(table))) else lookup(key,tail(table));
fun elem(x,l) = if isnil(l) then false else if head(l)==x then true else elem(x,tail(l));
fun run(current,accept,trans,input) = if isnil(input) then elem(current,accept) else if isnothing(lookup(current,trans)) then false else if isnothing(lookup(head(input),fromjust(lookup(current,trans)))) then false else run(fromjust(lookup(head(input),fromjust(lookup(current,trans)))),accept,trans,tail(input));
main = run({start},{accept},{trans},input);
"""

_BTI_SOURCE = """\
fun elem(x,l) = if isnil(l) then false else if head(l)==x then true else elem(x,tail(l));
fun run(current,accept,trans,input) = if isnil(input) then elem(current,accept) else findState(trans,current,accept,trans,input);
fun findState(tbl,current,accept,trans,input) = if isnil(tbl) then false else if fst(head(tbl))==current then findEdge(snd(head(tbl)),head(input),accept,trans,tail(input)) else findState(tail(tbl),current,accept,trans,input);
fun findEdge(edges,label,accept,trans,rest) = if isnil(edges) then false else if fst(head(edges))==label then run(snd(head(edges)),accept,trans,rest) else findEdge(tail(edges),label,accept,trans,rest);
main = run({start},{accept},{trans},input);
"""


def _accept_value(m: Machine) -> ListV:
    return ListV(tuple(IntV(s) for s in m.accept))


def _table_value(m: Machine) -> ListV:
    return ListV(
        tuple(
            PairV(
                IntV(state),
                ListV(tuple(PairV(StrV(label), IntV(t)) for label, t in edges)),
            )
            for state, edges in m.transitions
        )
    )


def word_value(word: Sequence[str]) -> ListV:
    """The object-language value for an input word."""
    return ListV(tuple(StrV(label) for label in word))


def _encode(m: Machine, source: str) -> Prog:
    validate_machine(m)
    text = source.format(
        start=format_value(IntV(m.start)),
        accept=format_value(_accept_value(m)),
        trans=format_value(_table_value(m)),
    )
    return parse_program(text)


def encode_dfa_naive(m: Machine) -> Prog:
    """Automaton interpreter with dynamic-key table lookups, applied to m.

    The program's one free variable is `input`, the word to test.
    """
    return _encode(m, _NAIVE_SOURCE)


def encode_dfa_bti(m: Machine) -> Prog:
    """Binding-time-improved interpreter: static table iteration with a
    dynamic comparison, applied to m. Free variable: `input`."""
    return _encode(m, _BTI_SOURCE)


# ---------------------------------------------------------------------------
# Machine description files

_EDGE_RE = re.compile(r"from\s+(\d+)\s+--(.*?)-->\s+(\d+)\Z")
_START_RE = re.compile(r"start:\s*(\d+)\Z")
_ACCEPT_RE = re.compile(r"accept:\s*(.*)\Z")


def parse_machine(text: str) -> Machine:
    """Parse a machine description; raises InvalidMachineError."""
    start: int | None = None
    accept: tuple[int, ...] | None = None
    rows: dict[int, list[tuple[str, int]]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if m := _START_RE.match(line):
            if start is not None:
                raise InvalidMachineError(f"line {lineno}: duplicate start line")
            start = int(m.group(1))
        elif m := _ACCEPT_RE.match(line):
            if accept is not None:
                raise InvalidMachineError(f"line {lineno}: duplicate accept line")
            body = m.group(1).strip().strip("[]")
            try:
                accept = tuple(int(s) for s in re.split(r"[,\s]+", body) if s)
            except ValueError:
                raise InvalidMachineError(
                    f"line {lineno}: accept states must be integers"
                ) from None
        elif m := _EDGE_RE.match(line):
            source, label, target = int(m.group(1)), m.group(2), int(m.group(3))
            rows.setdefault(source, []).append((label, target))
        else:
            raise InvalidMachineError(f"line {lineno}: cannot parse {line!r}")
    if start is None:
        raise InvalidMachineError("missing 'start:' line")
    if accept is None:
        raise InvalidMachineError("missing 'accept:' line")
    machine = Machine(
        start,
        accept,
        tuple((s, tuple(edges)) for s, edges in rows.items()),
    )
    validate_machine(machine)
    return machine
