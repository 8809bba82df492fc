"""Concrete syntax: parser and pretty-printer.

Programs are `.fl` files::

    fun exp(x,n) = if n==0 then 1 else x*exp(x,n-1);
    main = exp(2,3);

Grammar sketch (a program is fundefs followed by a main expression):

    program := fundef* "main" "=" expr ";"
    fundef  := "fun" IDENT "(" params? ")" "=" expr ";"
    expr    := "if" expr "then" expr "else" expr | binop-expr
    binops, loosest to tightest: ||  &&  (== < >)  (+ -)  (* /); unary !
    atom    := INT | "-" INT | "true" | "false" | STRING | IDENT
             | IDENT "(" args? ")" | builtin "(" args? ")"
             | "(" expr ")" | value-literal

Structured constants are written as value literals: `[1,2]` for lists,
`(1,"a")` for pairs, `nothing`, and `just(1)` for maybes. `just(e)` with a
constant argument is read as a maybe literal; the printer writes the rare
primitive-application form as `just((e))` so the two stay distinguishable.
Line comments start with `--`. String literals use double quotes with `\\"`
and `\\\\` as the only escapes, and cannot contain line breaks.

Binding files (`.env`) are comma- or newline-separated `name = literal`
entries.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lang import (
    BUILTIN_NAMES,
    INT_MAX,
    INT_MIN,
    KEYWORDS,
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
    StrV,
    Value,
    Var,
    validate,
)


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class DuplicateBindingError(ParseError):
    pass


# ---------------------------------------------------------------------------
# Lexer


@dataclass(frozen=True)
class _Token:
    kind: str  # INT, STRING, IDENT, KW, PUNCT, EOF
    text: str
    line: int
    col: int
    value: object = None  # int for INT, unescaped str for STRING


_TWO_CHAR = ("==", "&&", "||")
_ONE_CHAR = set("()[],;=<>+-*/!")


def _tokenize(text: str) -> list[_Token]:
    toks: list[_Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
        elif c in " \t\r":
            i += 1
            col += 1
        elif text.startswith("--", i):
            while i < n and text[i] != "\n":
                i += 1
        elif c.isdigit():
            start = i
            while i < n and text[i].isdigit():
                i += 1
            toks.append(_Token("INT", text[start:i], line, col, int(text[start:i])))
            col += i - start
        elif c == '"':
            start_col = col
            i += 1
            col += 1
            chars: list[str] = []
            while True:
                if i >= n or text[i] in "\n\r":
                    raise ParseError("unterminated string literal", line, start_col)
                ch = text[i]
                if ch == '"':
                    i += 1
                    col += 1
                    break
                if ch == "\\":
                    if i + 1 >= n or text[i + 1] not in '"\\':
                        raise ParseError(
                            "invalid escape (only \\\" and \\\\ are allowed)",
                            line,
                            col,
                        )
                    chars.append(text[i + 1])
                    i += 2
                    col += 2
                else:
                    chars.append(ch)
                    i += 1
                    col += 1
            toks.append(_Token("STRING", "", line, start_col, "".join(chars)))
        elif c.isalpha():
            start = i
            while i < n and (text[i].isalnum() or text[i] in "_'"):
                i += 1
            word = text[start:i]
            kind = "KW" if word in KEYWORDS else "IDENT"
            toks.append(_Token(kind, word, line, col))
            col += i - start
        elif text[i : i + 2] in _TWO_CHAR:
            toks.append(_Token("PUNCT", text[i : i + 2], line, col))
            i += 2
            col += 2
        elif c in _ONE_CHAR:
            toks.append(_Token("PUNCT", c, line, col))
            i += 1
            col += 1
        else:
            raise ParseError(f"unexpected character {c!r}", line, col)
    toks.append(_Token("EOF", "", line, col))
    return toks


# ---------------------------------------------------------------------------
# Parser

_BINOP_LEVELS: list[dict[str, PrimOp]] = [
    {"||": PrimOp.OR},
    {"&&": PrimOp.AND},
    {"==": PrimOp.EQUAL, "<": PrimOp.LT, ">": PrimOp.GT},
    {"+": PrimOp.ADD, "-": PrimOp.SUB},
    {"*": PrimOp.MUL, "/": PrimOp.DIV},
]


class _Parser:
    def __init__(self, text: str):
        self._toks = _tokenize(text)
        self._pos = 0

    # -- token plumbing

    def _peek(self) -> _Token:
        return self._toks[self._pos]

    def _prev(self) -> _Token:
        return self._toks[self._pos - 1]

    def _advance(self) -> _Token:
        tok = self._toks[self._pos]
        if tok.kind != "EOF":
            self._pos += 1
        return tok

    def _check(self, kind: str, text: str | None = None) -> bool:
        tok = self._peek()
        return tok.kind == kind and (text is None or tok.text == text)

    def _match(self, kind: str, text: str | None = None) -> _Token | None:
        if self._check(kind, text):
            return self._advance()
        return None

    def _expect(self, kind: str, text: str | None = None, what: str | None = None) -> _Token:
        tok = self._peek()
        if self._check(kind, text):
            return self._advance()
        wanted = what or (text if text is not None else kind)
        shown = tok.text or tok.kind
        raise ParseError(f"expected {wanted}, found {shown!r}", tok.line, tok.col)

    def _error(self, message: str) -> ParseError:
        tok = self._peek()
        return ParseError(message, tok.line, tok.col)

    # -- grammar

    def program(self) -> Prog:
        defs = []
        while self._check("KW", "fun"):
            defs.append(self._fundef())
        self._expect("KW", "main")
        self._expect("PUNCT", "=")
        main = self.expr()
        self._expect("PUNCT", ";")
        self._expect("EOF", what="end of input")
        return Prog(tuple(defs), main)

    def _fundef(self) -> FDef:
        self._expect("KW", "fun")
        name = self._expect("IDENT", what="function name").text
        self._expect("PUNCT", "(")
        params: list[str] = []
        if not self._check("PUNCT", ")"):
            params.append(self._expect("IDENT", what="parameter name").text)
            while self._match("PUNCT", ","):
                params.append(self._expect("IDENT", what="parameter name").text)
        self._expect("PUNCT", ")")
        self._expect("PUNCT", "=")
        body = self.expr()
        self._expect("PUNCT", ";")
        return FDef(name, tuple(params), body)

    def expr(self) -> Expr:
        if self._check("KW", "if"):
            self._advance()
            cond = self.expr()
            self._expect("KW", "then")
            then = self.expr()
            self._expect("KW", "else")
            orelse = self.expr()
            return If(cond, then, orelse)
        return self._binop(0)

    def _binop(self, level: int) -> Expr:
        if level >= len(_BINOP_LEVELS):
            return self._unary()
        ops = _BINOP_LEVELS[level]
        e = self._binop(level + 1)
        while self._peek().kind == "PUNCT" and self._peek().text in ops:
            op = ops[self._advance().text]
            e = Prim(op, (e, self._binop(level + 1)))
        return e

    def _unary(self) -> Expr:
        if self._match("PUNCT", "!"):
            return Prim(PrimOp.NOT, (self._unary(),))
        return self._atom()

    def _atom(self) -> Expr:
        tok = self._peek()
        if tok.kind == "INT":
            return Const(IntV(self._int_literal(False)))
        if tok.kind == "PUNCT" and tok.text == "-":
            self._advance()
            return Const(IntV(self._int_literal(True)))
        if tok.kind == "STRING":
            self._advance()
            return Const(StrV(tok.value))
        if tok.kind == "KW":
            if tok.text in ("true", "false"):
                self._advance()
                return Const(BoolV(tok.text == "true"))
            if tok.text == "nothing":
                self._advance()
                return Const(NothingV())
            if tok.text == "just":
                self._advance()
                self._expect("PUNCT", "(")
                lit = self._try(self._just_literal_rest)
                if lit is not None:
                    return Const(lit)
                arg = self.expr()
                self._expect("PUNCT", ")")
                return Prim(PrimOp.JUST, (arg,))
            if tok.text in BUILTIN_NAMES:
                self._advance()
                op = BUILTIN_NAMES[tok.text]
                self._expect("PUNCT", "(")
                args = self._args()
                if len(args) != op.arity:
                    raise ParseError(
                        f"{tok.text} takes {op.arity} argument(s), got {len(args)}",
                        tok.line,
                        tok.col,
                    )
                return Prim(op, tuple(args))
            raise self._error(f"unexpected keyword {tok.text!r}")
        if tok.kind == "IDENT":
            self._advance()
            if self._check("PUNCT", "("):
                self._advance()
                return Apply(tok.text, tuple(self._args()))
            return Var(tok.text)
        if tok.kind == "PUNCT" and tok.text == "(":
            lit = self._try(self._pair_literal)
            if lit is not None:
                return Const(lit)
            self._advance()
            e = self.expr()
            self._expect("PUNCT", ")")
            return e
        if tok.kind == "PUNCT" and tok.text == "[":
            return Const(self.vlit())
        raise self._error(f"expected an expression, found {tok.text or tok.kind!r}")

    def _args(self) -> list[Expr]:
        # opening "(" already consumed
        args: list[Expr] = []
        if not self._check("PUNCT", ")"):
            args.append(self.expr())
            while self._match("PUNCT", ","):
                args.append(self.expr())
        self._expect("PUNCT", ")")
        return args

    def _int_literal(self, negative: bool) -> int:
        tok = self._expect("INT", what="integer")
        n = -tok.value if negative else tok.value
        if not (INT_MIN <= n <= INT_MAX):
            raise ParseError("integer literal out of 64-bit range", tok.line, tok.col)
        return n

    # -- value literals

    def _try(self, rule):
        saved = self._pos
        try:
            return rule()
        except ParseError:
            self._pos = saved
            return None

    def _just_literal_rest(self) -> Value:
        # after "just ("; strict literal argument, then ")"
        v = self.vlit()
        self._expect("PUNCT", ")")
        return JustV(v)

    def _pair_literal(self) -> Value:
        self._expect("PUNCT", "(")
        first = self.vlit()
        self._expect("PUNCT", ",")
        second = self.vlit()
        self._expect("PUNCT", ")")
        return PairV(first, second)

    def vlit(self) -> Value:
        tok = self._peek()
        if tok.kind == "INT":
            return IntV(self._int_literal(False))
        if tok.kind == "PUNCT" and tok.text == "-":
            self._advance()
            return IntV(self._int_literal(True))
        if tok.kind == "STRING":
            self._advance()
            return StrV(tok.value)
        if tok.kind == "KW" and tok.text in ("true", "false"):
            self._advance()
            return BoolV(tok.text == "true")
        if tok.kind == "KW" and tok.text == "nothing":
            self._advance()
            return NothingV()
        if tok.kind == "KW" and tok.text == "just":
            self._advance()
            self._expect("PUNCT", "(")
            v = self.vlit()
            self._expect("PUNCT", ")")
            return JustV(v)
        if tok.kind == "PUNCT" and tok.text == "[":
            self._advance()
            items: list[Value] = []
            if not self._check("PUNCT", "]"):
                items.append(self.vlit())
                while self._match("PUNCT", ","):
                    items.append(self.vlit())
            self._expect("PUNCT", "]")
            return ListV(tuple(items))
        if tok.kind == "PUNCT" and tok.text == "(":
            return self._pair_literal()
        raise self._error(f"expected a value literal, found {tok.text or tok.kind!r}")

    # -- binding files

    def bindings(self) -> dict[str, Value]:
        out: dict[str, Value] = {}
        while not self._check("EOF"):
            tok = self._peek()
            name = self._expect("IDENT", what="binding name").text
            self._expect("PUNCT", "=")
            value = self.vlit()
            if name in out:
                raise DuplicateBindingError(
                    f"duplicate binding for {name!r}", tok.line, tok.col
                )
            out[name] = value
            if self._match("PUNCT", ","):
                continue
            if self._check("EOF"):
                break
            if self._peek().line > self._prev().line:
                continue
            raise self._error("expected ',' or a line break between bindings")
        return out


def parse_program(text: str) -> Prog:
    """Parse and validate a program. Raises ParseError or ValidationError."""
    prog = _Parser(text).program()
    validate(prog)
    return prog


def parse_bindings(text: str) -> dict[str, Value]:
    """Parse `name = literal` entries separated by commas or line breaks."""
    return _Parser(text).bindings()


# ---------------------------------------------------------------------------
# Pretty-printer

_PREC = {
    PrimOp.OR: 2,
    PrimOp.AND: 3,
    PrimOp.EQUAL: 4,
    PrimOp.LT: 4,
    PrimOp.GT: 4,
    PrimOp.ADD: 5,
    PrimOp.SUB: 5,
    PrimOp.MUL: 6,
    PrimOp.DIV: 6,
}
_IF_PREC = 1
_UNARY_PREC = 7


def format_value(v: Value) -> str:
    """Render a value in literal syntax."""
    if isinstance(v, IntV):
        return str(v.n)
    if isinstance(v, BoolV):
        return "true" if v.b else "false"
    if isinstance(v, StrV):
        return '"' + v.s.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(v, PairV):
        return f"({format_value(v.first)},{format_value(v.second)})"
    if isinstance(v, ListV):
        return "[" + ",".join(format_value(x) for x in v.items) + "]"
    if isinstance(v, NothingV):
        return "nothing"
    if isinstance(v, JustV):
        return f"just({format_value(v.value)})"
    raise TypeError(f"not a value: {v!r}")


def _render(e: Expr, ctx: int) -> str:
    if isinstance(e, Const):
        if isinstance(e.value, IntV) and e.value.n < 0:
            return f"({e.value.n})"  # bare -n would lex as part of an operator
        return format_value(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Apply):
        return f"{e.fname}(" + ",".join(_render(a, 0) for a in e.args) + ")"
    if isinstance(e, If):
        s = (
            f"if {_render(e.cond, _IF_PREC)} then {_render(e.then, _IF_PREC)} "
            f"else {_render(e.orelse, _IF_PREC)}"
        )
        return f"({s})" if ctx > _IF_PREC else s
    if isinstance(e, Prim):
        op = e.op
        if op is PrimOp.NOT:
            return f"!{_render(e.args[0], _UNARY_PREC)}"
        if op in _PREC:
            p = _PREC[op]
            s = f"{_render(e.args[0], p)}{op.value}{_render(e.args[1], p + 1)}"
            return f"({s})" if p < ctx else s
        # builtin-call form; a constant under `just` gets extra parentheses so
        # it does not read back as a maybe literal
        if op is PrimOp.JUST and isinstance(e.args[0], Const):
            return f"just(({_render(e.args[0], 0)}))"
        return f"{op.value}(" + ",".join(_render(a, 0) for a in e.args) + ")"
    raise TypeError(f"not an expression: {e!r}")


def pretty_expr(e: Expr) -> str:
    return _render(e, 0)


def pretty_program(prog: Prog) -> str:
    """Deterministic text for a program, one definition per line."""
    lines = [
        f"fun {d.name}({','.join(d.params)}) = {pretty_expr(d.body)};"
        for d in prog.defs
    ]
    lines.append(f"main = {pretty_expr(prog.main)};")
    return "\n".join(lines) + "\n"
