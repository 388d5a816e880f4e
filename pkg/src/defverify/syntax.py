"""Expression syntax shared by polynomials and the scenario language.

    expr   := term (('+' | '-') term)*
    term   := ['-'] factor ('*' factor)*
    factor := atom ['^' ['-'] INT]
    atom   := INT | IDENT | '(' expr ')'

Identifiers may contain letters, digits, ``_`` and trailing primes (``m'``).
The printer is canonical: ``parse(show(e)) == e`` for every parsed ``e``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

__all__ = [
    "DSLError",
    "Token",
    "tokenize",
    "describe_token",
    "Num",
    "Name",
    "Pow",
    "Mul",
    "Add",
    "Neg",
    "Expr",
    "ExprParser",
    "parse_expr",
    "show",
]


class DSLError(Exception):
    """Lexical, syntax or semantic error with a source position."""

    def __init__(self, message: str, line: int = 0, col: int = 0, kind: str = "syntax"):
        self.message = message
        self.line = line
        self.col = col
        self.kind = kind
        super().__init__(f"{line}:{col}: {kind} error: {message}" if line else message)


@dataclass(frozen=True)
class Token:
    kind: str  # INT, IDENT, OP, NEWLINE, EOF
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t]+)
  | (?P<comment>\#[^\n]*)
  | (?P<newline>\n|;)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*'*)
  | (?P<op>->|[-+*^()=,.\[\]])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise DSLError(f"unexpected character {text[pos]!r}", line, col, "lexical")
        kind = m.lastgroup
        tok = m.group()
        if kind == "newline":
            tokens.append(Token("NEWLINE", tok, line, col))
            if tok == "\n":
                line += 1
                line_start = m.end()
        elif kind == "int":
            tokens.append(Token("INT", tok, line, col))
        elif kind == "ident":
            tokens.append(Token("IDENT", tok, line, col))
        elif kind == "op":
            tokens.append(Token("OP", tok, line, col))
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Name:
    name: str


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exp: int


@dataclass(frozen=True)
class Mul:
    factors: tuple


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class Add:
    # ((sign, term), ...) with sign in {+1, -1}; the first sign is always +1
    terms: tuple


Expr = Union[Num, Name, Pow, Mul, Neg, Add]


def describe_token(t: Token) -> str:
    if t.kind == "EOF":
        return "end of input"
    if t.kind == "NEWLINE" and t.text == "\n":
        return "end of line"
    return repr(t.text)


class ExprParser:
    """Recursive-descent parser over a token list; reused by the scenario parser."""

    def __init__(self, tokens: list, pos: int = 0):
        self.tokens = tokens
        self.pos = pos

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def error(self, msg: str, tok: Token = None):
        tok = tok or self.tok
        raise DSLError(msg, tok.line, tok.col)

    def expect(self, kind: str, text: str = None) -> Token:
        t = self.tok
        if t.kind != kind or (text is not None and t.text != text):
            want = text or kind
            self.error(f"expected {want!r}, got {describe_token(t)}")
        return self.advance()

    def at_op(self, *ops) -> bool:
        return self.tok.kind == "OP" and self.tok.text in ops

    def expr(self) -> Expr:
        terms = [(1, self.term())]
        while self.at_op("+", "-"):
            sign = 1 if self.advance().text == "+" else -1
            terms.append((sign, self.term(allow_neg=False)))
        if len(terms) == 1:
            return terms[0][1]
        return Add(tuple(terms))

    def term(self, allow_neg: bool = True) -> Expr:
        if self.at_op("-"):
            tok = self.advance()
            if not allow_neg:
                self.error("unexpected '-'", tok)
            return Neg(self.term(allow_neg=False))
        factors = [self.factor()]
        while self.at_op("*"):
            self.advance()
            factors.append(self.factor())
        return factors[0] if len(factors) == 1 else Mul(tuple(factors))

    def factor(self) -> Expr:
        base = self.atom()
        if self.at_op("^"):
            self.advance()
            neg = False
            if self.at_op("-"):
                self.advance()
                neg = True
            e = int(self.expect("INT").text)
            return Pow(base, -e if neg else e)
        return base

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "INT":
            self.advance()
            return Num(int(t.text))
        if t.kind == "IDENT":
            self.advance()
            return Name(t.text)
        if self.at_op("("):
            self.advance()
            e = self.expr()
            self.expect("OP", ")")
            return e
        self.error(f"expected a number, name or '(', got {describe_token(t)}")


def parse_expr(text: str) -> Expr:
    p = ExprParser(tokenize(text))
    while p.tok.kind == "NEWLINE":
        p.advance()
    e = p.expr()
    while p.tok.kind == "NEWLINE":
        p.advance()
    if p.tok.kind != "EOF":
        p.error(f"unexpected {p.tok.text!r} after expression")
    return e


def show(e: Expr) -> str:
    """Canonical printer; the output re-parses to the same tree."""
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Name):
        return e.name
    if isinstance(e, Pow):
        base = show(e.base)
        if not isinstance(e.base, (Num, Name)):
            base = f"({base})"
        return f"{base}^{e.exp}"
    if isinstance(e, Mul):
        return "*".join(
            f"({show(f)})" if isinstance(f, (Add, Neg, Mul)) else show(f) for f in e.factors
        )
    if isinstance(e, Neg):
        inner = show(e.operand)
        if isinstance(e.operand, (Add, Neg)):
            inner = f"({inner})"
        return "-" + inner
    if isinstance(e, Add):
        out = []
        for i, (sign, t) in enumerate(e.terms):
            s = show(t)
            if isinstance(t, Add) or (i > 0 and s.startswith("-")):
                s = f"({s})"
            if i == 0:
                out.append(s)
            else:
                out.append(("+ " if sign > 0 else "- ") + s)
        return " ".join(out)
    raise TypeError(f"not an expression: {e!r}")
