"""Lexer, source spans and scalar expressions shared by the text formats."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Mapping

from .scalars import I, ONE, GaussianRational, RatFunc, ZeroDivision, as_gaussian, format_gaussian

__all__ = [
    "SourceSpan",
    "ParseError",
    "UnboundParameter",
    "Token",
    "tokenize",
    "TokenStream",
    "Expr",
    "Num",
    "Var",
    "Neg",
    "BinOp",
    "Pow",
    "parse_expr",
    "format_expr",
    "BASIS_RE",
]

BASIS_RE = re.compile(r"e(\d+)$")


@dataclass(frozen=True, slots=True)
class SourceSpan:
    """1-based line and column range [col, end_col) inside ``file``."""

    file: str
    line: int
    col: int
    end_col: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.col}"


class ParseError(ValueError):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(f"{span}: {message}")
        self.message = message
        self.span = span


class UnboundParameter(KeyError):
    pass


@dataclass(frozen=True, slots=True)
class Token:
    kind: str  # "num", "ident", "op", "end"
    text: str
    span: SourceSpan


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()=,:?&]))")


def tokenize(line: str, lineno: int = 1, file: str = "<string>") -> list[Token]:
    """Tokens of one line; ``#`` starts a comment."""
    hash_at = line.find("#")
    if hash_at >= 0:
        line = line[:hash_at]
    toks = []
    pos = 0
    n = len(line.rstrip())
    while pos < n:
        m = _TOKEN_RE.match(line, pos)
        if not m or m.end() == pos:
            col = pos + 1
            while col <= len(line) and line[col - 1].isspace():
                col += 1
            raise ParseError(f"unexpected character {line[col - 1]!r}", SourceSpan(file, lineno, col, col + 1))
        num, ident, op = m.groups()
        start = m.start(m.lastindex) + 1
        end = m.end() + 1
        span = SourceSpan(file, lineno, start, end)
        if num is not None:
            toks.append(Token("num", num, span))
        elif ident is not None:
            toks.append(Token("ident", ident, span))
        else:
            toks.append(Token("op", "^" if op == "**" else op, span))
        pos = m.end()
    toks.append(Token("end", "", SourceSpan(file, lineno, n + 1, n + 2)))
    return toks


class TokenStream:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "end":
            self.i += 1
        return t

    def at(self, kind: str, text: str | None = None, k: int = 0) -> bool:
        t = self.peek(k)
        return t.kind == kind and (text is None or t.text == text)

    def accept(self, kind: str, text: str | None = None) -> Token | None:
        if self.at(kind, text):
            return self.next()
        return None

    def expect(self, kind: str, text: str | None = None, what: str | None = None) -> Token:
        t = self.peek()
        if t.kind == kind and (text is None or t.text == text):
            return self.next()
        want = what or (repr(text) if text else kind)
        got = "end of line" if t.kind == "end" else repr(t.text)
        raise ParseError(f"expected {want}, found {got}", t.span)

    def expect_end(self) -> None:
        t = self.peek()
        if t.kind != "end":
            raise ParseError(f"unexpected {t.text!r}", t.span)

    def expect_int(self, what: str = "integer") -> int:
        return int(self.expect("num", what=what).text)


# ---------------------------------------------------------------------------
# expressions


class Expr:
    __slots__ = ()
    prec = 9

    def evaluate(self, env: Mapping):
        raise NotImplementedError

    def free_vars(self) -> frozenset:
        raise NotImplementedError

    def __str__(self):
        return format_expr(self)


@dataclass(frozen=True, slots=True)
class Num(Expr):
    value: GaussianRational

    def evaluate(self, env):
        return self.value

    def free_vars(self):
        return frozenset()

    @property
    def prec(self):
        v = self.value
        if v.im == 0 and v.re >= 0 and v.den == 1:
            return 9
        if v.re == 0 and v.den == 1 and v.im == 1:
            return 9
        return 0


@dataclass(frozen=True, slots=True)
class Var(Expr):
    name: str
    prec = 9

    def evaluate(self, env):
        try:
            return env[self.name]
        except KeyError:
            raise UnboundParameter(self.name) from None

    def free_vars(self):
        return frozenset((self.name,))


@dataclass(frozen=True, slots=True)
class Neg(Expr):
    arg: Expr
    prec = 3

    def evaluate(self, env):
        return -self.arg.evaluate(env)

    def free_vars(self):
        return self.arg.free_vars()


_OPS: dict[str, Callable] = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": lambda a, b: a / b,
}
_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


@dataclass(frozen=True, slots=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr

    @property
    def prec(self):
        return _PREC[self.op]

    def evaluate(self, env):
        a = self.left.evaluate(env)
        b = self.right.evaluate(env)
        if self.op == "/" and not b:
            raise ZeroDivision(f"division by zero in {format_expr(self)}")
        return _OPS[self.op](a, b)

    def free_vars(self):
        return self.left.free_vars() | self.right.free_vars()


@dataclass(frozen=True, slots=True)
class Pow(Expr):
    base: Expr
    exp: int
    prec = 4

    def evaluate(self, env):
        b = self.base.evaluate(env)
        if self.exp < 0 and not b:
            raise ZeroDivision(f"zero raised to a negative power in {format_expr(self)}")
        return b**self.exp

    def free_vars(self):
        return self.base.free_vars()


def _fold(node: Expr) -> Expr:
    """Fold operations whose operands are all literals."""
    try:
        if isinstance(node, Neg) and isinstance(node.arg, Num):
            return Num(-node.arg.value)
        if isinstance(node, BinOp) and isinstance(node.left, Num) and isinstance(node.right, Num):
            return Num(as_gaussian(node.evaluate({})))
        if isinstance(node, Pow) and isinstance(node.base, Num):
            return Num(as_gaussian(node.evaluate({})))
    except ZeroDivision:
        return node
    return node


class ExprParser:
    """Recursive descent over a TokenStream.

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := power (('*'|'/') power | power)*      juxtaposition multiplies
    power  := atom ['^' ['-'] int | '^' '(' '-' int ')']
    atom   := int | 'i' | ident | '(' expr ')'

    ``stop`` names identifiers that end a term (basis symbols such as e3).
    """

    def __init__(self, ts: TokenStream, stop: Callable[[str], bool] | None = None, names=None):
        self.ts = ts
        self.stop = stop or (lambda name: False)
        self.names = names

    def starts_atom(self, k: int = 0) -> bool:
        t = self.ts.peek(k)
        if t.kind == "num":
            return True
        if t.kind == "ident":
            return not self.stop(t.text)
        return t.kind == "op" and t.text == "("

    def expr(self) -> Expr:
        ts = self.ts
        if ts.accept("op", "-"):
            node = _fold(Neg(self.term()))
        else:
            ts.accept("op", "+")
            node = self.term()
        while ts.at("op", "+") or ts.at("op", "-"):
            op = ts.next().text
            node = _fold(BinOp(op, node, self.term()))
        return node

    def term(self) -> Expr:
        ts = self.ts
        node = self.power()
        while True:
            if ts.at("op", "*") or ts.at("op", "/"):
                # a trailing '*' before a stop symbol belongs to the caller
                if ts.at("op", "*") and ts.peek(1).kind == "ident" and self.stop(ts.peek(1).text):
                    return node
                op = ts.next().text
                node = _fold(BinOp(op, node, self.power()))
            elif self.starts_atom():
                node = _fold(BinOp("*", node, self.power()))
            else:
                return node

    def power(self) -> Expr:
        ts = self.ts
        base = self.atom()
        if ts.accept("op", "^"):
            if ts.accept("op", "("):
                neg = bool(ts.accept("op", "-"))
                k = ts.expect_int("exponent")
                ts.expect("op", ")")
            else:
                neg = bool(ts.accept("op", "-"))
                k = ts.expect_int("exponent")
            return _fold(Pow(base, -k if neg else k))
        return base

    def atom(self) -> Expr:
        ts = self.ts
        t = ts.peek()
        if t.kind == "num":
            ts.next()
            return Num(GaussianRational(int(t.text)))
        if t.kind == "ident" and not self.stop(t.text):
            ts.next()
            if t.text == "i":
                return Num(I)
            if self.names is not None and t.text not in self.names:
                raise ParseError(f"unknown name {t.text!r}", t.span)
            return Var(t.text)
        if ts.accept("op", "("):
            node = self.expr()
            ts.expect("op", ")")
            return node
        got = "end of line" if t.kind == "end" else repr(t.text)
        raise ParseError(f"expected a number, name or '(', found {got}", t.span)


def parse_expr(text: str, names=None, lineno: int = 1, file: str = "<string>") -> Expr:
    ts = TokenStream(tokenize(text, lineno, file))
    node = ExprParser(ts, names=names).expr()
    ts.expect_end()
    return node


def _wrap(child: Expr, min_prec: int) -> str:
    s = format_expr(child)
    return f"({s})" if child.prec < min_prec else s


def format_expr(e: Expr) -> str:
    """Render so that parsing the text gives back an equal tree."""
    if isinstance(e, Num):
        return format_gaussian(e.value)
    if isinstance(e, Var):
        return e.name
    # a unary minus only parses at the start of an expression
    if isinstance(e, Neg):
        arg = format_expr(e.arg)
        return f"-({arg})" if isinstance(e.arg, Neg) or e.arg.prec < 2 else f"-{arg}"
    if isinstance(e, Pow):
        exp = str(e.exp) if e.exp >= 0 else f"({e.exp})"
        return f"{_wrap(e.base, 9)}^{exp}"
    if isinstance(e, BinOp):
        p = _PREC[e.op]
        if isinstance(e.left, Neg):
            left = format_expr(e.left) if p == 1 else f"({format_expr(e.left)})"
        else:
            left = _wrap(e.left, p)
        # left-associative: the right operand needs strictly higher precedence
        if isinstance(e.right, Neg):
            right = f"({format_expr(e.right)})"
        else:
            right = _wrap(e.right, p + 1)
        sep = f" {e.op} " if p == 1 else e.op
        return f"{left}{sep}{right}"
    raise TypeError(f"not an expression: {e!r}")


def scalar_env(values: Mapping, s: RatFunc | None = None, t=None) -> dict:
    env = dict(values)
    if s is not None:
        env["s"] = s
    if t is not None:
        env["t"] = t
    return env


ONE_EXPR = Num(ONE)
