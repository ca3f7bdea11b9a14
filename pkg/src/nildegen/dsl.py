"""Text formats for algebras, degeneration witnesses and condition sets.

Algebra::

    algebra lambda6 dim 5 params a
    e1 e1 = e2
    e5 e4 = a*e3

Witness::

    degeneration mu8_to_mu7 params a
    source = mu8 with a = a
    target = mu7 with a = a
    subst t = s
    point s0 = 0
    exclude a - 1
    basis:
    E1 = e1
    ...

Condition set::

    conditions R_mu11 mode one_sided rebase e1 e4 e5 e2 e3
    A1^2 sub A3
    A2*A3 = 0
    c(1,4,5) = c(4,1,5)

``#`` starts a comment.  Every error carries a SourceSpan.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .algebra import Algebra, make_algebra
from .conditions import (
    ConditionSet,
    Containment,
    Flag,
    NonHomogeneousClause,
    Poly,
    PolyClause,
    Power,
    Prod,
    ProductMode,
    Sum,
    format_poly_c,
)
from .degeneration import DegenerationWitness, ParametricBasis
from .scalars import ONE, ZERO, GaussianRational, PoleError, RatFunc, ZeroDivision, as_gaussian, format_gaussian
from .syntax import (
    BASIS_RE,
    BinOp,
    Expr,
    ExprParser,
    Neg,
    Num,
    ParseError,
    SourceSpan,
    Token,
    TokenStream,
    UnboundParameter,
    Var,
    format_expr,
    tokenize,
)

__all__ = [
    "AlgebraTemplate",
    "SubstitutionInvalid",
    "NonHomogeneousParseError",
    "ArityError",
    "parse_algebra",
    "parse_algebra_template",
    "parse_witness",
    "parse_conditions",
    "serialize_algebra",
    "serialize_witness",
    "serialize_conditions",
    "format_products",
    "parse_scalar",
    "parse_ratfunc",
]

RESERVED = {"i", "s", "t"}


class SubstitutionInvalid(ParseError):
    pass


class NonHomogeneousParseError(ParseError, NonHomogeneousClause):
    pass


class ArityError(ValueError):
    pass


def _is_basis(name: str) -> bool:
    return BASIS_RE.match(name) is not None


def _lines(text: str, file: str):
    """(lineno, tokens) for every non-blank line."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = tokenize(raw, lineno, file)
        if toks[0].kind != "end":
            yield lineno, toks


def _eof_span(text: str, file: str) -> SourceSpan:
    n = text.count("\n") + 1
    return SourceSpan(file, n, 1, 2)


def _basis_index(tok: Token, n: int, letter: str = "e") -> int:
    if tok.kind != "ident" or not tok.text.startswith(letter) or not tok.text[1:].isdigit():
        raise ParseError(f"expected {letter}<index>, found {tok.text or 'end of line'!r}", tok.span)
    k = int(tok.text[1:])
    if not 1 <= k <= n:
        raise ParseError(f"index {k} out of range 1..{n}", tok.span)
    return k


def _parse_vector(ts: TokenStream, n: int, names) -> list:
    """``0 | term (('+'|'-') term)*`` with ``term := [coeff ['*']] e<k>``.

    Returns [(k, Expr)] in source order, repeated indices merged.
    """
    if ts.at("num", "0") and ts.peek(1).kind == "end":
        ts.next()
        return []
    parser = ExprParser(ts, stop=_is_basis, names=names)
    out: dict = {}
    first = True
    while True:
        if ts.accept("op", "-"):
            sign = -1
        elif ts.accept("op", "+") or first:
            sign = 1
        else:
            break
        first = False
        if ts.peek().kind == "ident" and _is_basis(ts.peek().text):
            coeff: Expr = Num(ONE)
        else:
            coeff = parser.term()
            ts.accept("op", "*")
        k = _basis_index(ts.next(), n)
        if sign < 0:
            coeff = Num(-coeff.value) if isinstance(coeff, Num) else Neg(coeff)
        out[k] = BinOp("+", out[k], coeff) if k in out else coeff
        if ts.peek().kind == "end":
            break
        if not (ts.at("op", "+") or ts.at("op", "-")):
            t = ts.peek()
            raise ParseError(f"expected '+', '-' or end of line, found {t.text!r}", t.span)
    ts.expect_end()
    return list(out.items())


def _format_vector(items) -> str:
    """Inverse of _parse_vector for (k, Expr-or-scalar) items."""
    parts = []
    for k, c in items:
        if not isinstance(c, Expr):
            c = _scalar_expr(c)
        neg = False
        if isinstance(c, Neg):
            neg, c = True, c.arg
        elif isinstance(c, Num) and c.value.im == 0 and c.value.re < 0:
            neg, c = True, Num(-c.value)
        if isinstance(c, Num) and c.value == ONE:
            body = f"e{k}"
        else:
            s = format_expr(c)
            if c.prec < 2 or isinstance(c, Neg):
                s = f"({s})"
            body = f"{s}*e{k}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f" - {body}" if neg else f" + {body}")
    return "".join(parts) if parts else "0"


def _scalar_expr(v) -> Expr:
    if isinstance(v, RatFunc):
        c = v.constant_value()
        if c is None:
            from .syntax import parse_expr

            return parse_expr(str(v))
        v = c
    return Num(as_gaussian(v))


# ---------------------------------------------------------------------------
# algebras


@dataclass(frozen=True)
class AlgebraTemplate:
    """A multiplication table whose coefficients may mention parameters."""

    name: str
    dim: int
    params: tuple
    products: tuple  # (((i, j), ((k, Expr), ...)), ...), 1-based

    def bind(self, values: Mapping | None = None, **kw) -> Algebra:
        values = dict(values or {}, **kw)
        missing = [p for p in self.params if p not in values]
        extra = [p for p in values if p not in self.params]
        if missing or extra:
            raise ArityError(
                f"{self.name} expects parameters ({', '.join(self.params)}); "
                f"missing {missing or 'none'}, unexpected {extra or 'none'}"
            )
        env = {}
        for k, v in values.items():
            env[k] = v if isinstance(v, RatFunc) else as_gaussian(v)
        entries = []
        for (i, j), vec in self.products:
            for k, e in vec:
                entries.append((i, j, k, e.evaluate(env)))
        return make_algebra(self.dim, entries, self.name, tuple((p, env[p]) for p in self.params))

    def __call__(self, **kw) -> Algebra:
        return self.bind(kw)


def parse_algebra_template(text: str, file: str = "<string>") -> AlgebraTemplate:
    lines = list(_lines(text, file))
    if not lines:
        raise ParseError("empty input: expected 'algebra <name> dim <n>'", _eof_span(text, file))
    _, toks = lines[0]
    ts = TokenStream(toks)
    ts.expect("ident", "algebra", "'algebra'")
    name = ts.expect("ident", what="algebra name").text
    ts.expect("ident", "dim", "'dim'")
    n_tok = ts.peek()
    n = ts.expect_int("dimension")
    if n < 1:
        raise ParseError("dimension must be positive", n_tok.span)
    params: list = []
    if ts.accept("ident", "params"):
        while ts.peek().kind == "ident":
            t = ts.next()
            if t.text in RESERVED or _is_basis(t.text) or t.text in params:
                raise ParseError(f"invalid parameter name {t.text!r}", t.span)
            params.append(t.text)
        if not params:
            raise ParseError("expected parameter names", ts.peek().span)
    ts.expect_end()
    products = {}
    names = set(params)
    for _, toks in lines[1:]:
        ts = TokenStream(toks)
        ti, tj = ts.peek(), ts.peek(1)
        i = _basis_index(ts.next(), n)
        j = _basis_index(ts.next(), n)
        ts.expect("op", "=", "'='")
        if (i, j) in products:
            raise ParseError(f"duplicate product line for e{i} e{j}", SourceSpan(ti.span.file, ti.span.line, ti.span.col, tj.span.end_col))
        products[(i, j)] = tuple(_parse_vector(ts, n, names))
    ordered = tuple((ij, products[ij]) for ij in sorted(products) if products[ij])
    return AlgebraTemplate(name, n, tuple(params), ordered)


def parse_algebra(text: str, file: str = "<string>", params: Mapping | None = None):
    """An Algebra, or an AlgebraTemplate when parameters are declared and unbound."""
    tpl = parse_algebra_template(text, file)
    if tpl.params and params is None:
        return tpl
    return tpl.bind(params or {})


def format_products(A: Algebra) -> str:
    lines = []
    for (i, j) in sorted(A.table):
        vec = A.table[(i, j)]
        items = [(k + 1, v) for k, v in enumerate(vec) if v]
        lines.append(f"e{i + 1} e{j + 1} = {_format_vector(items)}")
    return "\n".join(lines)


def serialize_algebra(A, name: str | None = None) -> str:
    if isinstance(A, AlgebraTemplate):
        head = f"algebra {A.name} dim {A.dim}"
        if A.params:
            head += " params " + " ".join(A.params)
        body = [f"e{i} e{j} = {_format_vector(vec)}" for (i, j), vec in A.products]
        return "\n".join([head] + body) + "\n"
    label = name or A.label or "A"
    label = "".join(ch if ch.isalnum() or ch == "_" else "_" for ch in label) or "A"
    if not (label[0].isalpha() or label[0] == "_"):
        label = "A_" + label
    body = format_products(A)
    return f"algebra {label} dim {A.dim}\n" + (body + "\n" if body else "")


# ---------------------------------------------------------------------------
# witnesses


def _parse_ref(ts: TokenStream) -> str:
    t = ts.expect("ident", what="algebra name")
    if t.text == "catalog" and ts.accept("op", ":"):
        t = ts.expect("ident", what="algebra name")
    return t.text


def _parse_with(ts: TokenStream, names) -> tuple:
    pairs = []
    if ts.accept("ident", "with"):
        while True:
            p = ts.expect("ident", what="parameter name").text
            ts.expect("op", "=", "'='")
            pairs.append((p, ExprParser(ts, names=names).expr()))
            if not ts.accept("op", ","):
                break
    ts.expect_end()
    return tuple(pairs)


def parse_witness(text: str, file: str = "<string>") -> DegenerationWitness:
    lines = list(_lines(text, file))
    if not lines:
        raise ParseError("empty input: expected 'degeneration <name>'", _eof_span(text, file))
    _, toks = lines[0]
    ts = TokenStream(toks)
    ts.expect("ident", "degeneration", "'degeneration'")
    label = ts.expect("ident", what="witness name").text
    params: list = []
    if ts.accept("ident", "params"):
        while ts.peek().kind == "ident":
            t = ts.next()
            if t.text in RESERVED or _is_basis(t.text):
                raise ParseError(f"invalid parameter name {t.text!r}", t.span)
            params.append(t.text)
    ts.expect_end()
    pset = set(params)
    source = target = None
    source_params = target_params = ()
    subst: Expr = Var("s")
    point: Expr = Num(ZERO)
    subst_span = point_span = None
    exclusions = []
    rows: list = []
    in_basis = False
    last_span = toks[0].span
    for _, toks in lines[1:]:
        ts = TokenStream(toks)
        first = ts.peek()
        last_span = first.span
        if in_basis:
            head = ts.next()
            if head.kind != "ident" or not head.text.startswith("E") or not head.text[1:].isdigit():
                raise ParseError(f"expected E<index>, found {head.text!r}", head.span)
            idx = int(head.text[1:])
            if idx != len(rows) + 1:
                raise ParseError(f"expected E{len(rows) + 1}, found {head.text}", head.span)
            ts.expect("op", "=", "'='")
            rows.append((head, ts))
            continue
        kw = ts.expect("ident", what="a witness field").text
        if kw == "source":
            ts.expect("op", "=", "'='")
            source = _parse_ref(ts)
            source_params = _parse_with(ts, pset | {"t", "s"})
        elif kw == "target":
            ts.expect("op", "=", "'='")
            target = _parse_ref(ts)
            target_params = _parse_with(ts, pset)
        elif kw == "subst":
            ts.expect("ident", "t", "'t'")
            ts.expect("op", "=", "'='")
            subst_span = first.span
            subst = ExprParser(ts, names=pset | {"s"}).expr()
            ts.expect_end()
        elif kw == "point":
            ts.expect("ident", "s0", "'s0'")
            ts.expect("op", "=", "'='")
            point_span = first.span
            point = ExprParser(ts, names=pset).expr()
            ts.expect_end()
        elif kw == "exclude":
            exclusions.append(ExprParser(ts, names=pset).expr())
            ts.expect_end()
        elif kw == "basis":
            ts.expect("op", ":", "':'")
            ts.expect_end()
            in_basis = True
        else:
            raise ParseError(f"unknown field {kw!r}", first.span)
    if source is None or target is None:
        raise ParseError("witness needs both 'source =' and 'target =' lines", last_span)
    if not rows:
        raise ParseError("witness needs a 'basis:' section with E1..En", last_span)
    n = len(rows)
    basis_rows = []
    for head, ts in rows:
        vec = dict(_parse_vector(ts, n, pset | {"t", "s"}))
        basis_rows.append(tuple(vec.get(k, Num(ZERO)) for k in range(1, n + 1)))
    basis = ParametricBasis(tuple(basis_rows), subst, point)
    if not ((subst.free_vars() | point.free_vars()) & pset):
        span = point_span or subst_span or toks[0].span
        try:
            t = subst.evaluate({"s": RatFunc.s()})
            t = t if isinstance(t, RatFunc) else RatFunc.const(t)
            t0 = t.eval_at(as_gaussian(point.evaluate({})))
        except (PoleError, ZeroDivision, TypeError) as exc:
            raise SubstitutionInvalid(f"cannot evaluate t at s0: {exc}", span) from None
        if t.is_constant():
            raise SubstitutionInvalid("substitution t(s) must not be constant", subst_span or span)
        if t0:
            raise SubstitutionInvalid(f"t(s0) = {t0}, but the limit point must have t(s0) = 0", span)
    return DegenerationWitness(
        label,
        source,
        target,
        basis,
        source_params=source_params,
        target_params=target_params,
        params=tuple(params),
        exclusions=tuple(exclusions),
    )


def _format_with(pairs) -> str:
    if not pairs:
        return ""
    return " with " + ", ".join(f"{p} = {format_expr(e)}" for p, e in pairs)


def serialize_witness(w: DegenerationWitness) -> str:
    head = f"degeneration {w.label}"
    if w.params:
        head += " params " + " ".join(w.params)
    out = [head, f"source = {w.source}{_format_with(w.source_params)}", f"target = {w.target}{_format_with(w.target_params)}"]
    out.append(f"subst t = {format_expr(w.basis.subst)}")
    out.append(f"point s0 = {format_expr(w.basis.point)}")
    for ex in w.exclusions:
        out.append(f"exclude {format_expr(ex)}")
    out.append("basis:")
    for i, row in enumerate(w.basis.rows, start=1):
        items = [(k, e) for k, e in enumerate(row, start=1) if not (isinstance(e, Num) and not e.value)]
        out.append(f"E{i} = {_format_vector(items)}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# condition sets


def _is_flag(name: str) -> bool:
    return name.startswith("A") and name[1:].isdigit()


class _SubParser:
    """sexpr := sterm ('+' sterm)*; sterm := sfactor (['*'] sfactor)*;
    sfactor := satom ['^' int]; satom := A<k> | '(' sexpr ')'"""

    def __init__(self, ts: TokenStream, n: int | None):
        self.ts = ts
        self.n = n

    def expr(self):
        terms = [self.term()]
        while self.ts.accept("op", "+"):
            terms.append(self.term())
        return terms[0] if len(terms) == 1 else Sum(tuple(t for x in terms for t in (x.terms if isinstance(x, Sum) else (x,))))

    def term(self):
        node = self.factor()
        while True:
            if self.ts.accept("op", "*"):
                node = Prod(node, self.factor())
            elif self.ts.at("op", "(") or (self.ts.peek().kind == "ident" and _is_flag(self.ts.peek().text)):
                node = Prod(node, self.factor())
            else:
                return node

    def factor(self):
        node = self.atom()
        if self.ts.accept("op", "^"):
            tok = self.ts.peek()
            m = self.ts.expect_int("power")
            if m < 1:
                raise ParseError("powers must be at least 1", tok.span)
            node = Power(node, m)
        return node

    def atom(self):
        ts = self.ts
        if ts.accept("op", "("):
            node = self.expr()
            ts.expect("op", ")")
            return node
        tok = ts.peek()
        if tok.kind == "ident" and _is_flag(tok.text):
            ts.next()
            k = int(tok.text[1:])
            if k < 1 or (self.n is not None and k > self.n + 1):
                raise ParseError(f"flag index {k} out of range", tok.span)
            return Flag(k)
        raise ParseError(f"expected A<index> or '(', found {tok.text or 'end of line'!r}", tok.span)


class _PolyParser:
    """Polynomials in c(i,j,k) with Q(i) coefficients."""

    def __init__(self, ts: TokenStream, n: int | None):
        self.ts = ts
        self.n = n

    def expr(self) -> Poly:
        ts = self.ts
        if ts.accept("op", "-"):
            node = -self.term()
        else:
            ts.accept("op", "+")
            node = self.term()
        while ts.at("op", "+") or ts.at("op", "-"):
            op = ts.next().text
            rhs = self.term()
            node = node + rhs if op == "+" else node - rhs
        return node

    def _starts(self) -> bool:
        t = self.ts.peek()
        return t.kind in ("num", "ident") or (t.kind == "op" and t.text == "(")

    def term(self) -> Poly:
        ts = self.ts
        node = self.power()
        while True:
            if ts.at("op", "*"):
                ts.next()
                node = node * self.power()
            elif ts.at("op", "/"):
                tok = ts.next()
                d = self.power()
                try:
                    c = d.constant_value()
                except TypeError:
                    raise ParseError("can only divide by constants", tok.span) from None
                if not c:
                    raise ParseError("division by zero", tok.span)
                node = node / c
            elif self._starts():
                node = node * self.power()
            else:
                return node

    def power(self) -> Poly:
        node = self.atom()
        if self.ts.accept("op", "^"):
            node = node ** self.ts.expect_int("exponent")
        return node

    def atom(self) -> Poly:
        ts = self.ts
        tok = ts.peek()
        if tok.kind == "num":
            ts.next()
            return Poly.const(int(tok.text))
        if tok.kind == "ident" and tok.text == "i":
            ts.next()
            return Poly.const(GaussianRational(0, 1))
        if tok.kind == "ident" and tok.text == "c":
            ts.next()
            ts.expect("op", "(", "'('")
            idx = []
            for pos in range(3):
                t = ts.peek()
                v = ts.expect_int("index")
                if v < 1 or (self.n is not None and v > self.n):
                    raise ParseError(f"index {v} out of range", t.span)
                idx.append(v)
                if pos < 2:
                    ts.expect("op", ",", "','")
            ts.expect("op", ")", "')'")
            return Poly.var(*idx)
        if ts.accept("op", "("):
            node = self.expr()
            ts.expect("op", ")")
            return node
        raise ParseError(f"expected c(i,j,k), a number or '(', found {tok.text or 'end of line'!r}", tok.span)


def parse_conditions(text: str, file: str = "<string>") -> ConditionSet:
    lines = list(_lines(text, file))
    if not lines:
        raise ParseError("empty input: expected 'conditions <name>'", _eof_span(text, file))
    _, toks = lines[0]
    ts = TokenStream(toks)
    ts.expect("ident", "conditions", "'conditions'")
    label = ts.expect("ident", what="condition set name").text
    mode = ProductMode.ONE_SIDED
    rebase = None
    dim = None
    while ts.peek().kind != "end":
        kw = ts.expect("ident", what="'mode', 'rebase' or 'dim'")
        if kw.text == "mode":
            m = ts.expect("ident", what="one_sided or symmetric")
            try:
                mode = ProductMode(m.text)
            except ValueError:
                raise ParseError(f"unknown mode {m.text!r}", m.span) from None
        elif kw.text == "rebase":
            idx = []
            while ts.peek().kind == "ident" and _is_basis(ts.peek().text):
                idx.append(int(ts.next().text[1:]))
            if sorted(idx) != list(range(1, len(idx) + 1)):
                raise ParseError("rebase must list each of e1..en exactly once", kw.span)
            rebase = tuple(idx)
        elif kw.text == "dim":
            dim = ts.expect_int("dimension")
        else:
            raise ParseError(f"unknown option {kw.text!r}", kw.span)
    n = dim or (len(rebase) if rebase else None)
    if dim and rebase and len(rebase) != dim:
        raise ParseError("rebase length differs from dim", toks[0].span)
    containments = []
    polys = []
    basis_rows: list = []
    for _, toks in lines[1:]:
        ts = TokenStream(toks)
        head = ts.peek()
        if head.kind == "ident" and head.text[:1] == "E" and head.text[1:].isdigit() and ts.at("op", "=", 1):
            if int(head.text[1:]) != len(basis_rows) + 1:
                raise ParseError(f"expected E{len(basis_rows) + 1}, found {head.text}", head.span)
            ts.next()
            ts.next()
            basis_rows.append(ts)
            continue
        is_sub = any(t.kind == "ident" and (t.text == "sub" or _is_flag(t.text)) for t in toks)
        if is_sub:
            expr = _SubParser(ts, n).expr()
            if ts.accept("ident", "sub"):
                tok = ts.peek()
                target = _SubParser(ts, n).atom()
                if not isinstance(target, Flag):
                    raise ParseError("right side of 'sub' must be a flag A<k>", tok.span)
                containments.append(Containment(expr, target.index))
            else:
                ts.expect("op", "=", "'sub' or '= 0'")
                ts.expect("num", "0", "'0'")
                containments.append(Containment(expr, None, zero=True))
            ts.expect_end()
            continue
        parser = _PolyParser(ts, n)
        sides = [parser.expr()]
        while ts.accept("op", "="):
            sides.append(parser.expr())
        ts.expect_end()
        if len(sides) < 2:
            raise ParseError("expected '=' in a polynomial clause", toks[0].span)
        for lhs, rhs in zip(sides, sides[1:]):
            clause = PolyClause(lhs, rhs)
            if 0 in clause.diff.degrees():
                span = SourceSpan(toks[0].span.file, toks[0].span.line, toks[0].span.col, toks[-1].span.col)
                raise NonHomogeneousParseError("clause has a constant term", span)
            polys.append(clause)
    if basis_rows:
        if rebase is not None:
            raise ParseError("give either a 'rebase' permutation or E<i> basis lines, not both", toks[0].span)
        m = len(basis_rows)
        if n is not None and m != n:
            raise ParseError(f"expected {n} basis lines, found {m}", basis_rows[-1].peek().span)
        rows = []
        for ts in basis_rows:
            vec = dict(_parse_vector(ts, m, set()))
            rows.append(tuple(as_gaussian(vec[k].evaluate({})) if k in vec else ZERO for k in range(1, m + 1)))
        rebase = tuple(rows)
    return ConditionSet(label, tuple(containments), tuple(polys), mode, rebase, dim)


def serialize_conditions(cs: ConditionSet) -> str:
    head = f"conditions {cs.label}"
    if cs.dim is not None:
        head += f" dim {cs.dim}"
    head += f" mode {cs.mode.value}"
    out = []
    if cs.rebase is not None:
        if cs.rebase_is_permutation:
            head += " rebase " + " ".join(f"e{i}" for i in cs.rebase)
        else:
            for i, row in enumerate(cs.rebase, start=1):
                out.append(f"E{i} = {_format_vector([(k, v) for k, v in enumerate(row, start=1) if v])}")
    out.insert(0, head)
    out += [str(c) for c in cs.containments]
    out += [str(c) for c in cs.polys]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# scalar literals


def parse_scalar(text: str) -> GaussianRational:
    from .syntax import parse_expr

    e = parse_expr(text, names=set())
    return as_gaussian(e.evaluate({}))


def parse_ratfunc(text: str, var: str = "s") -> RatFunc:
    from .syntax import parse_expr

    e = parse_expr(text, names={var})
    v = e.evaluate({var: RatFunc.s()})
    return v if isinstance(v, RatFunc) else RatFunc.const(v)
