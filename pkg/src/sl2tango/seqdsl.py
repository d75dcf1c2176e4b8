"""A small line-oriented language for split bundles, cokernels and queries.

Example::

    let n = 4
    let Q = coker(O(-1) -> O(0)^5)
    let F1 = coker(twist(Q, -1) -> O(0)^7)
    query chern(F1)
    query h(Q, -2..1)

Grammar (one statement per line, ``#`` starts a comment)::

    script  := { stmt NEWLINE }
    stmt    := "let" IDENT "=" (INT | bexpr) | "query" query | COMMENT
    bexpr   := term { "++" term }
    term    := "O" "(" INT ")" [ "^" INT ] | IDENT | "sym" "(" INT "," bexpr ")"
             | "wedge" "(" INT "," bexpr ")" | "twist" "(" bexpr "," INT ")"
             | "coker" "(" bexpr "->" bexpr ")" | "(" bexpr ")"
    query   := ("chern" | "maxtwist") "(" bexpr ")" | "chi" "(" bexpr "," INT ")"
             | "h" "(" bexpr "," INT ".." INT ")" | "stable" "(" INT "," INT "," INT ")"

Only ``n`` may be bound to an integer; it must be bound exactly once, before
any bundle expression.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Union

from . import bundlecalc as bc

KEYWORDS = {"let", "query", "O", "sym", "wedge", "twist", "coker"}
QUERY_NAMES = ("chern", "maxtwist", "chi", "h", "stable")

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<arrow>->)
  | (?P<int>-?[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>\+\+|\.\.|[()=,^])
""", re.VERBOSE)


@dataclass(frozen=True)
class Span:
    line: int
    col: int


class DslError(Exception):
    """A diagnostic: ``kind`` is ``lexical``, ``syntax``, ``scope`` or ``evaluation``."""

    def __init__(self, kind: str, message: str, span: Span, expected: tuple[str, ...] = ()):
        self.kind = kind
        self.message = message
        self.span = span
        self.expected = expected
        super().__init__(str(self))

    def __str__(self) -> str:
        out = f"{self.span.line}:{self.span.col}: {self.kind} error: {self.message}"
        if self.expected:
            out += " (expected " + ", ".join(self.expected) + ")"
        return out

    def to_dict(self) -> dict:
        return {"kind": self.kind, "message": self.message, "line": self.span.line,
                "col": self.span.col, "expected": list(self.expected)}


@dataclass(frozen=True)
class Token:
    kind: str  # int, ident, kw, punct, newline, eof
    text: str
    span: Span

    def describe(self) -> str:
        if self.kind == "newline":
            return "end of line"
        if self.kind == "eof":
            return "end of input"
        return repr(self.text)


def tokenize(text: str) -> list[Token]:
    toks: list[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        span = Span(line, pos - line_start + 1)
        if m is None:
            raise DslError("lexical", f"unexpected character {text[pos]!r}", span)
        kind = m.lastgroup
        s = m.group()
        if kind == "newline":
            toks.append(Token("newline", s, span))
            line, line_start = line + 1, m.end()
        elif kind == "comment":
            toks.append(Token("comment", s, span))
        elif kind == "ident":
            toks.append(Token("kw" if s in KEYWORDS else "ident", s, span))
        elif kind == "arrow":
            toks.append(Token("punct", s, span))
        elif kind != "ws":
            toks.append(Token(kind, s, span))
        pos = m.end()
    toks.append(Token("eof", "", Span(line, pos - line_start + 1)))
    return toks


# --- AST ---------------------------------------------------------------------

def _span():
    return field(default=Span(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Line:
    twist: int
    power: int | None = None
    span: Span = _span()


@dataclass(frozen=True)
class Name:
    ident: str
    span: Span = _span()


@dataclass(frozen=True)
class Sum:
    terms: tuple
    span: Span = _span()


@dataclass(frozen=True)
class Sym:
    k: int
    arg: "BundleExpr"
    span: Span = _span()


@dataclass(frozen=True)
class Wedge:
    q: int
    arg: "BundleExpr"
    span: Span = _span()


@dataclass(frozen=True)
class Twist:
    arg: "BundleExpr"
    t: int
    span: Span = _span()


@dataclass(frozen=True)
class CokerExpr:
    sub: "BundleExpr"
    target: "BundleExpr"
    span: Span = _span()


BundleExpr = Union[Line, Name, Sum, Sym, Wedge, Twist, CokerExpr]


@dataclass(frozen=True)
class LetInt:
    name: str
    value: int
    span: Span = _span()


@dataclass(frozen=True)
class LetBundle:
    name: str
    expr: BundleExpr
    span: Span = _span()


@dataclass(frozen=True)
class Query:
    name: str
    args: tuple
    span: Span = _span()


@dataclass(frozen=True)
class Comment:
    text: str
    span: Span = _span()


Statement = Union[LetInt, LetBundle, Query, Comment]


@dataclass(frozen=True)
class Script:
    statements: tuple[Statement, ...]


# --- parser ------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.expected: set[str] = set()

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        self.expected = set()
        return t

    def check(self, text: str) -> bool:
        """Is the current token ``text``?  Records ``text`` as an alternative."""
        self.expected.add(repr(text))
        return self.tok.kind in ("punct", "kw", "ident") and self.tok.text == text

    def accept(self, text: str) -> bool:
        if self.check(text):
            self.advance()
            return True
        return False

    def fail(self, what: str | None = None):
        if what:
            self.expected.add(what)
        raise DslError("syntax", f"unexpected {self.tok.describe()}", self.tok.span,
                       tuple(sorted(self.expected)))

    def expect(self, text: str) -> Token:
        if not self.check(text):
            self.fail()
        return self.advance()

    def integer(self) -> int:
        if self.tok.kind != "int":
            self.fail("integer")
        return int(self.advance().text)

    def script(self) -> Script:
        stmts = []
        while self.tok.kind != "eof":
            if self.tok.kind == "newline":
                self.advance()
                continue
            if self.tok.kind == "comment":
                t = self.advance()
                stmts.append(Comment(t.text[1:].strip(), t.span))
            else:
                stmts.append(self.statement())
                if self.tok.kind == "comment":
                    self.advance()
            if self.tok.kind not in ("newline", "eof"):
                self.fail("end of line")
        return Script(tuple(stmts))

    def statement(self) -> Statement:
        start = self.tok.span
        if self.accept("let"):
            if self.tok.kind != "ident":
                self.fail("identifier")
            name_tok = self.advance()
            name = name_tok.text
            self.expect("=")
            if self.tok.kind == "int":
                return LetInt(name, int(self.advance().text), name_tok.span)
            self.expected.add("integer")
            return LetBundle(name, self.bexpr(), name_tok.span)
        if self.accept("query"):
            return self.query(start)
        self.fail()

    def query(self, start: Span) -> Query:
        for q in QUERY_NAMES:
            self.expected.add(repr(q))
        if self.tok.kind != "ident" or self.tok.text not in QUERY_NAMES:
            self.fail()
        name = self.advance().text
        self.expect("(")
        if name in ("chern", "maxtwist"):
            args = (self.bexpr(),)
        elif name == "chi":
            e = self.bexpr()
            self.expect(",")
            args = (e, self.integer())
        elif name == "h":
            e = self.bexpr()
            self.expect(",")
            a = self.integer()
            self.expect("..")
            args = (e, a, self.integer())
        else:
            a = self.integer()
            self.expect(",")
            b = self.integer()
            self.expect(",")
            args = (a, b, self.integer())
        self.expect(")")
        return Query(name, args, start)

    def bexpr(self) -> BundleExpr:
        start = self.tok.span
        terms = [self.term()]
        while self.accept("++"):
            terms.append(self.term())
        if len(terms) == 1:
            return terms[0]
        flat = []
        for t in terms:
            flat.extend(t.terms if isinstance(t, Sum) else (t,))
        return Sum(tuple(flat), start)

    def term(self) -> BundleExpr:
        start = self.tok.span
        for alt in ("'O'", "'sym'", "'wedge'", "'twist'", "'coker'", "'('", "identifier"):
            self.expected.add(alt)
        if self.accept("O"):
            self.expect("(")
            t = self.integer()
            self.expect(")")
            power = self.integer() if self.accept("^") else None
            return Line(t, power, start)
        for kw, ctor in (("sym", Sym), ("wedge", Wedge)):
            if self.accept(kw):
                self.expect("(")
                k = self.integer()
                self.expect(",")
                e = self.bexpr()
                self.expect(")")
                return ctor(k, e, start)
        if self.accept("twist"):
            self.expect("(")
            e = self.bexpr()
            self.expect(",")
            t = self.integer()
            self.expect(")")
            return Twist(e, t, start)
        if self.accept("coker"):
            self.expect("(")
            a = self.bexpr()
            self.expect("->")
            b = self.bexpr()
            self.expect(")")
            return CokerExpr(a, b, start)
        if self.accept("("):
            e = self.bexpr()
            self.expect(")")
            return e
        if self.tok.kind == "ident":
            return Name(self.advance().text, start)
        self.fail()


def _check_scope(script: Script) -> None:
    defined: set[str] = set()
    has_n = False

    def walk(e: BundleExpr) -> None:
        if not has_n:
            raise DslError("scope", "bundle expression before 'let n = ...'", e.span)
        if isinstance(e, Name):
            if e.ident not in defined:
                raise DslError("scope", f"undefined name {e.ident!r}", e.span)
        elif isinstance(e, Sum):
            for t in e.terms:
                walk(t)
        elif isinstance(e, (Sym, Wedge, Twist)):
            walk(e.arg)
        elif isinstance(e, CokerExpr):
            walk(e.sub)
            walk(e.target)

    for st in script.statements:
        if isinstance(st, LetInt):
            if st.name != "n":
                raise DslError("scope", f"only 'n' may be bound to an integer, not {st.name!r}", st.span)
            if has_n:
                raise DslError("scope", "ambient 'n' declared twice", st.span)
            if st.value < 1:
                raise DslError("scope", f"ambient dimension n = {st.value} must be positive", st.span)
            has_n = True
        elif isinstance(st, LetBundle):
            if st.name == "n":
                raise DslError("scope", "'n' is reserved for the ambient dimension", st.span)
            if st.name in defined:
                raise DslError("scope", f"{st.name!r} already defined", st.span)
            walk(st.expr)
            defined.add(st.name)
        elif isinstance(st, Query) and st.name != "stable":
            walk(st.args[0])


def parse(text: str) -> Script:
    """Parse a script.  Raises :class:`DslError` on any lexical, syntax or scope problem."""
    script = _Parser(text).script()
    _check_scope(script)
    return script


# --- printer -----------------------------------------------------------------

def format_expr(e: BundleExpr) -> str:
    if isinstance(e, Line):
        return f"O({e.twist})" + (f"^{e.power}" if e.power is not None else "")
    if isinstance(e, Name):
        return e.ident
    if isinstance(e, Sum):
        return " ++ ".join(format_expr(t) for t in e.terms)
    if isinstance(e, Sym):
        return f"sym({e.k}, {format_expr(e.arg)})"
    if isinstance(e, Wedge):
        return f"wedge({e.q}, {format_expr(e.arg)})"
    if isinstance(e, Twist):
        return f"twist({format_expr(e.arg)}, {e.t})"
    if isinstance(e, CokerExpr):
        return f"coker({format_expr(e.sub)} -> {format_expr(e.target)})"
    raise TypeError(e)


def format_query(q: Query) -> str:
    a = q.args
    if q.name in ("chern", "maxtwist"):
        inner = format_expr(a[0])
    elif q.name == "chi":
        inner = f"{format_expr(a[0])}, {a[1]}"
    elif q.name == "h":
        inner = f"{format_expr(a[0])}, {a[1]}..{a[2]}"
    else:
        inner = ", ".join(str(x) for x in a)
    return f"{q.name}({inner})"


def format_script(s: Script) -> str:
    lines = []
    for st in s.statements:
        if isinstance(st, LetInt):
            lines.append(f"let {st.name} = {st.value}")
        elif isinstance(st, LetBundle):
            lines.append(f"let {st.name} = {format_expr(st.expr)}")
        elif isinstance(st, Query):
            lines.append(f"query {format_query(st)}")
        else:
            lines.append(f"# {st.text}" if st.text else "#")
    return "\n".join(lines) + "\n"


# --- evaluator ---------------------------------------------------------------

@dataclass
class QueryResult:
    query: str
    data: dict
    text: str


class _Evaluator:
    def __init__(self):
        self.n: int | None = None
        self.env: dict[str, bc.Bundle] = {}

    def bundle(self, e: BundleExpr) -> bc.Bundle:
        try:
            return self._bundle(e)
        except DslError:
            raise
        except ValueError as exc:
            raise DslError("evaluation", str(exc), e.span) from None

    def _split(self, e: BundleExpr, what: str) -> bc.SplitBundle:
        B = self.bundle(e)
        if not isinstance(B, bc.SplitBundle):
            raise DslError("evaluation", f"{what} needs a split bundle, got a cokernel", e.span)
        return B

    def _bundle(self, e: BundleExpr) -> bc.Bundle:
        n = self.n
        if isinstance(e, Line):
            k = 1 if e.power is None else e.power
            if k < 0:
                raise DslError("evaluation", f"negative multiplicity {k}", e.span)
            return bc.SplitBundle(n, (e.twist,) * k)
        if isinstance(e, Name):
            return self.env[e.ident]
        if isinstance(e, Sum):
            out = self.bundle(e.terms[0])
            for t in e.terms[1:]:
                out = bc.direct_sum(out, self.bundle(t))
            return out
        if isinstance(e, Sym):
            if e.k < 0:
                raise DslError("evaluation", f"negative symmetric power {e.k}", e.span)
            return bc.sym_power(self._split(e.arg, "sym"), e.k)
        if isinstance(e, Wedge):
            B = self._split(e.arg, "wedge")
            if not 0 <= e.q <= B.rank:
                raise DslError("evaluation", f"wedge({e.q}, ...) of a rank {B.rank} bundle", e.span)
            return bc.wedge_power(B, e.q)
        if isinstance(e, Twist):
            return bc.twist(self.bundle(e.arg), e.t)
        if isinstance(e, CokerExpr):
            a, b = self.bundle(e.sub), self.bundle(e.target)
            if bc.rank(b) <= bc.rank(a):
                raise DslError("evaluation",
                               f"coker needs rank(target) > rank(source), got {bc.rank(a)} -> {bc.rank(b)}",
                               e.span)
            return bc.Coker(a, b)
        raise TypeError(e)

    def query(self, q: Query) -> QueryResult:
        label = format_query(q)
        a = q.args
        if q.name == "stable":
            n, alpha, gamma = a
            try:
                rep = bc.is_stable(n, alpha, gamma)
            except ValueError as exc:
                raise DslError("evaluation", str(exc), q.span) from None
            verdict = ("stable: " if rep.stable else "unstable: ") + rep.reason
            lines = [f"{label} = {verdict}"]
            for qq, f, _, _ in rep.witnesses:
                lines.append(f"  q={qq}: q((2n-q-1)alpha-gamma) = {f}")
            lines.append(f"  h0(F) = {rep.h0_F}")
            return QueryResult(label, {"query": label, "verdict": verdict, **rep.to_dict()}, "\n".join(lines))
        E = self.bundle(a[0])
        if q.name == "chern":
            c = bc.chern(E)
            return QueryResult(label, {"query": label, "chern": list(c.coeffs)}, f"{label} = {c}")
        if q.name == "maxtwist":
            if not isinstance(E, bc.SplitBundle):
                raise DslError("evaluation", "maxtwist needs a split bundle", a[0].span)
            if not E.rank:
                raise DslError("evaluation", "maxtwist of the zero bundle", a[0].span)
            t = bc.max_embedding_twist(E)
            return QueryResult(label, {"query": label, "maxtwist": t}, f"{label} = {t}")
        if q.name == "chi":
            v = bc.chi(bc.twist(E, a[1]))
            return QueryResult(label, {"query": label, "chi": v}, f"{label} = {v}")
        lo, hi = a[1], a[2]
        if lo > hi:
            raise DslError("evaluation", f"empty twist range {lo}..{hi}", q.span)
        try:
            rows = bc.cohomology_table(E, range(lo, hi + 1))
        except ValueError as exc:
            raise DslError("evaluation", str(exc), q.span) from None
        return QueryResult(label, {"query": label, "table": [{"t": t, **P.to_dict()} for t, P in rows]},
                           format_table(label, rows))

    def run(self, script: Script) -> list[QueryResult]:
        out = []
        for st in script.statements:
            if isinstance(st, LetInt):
                self.n = st.value
            elif isinstance(st, LetBundle):
                self.env[st.name] = self.bundle(st.expr)
            elif isinstance(st, Query):
                out.append(self.query(st))
        return out


def format_table(label: str, rows) -> str:
    n = rows[0][1].n
    head = ["t"] + [f"h{i}" for i in range(n + 1)] + ["chi"]
    body = [[str(t)] + [str(x) for x in P.h] + [str(P.chi)] for t, P in rows]
    widths = [max(len(r[c]) for r in [head] + body) for c in range(len(head))]
    fmt = lambda r: "  " + " ".join(s.rjust(w) for s, w in zip(r, widths))  # noqa: E731
    return "\n".join([f"{label}:", fmt(head)] + [fmt(r) for r in body])


def evaluate(script: Script) -> list[QueryResult]:
    return _Evaluator().run(script)


def run_text(text: str, as_json: bool = False) -> str:
    results = evaluate(parse(text))
    if as_json:
        return json.dumps([r.data for r in results], indent=2) + "\n"
    return "".join(r.text + "\n" for r in results)
