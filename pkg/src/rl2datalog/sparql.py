"""SPARQL SELECT queries over basic graph patterns -> ``ans_<i>`` rules."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

from .datalog import SAME_AS, Atom, Const, Literal as Lit, Rule, Var
from .errors import ParseError, UnsafeRuleError, UnsupportedConstructError, UnsupportedSparqlFeature
from .owl import DEFAULT_PREFIXES, OWL, RDF
from .terms import INTEGER, STRING, XSD, Iri, Literal, SymbolTable, mangle_predicate

RDF_TYPE = RDF + "type"

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<iri><[^<>"{}|^`\\\s]*>)
  | (?P<var>[?$][A-Za-z0-9_À-￿]+)
  | (?P<string>"(?:[^"\\\n]|\\.)*"|'(?:[^'\\\n]|\\.)*')
  | (?P<dt>\^\^)
  | (?P<lang>@[A-Za-z]+(?:-[A-Za-z0-9]+)*)
  | (?P<bnode>_:[A-Za-z0-9_][\w.\-]*)
  | (?P<pname>(?:[A-Za-z][\w.\-]*)?:(?:[\w\-%]|\.(?=[\w\-%]))*)
  | (?P<int>[+-]?\d+)
  | (?P<kw>[A-Za-z_]+)
  | (?P<punct>[{}.;,()*/|^+!\[\]=<>])
    """,
    re.VERBOSE,
)

_UNSUPPORTED = {
    "OPTIONAL", "FILTER", "UNION", "MINUS", "GRAPH", "BIND", "VALUES", "SERVICE",
    "ORDER", "LIMIT", "OFFSET", "GROUP", "HAVING", "FROM", "EXISTS", "NOT",
}


@dataclass(frozen=True)
class Variable:
    name: str

    def __str__(self) -> str:
        return "?" + self.name


PatternTerm = Union[Variable, Iri, Literal]


@dataclass(frozen=True)
class TriplePattern:
    s: PatternTerm
    p: PatternTerm
    o: PatternTerm


@dataclass
class BgpQuery:
    select_vars: list[str]
    patterns: list[TriplePattern]
    prefixes: dict[str, str] = field(default_factory=dict)

    def variables(self) -> list[str]:
        out: dict[str, None] = {}
        for t in self.patterns:
            for x in (t.s, t.p, t.o):
                if isinstance(x, Variable):
                    out.setdefault(x.name)
        return list(out)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    out, pos, line, line_start = [], 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        t = m.group()
        if m.lastgroup != "ws":
            out.append(_Tok(m.lastgroup, t, line, pos - line_start + 1))
        if "\n" in t:
            line += t.count("\n")
            line_start = pos + t.rfind("\n") + 1
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str) -> None:
        self.toks = _tokenize(text)
        self.i = 0
        self.prefixes = dict(DEFAULT_PREFIXES)
        self.bnode_vars: dict[str, str] = {}

    def peek(self) -> _Tok | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self) -> _Tok:
        tok = self.peek()
        if tok is None:
            last = self.toks[-1] if self.toks else _Tok("", "", 1, 1)
            raise ParseError("unexpected end of query", last.line, last.col)
        self.i += 1
        return tok

    def fail(self, tok: _Tok, msg: str):
        raise ParseError(msg, tok.line, tok.col)

    def kw(self, tok: _Tok | None) -> str | None:
        return tok.text.upper() if tok is not None and tok.kind == "kw" else None

    def expect(self, text: str) -> _Tok:
        tok = self.next()
        if tok.text != text:
            self.fail(tok, f"expected {text!r}, found {tok.text!r}")
        return tok

    def queries(self) -> list[BgpQuery]:
        out = []
        while self.peek() is not None:
            out.append(self.query())
        return out

    def query(self) -> BgpQuery:
        while self.kw(self.peek()) in ("PREFIX", "BASE"):
            tok = self.next()
            if self.kw(tok) == "BASE":
                self.fail(tok, "BASE declarations are not supported")
            pfx, iri = self.next(), self.next()
            if pfx.kind != "pname" or not pfx.text.endswith(":") or iri.kind != "iri":
                self.fail(pfx, "malformed PREFIX declaration")
            self.prefixes[pfx.text] = iri.text[1:-1]
        tok = self.next()
        form = self.kw(tok)
        if form in ("ASK", "CONSTRUCT", "DESCRIBE"):
            raise UnsupportedSparqlFeature(form)
        if form != "SELECT":
            self.fail(tok, f"expected SELECT, found {tok.text!r}")
        if self.kw(self.peek()) in ("DISTINCT", "REDUCED"):
            self.next()
        select: list[str] = []
        star = False
        while True:
            tok = self.peek()
            if tok is None:
                break
            if tok.kind == "var":
                select.append(self.next().text[1:])
            elif tok.text == "*":
                self.next()
                star = True
            elif tok.text == "(":
                raise UnsupportedSparqlFeature("SELECT expression")
            else:
                break
        if self.kw(self.peek()) in _UNSUPPORTED:
            raise UnsupportedSparqlFeature(self.kw(self.peek()))
        if self.kw(self.peek()) == "WHERE":
            self.next()
        self.expect("{")
        patterns = self.triples()
        self.expect("}")
        nxt = self.kw(self.peek())
        if nxt in _UNSUPPORTED:
            raise UnsupportedSparqlFeature(nxt)
        q = BgpQuery(select, patterns, dict(self.prefixes))
        if star:
            q.select_vars = [v for v in q.variables() if not v.startswith("_bn_")]
        return q

    def triples(self) -> list[TriplePattern]:
        out: list[TriplePattern] = []
        while True:
            tok = self.peek()
            if tok is None or tok.text == "}":
                return out
            if self.kw(tok) in _UNSUPPORTED:
                raise UnsupportedSparqlFeature(self.kw(tok))
            if tok.text == "{":
                raise UnsupportedSparqlFeature("group graph pattern")
            subj = self.term()
            while True:
                pred = self.predicate()
                while True:
                    out.append(TriplePattern(subj, pred, self.term()))
                    if self.peek() is not None and self.peek().text == ",":
                        self.next()
                        continue
                    break
                if self.peek() is not None and self.peek().text == ";":
                    self.next()
                    nxt = self.peek()
                    if nxt is not None and nxt.text not in (".", "}"):
                        continue
                break
            tok = self.peek()
            if tok is not None and tok.text == ".":
                self.next()
            elif tok is None or tok.text != "}":
                if tok is not None and self.kw(tok) in _UNSUPPORTED:
                    raise UnsupportedSparqlFeature(self.kw(tok))
                self.fail(tok or self.toks[-1], "expected '.' or '}' after triple pattern")

    def predicate(self) -> PatternTerm:
        tok = self.peek()
        if tok is not None and tok.kind == "var":
            raise UnsupportedConstructError(
                "meta-reasoning", "meta-reasoning unsupported: variable in predicate position")
        if tok is not None and tok.kind == "kw" and tok.text == "a":
            self.next()
            p: PatternTerm = Iri(RDF_TYPE)
        else:
            p = self.term()
            if not isinstance(p, Iri):
                self.fail(tok, "predicate must be an IRI")
        nxt = self.peek()
        if nxt is not None and nxt.text in ("/", "|", "^", "*", "+", "!"):
            raise UnsupportedSparqlFeature("property path")
        return p

    def iri(self, tok: _Tok) -> Iri:
        if tok.kind == "iri":
            return Iri(tok.text[1:-1])
        pfx, _, local = tok.text.partition(":")
        base = self.prefixes.get(pfx + ":")
        if base is None:
            self.fail(tok, f"undeclared prefix {pfx + ':'!r}")
        return Iri(base + local)

    def term(self) -> PatternTerm:
        tok = self.next()
        if tok.kind == "var":
            return Variable(tok.text[1:])
        if tok.kind in ("iri", "pname"):
            return self.iri(tok)
        if tok.kind == "bnode":
            # blank nodes in patterns are non-distinguished variables
            name = self.bnode_vars.setdefault(tok.text, f"_bn_{len(self.bnode_vars)}")
            return Variable(name)
        if tok.kind == "int":
            return Literal(tok.text, INTEGER)
        if tok.kind == "string":
            lexical = re.sub(r"\\(.)", r"\1", tok.text[1:-1])
            nxt = self.peek()
            if nxt is not None and nxt.kind == "dt":
                self.next()
                dt = self.iri(self.next())
                if dt.value == XSD + "integer":
                    return Literal(lexical, INTEGER)
                if dt.value != XSD + "string":
                    self.fail(tok, f"unsupported literal datatype <{dt.value}>")
            elif nxt is not None and nxt.kind == "lang":
                self.fail(nxt, "language-tagged literals are not supported")
            return Literal(lexical, STRING)
        if tok.text == "[":
            raise UnsupportedSparqlFeature("blank node property list")
        if tok.text == "(":
            raise UnsupportedSparqlFeature("collection")
        self.fail(tok, f"unexpected {tok.text!r} in triple pattern")


def parse_sparql_bgp(text: str) -> list[BgpQuery]:
    return _Parser(text).queries()


# -- translation --------------------------------------------------------------------


def _datalog_var_names(names: list[str]) -> dict[str, str]:
    out: dict[str, str] = {}
    used: set[str] = set()
    for n in names:
        base = re.sub(r"[^A-Za-z0-9_]", "_", n)
        base = base[0].upper() + base[1:] if base[0].isalpha() else "V" + base
        cand, k = base, 1
        while cand in used:
            k += 1
            cand = f"{base}_{k}"
        used.add(cand)
        out[n] = cand
    return out


def translate_bgp(q: BgpQuery, index: int, symbols: SymbolTable | None = None) -> Rule:
    symbols = symbols if symbols is not None else SymbolTable()
    if not q.select_vars:
        raise UnsupportedSparqlFeature("query without projected variables (ASK)")
    in_patterns = set(q.variables())
    for v in q.select_vars:
        if v not in in_patterns:
            raise UnsafeRuleError(f"select variable ?{v} does not occur in the graph pattern")
    names = _datalog_var_names(q.variables())

    def arg(t: PatternTerm):
        return Var(names[t.name]) if isinstance(t, Variable) else Const(t)

    body = []
    for t in q.patterns:
        if t.p == Iri(RDF_TYPE):
            if not isinstance(t.o, Iri):
                raise UnsupportedConstructError(
                    "meta-reasoning", "meta-reasoning unsupported: class position must be an IRI")
            body.append(Lit(Atom(mangle_predicate(t.o, symbols), (arg(t.s),))))
        elif t.p == Iri(OWL + "sameAs"):
            body.append(Lit(Atom(SAME_AS, (arg(t.s), arg(t.o)))))
        else:
            body.append(Lit(Atom(mangle_predicate(t.p, symbols), (arg(t.s), arg(t.o)))))
    head = Atom(f"ans_{index}", tuple(Var(names[v]) for v in q.select_vars))
    return Rule(head, tuple(body))
