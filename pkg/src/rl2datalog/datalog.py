"""Datalog program representation, safety, stratification and ``.asp`` output."""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

import networkx as nx

from .errors import ParseError, StratificationError, UnsafeRuleError
from .terms import GroundTerm, SymbolTable, term_from_asp, term_to_asp

_VAR_NAME = re.compile(r"[A-Z][A-Za-z0-9_]*\Z")

INCONSISTENT = "inconsistent"
SAME_AS = "sameAs"
SAME_COMP = "sameComp"
NO_START = "noStart"
TOP_PRED = "top"
EQUALITY_PREDICATES = frozenset({SAME_AS, SAME_COMP, NO_START})


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __post_init__(self) -> None:
        if not _VAR_NAME.match(self.name):
            raise ValueError(f"invalid variable name {self.name!r}")

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Const:
    value: GroundTerm

    def __str__(self) -> str:
        return term_to_asp(self.value)


Term = Union[Var, Const]


@dataclass(frozen=True, slots=True)
class Atom:
    pred: str
    args: tuple[Term, ...] = ()

    def variables(self) -> Iterator[Var]:
        return (a for a in self.args if isinstance(a, Var))

    def is_ground(self) -> bool:
        return all(isinstance(a, Const) for a in self.args)

    def __str__(self) -> str:
        if not self.args:
            return self.pred
        return f"{self.pred}({','.join(map(str, self.args))})"


@dataclass(frozen=True, slots=True)
class Literal:
    """A classical literal: an atom, possibly under ``not``."""

    atom: Atom
    negated: bool = False

    def variables(self) -> Iterator[Var]:
        return self.atom.variables()

    def __str__(self) -> str:
        return ("not " if self.negated else "") + str(self.atom)


BUILTIN_OPS = ("<", "<=", ">", ">=", "=", "!=")


@dataclass(frozen=True, slots=True)
class Builtin:
    op: str
    left: Term
    right: Term

    def __post_init__(self) -> None:
        if self.op not in BUILTIN_OPS:
            raise ValueError(f"unknown built-in {self.op!r}")

    def variables(self) -> Iterator[Var]:
        return (a for a in (self.left, self.right) if isinstance(a, Var))

    def __str__(self) -> str:
        return f"{self.left} {self.op} {self.right}"


BodyLiteral = Union[Literal, Builtin]


def pos(pred: str, *args: Term) -> Literal:
    return Literal(Atom(pred, tuple(args)))


def neg(pred: str, *args: Term) -> Literal:
    return Literal(Atom(pred, tuple(args)), negated=True)


@dataclass(frozen=True, slots=True)
class Rule:
    head: Atom
    body: tuple[BodyLiteral, ...] = ()

    def positive_atoms(self) -> Iterator[Atom]:
        return (b.atom for b in self.body if isinstance(b, Literal) and not b.negated)

    def variables(self) -> set[Var]:
        out = set(self.head.variables())
        for b in self.body:
            out.update(b.variables())
        return out

    def __str__(self) -> str:
        if not self.body:
            return f"{self.head}."
        return f"{self.head} :- {', '.join(map(str, self.body))}."


@dataclass
class Program:
    rules: list[Rule] = field(default_factory=list)
    facts: list[Atom] = field(default_factory=list)

    def __add__(self, other: "Program") -> "Program":
        return Program(self.rules + other.rules, self.facts + other.facts)

    def predicates(self) -> set[str]:
        out = {f.pred for f in self.facts}
        for r in self.rules:
            out.add(r.head.pred)
            out.update(b.atom.pred for b in r.body if isinstance(b, Literal))
        return out


def check_safety(rule: Rule) -> bool:
    bound = {v for a in rule.positive_atoms() for v in a.variables()}
    return rule.variables() <= bound


# -- stratification ------------------------------------------------------------


def dependency_graph(rules: Iterable[Rule], extra: Iterable[str] = ()) -> nx.DiGraph:
    """Edge ``q -> p`` when ``p`` depends on ``q``; ``negative`` marks ``not q``."""
    g = nx.DiGraph()
    g.add_nodes_from(extra)
    for r in rules:
        g.add_node(r.head.pred)
        for b in r.body:
            if isinstance(b, Literal):
                q, p = b.atom.pred, r.head.pred
                if g.has_edge(q, p):
                    g[q][p]["negative"] |= b.negated
                else:
                    g.add_edge(q, p, negative=b.negated)
    return g


def stratify(program: Program | Iterable[Rule]) -> list[set[str]]:
    """Group predicates into strata; lower strata must be evaluated first.

    Each predicate sits at the least level compatible with its dependencies
    (one higher than anything it uses under ``not``). Raises
    ``StratificationError`` naming the predicates of a cycle through negation.
    """
    if isinstance(program, Program):
        rules, extra = program.rules, [f.pred for f in program.facts]
    else:
        rules, extra = list(program), []
    g = dependency_graph(rules, extra)
    cond = nx.condensation(g)
    members = cond.graph["mapping"]
    for u, v, data in g.edges(data=True):
        if data["negative"] and members[u] == members[v]:
            raise StratificationError(cond.nodes[members[u]]["members"])
    level: dict[int, int] = {}
    for c in nx.topological_sort(cond):
        lv = 0
        for pred in cond.nodes[c]["members"]:
            for q, _, data in g.in_edges(pred, data=True):
                cq = members[q]
                if cq != c:
                    lv = max(lv, level[cq] + (1 if data["negative"] else 0))
        level[c] = lv
    strata: dict[int, set[str]] = defaultdict(set)
    for c, lv in level.items():
        strata[lv] |= cond.nodes[c]["members"]
    return [strata[k] for k in sorted(strata)]


# -- serialization -----------------------------------------------------------------


def serialize_program(program: Program, symbols: SymbolTable | None = None,
                      prefixes: dict[str, str] | None = None,
                      title: str | None = None) -> str:
    for r in program.rules:
        if not check_safety(r):
            raise UnsafeRuleError(f"refusing to serialize unsafe rule: {r}")
    out: list[str] = []
    if title:
        out.append(f"% {title}")
    if prefixes:
        out.append("% prefixes:")
        for pfx, iri in sorted(prefixes.items()):
            out.append(f"%   {pfx} <{iri}>")
    if symbols is not None:
        used = program.predicates()
        entries = [(n, iri) for iri, n in symbols.forward.items() if n in used]
        if entries:
            out.append("% symbols:")
            for name, iri in entries:
                out.append(f"%   {name} <{iri}>")
    out.extend(str(r) for r in program.rules)
    out.extend(f"{f}." for f in program.facts)
    return "\n".join(out) + "\n"


# -- parsing ---------------------------------------------------------------------------

_ASP_TOKEN = re.compile(r"""
    (?P<ws>\s+|%[^\n]*)
  | (?P<str>"(?:[^"\\]|\\.)*")
  | (?P<int>-?\d+)
  | (?P<if>:-)
  | (?P<op><=|>=|!=|<|>|=)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[(),.])
""", re.VERBOSE)


def _asp_tokens(text: str) -> list[tuple[str, str, int]]:
    out, pos, line = [], 0, 1
    while pos < len(text):
        m = _ASP_TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, 0)
        if m.lastgroup != "ws":
            out.append((m.lastgroup, m.group(), line))
        line += m.group().count("\n")
        pos = m.end()
    return out


def parse_program(text: str) -> Program:
    """Read back the rule language written by :func:`serialize_program`."""
    toks = _asp_tokens(text)
    i = 0

    def peek():
        return toks[i] if i < len(toks) else ("eof", "", toks[-1][2] if toks else 1)

    def take(text_=None):
        nonlocal i
        tok = peek()
        if tok[0] == "eof" or (text_ is not None and tok[1] != text_):
            raise ParseError(f"expected {text_ or 'token'}, found {tok[1] or 'end of input'!r}",
                             tok[2], 0)
        i += 1
        return tok

    def term():
        kind, t, line = take()
        if kind in ("str", "int"):
            return Const(term_from_asp(t))
        if kind == "name" and t[0].isupper():
            return Var(t)
        raise ParseError(f"expected a term, found {t!r}", line, 0)

    def atom():
        kind, name, line = take()
        if kind != "name" or name[0].isupper():
            raise ParseError(f"expected a predicate, found {name!r}", line, 0)
        args = []
        if peek()[1] == "(":
            take("(")
            args.append(term())
            while peek()[1] == ",":
                take(",")
                args.append(term())
            take(")")
        return Atom(name, tuple(args))

    def body_literal():
        kind, t, _ = peek()
        if kind == "name" and t == "not":
            take()
            return Literal(atom(), negated=True)
        if kind in ("str", "int") or (kind == "name" and t[0].isupper()):
            left = term()
            op = take()
            if op[0] != "op":
                raise ParseError(f"expected a comparison, found {op[1]!r}", op[2], 0)
            return Builtin(op[1], left, term())
        return Literal(atom())

    rules, facts = [], []
    while i < len(toks):
        head = atom()
        if peek()[0] == "if":
            take()
            body = [body_literal()]
            while peek()[1] == ",":
                take(",")
                body.append(body_literal())
            take(".")
            rules.append(Rule(head, tuple(body)))
        else:
            take(".")
            if not head.is_ground():
                raise ParseError(f"non-ground fact {head}", toks[i - 1][2], 0)
            facts.append(head)
    return Program(rules, facts)
