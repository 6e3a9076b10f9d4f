"""OWL 2 functional-style syntax reader (RL subset) and the RL profile check."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterator

from .dl import (
    ABox, All, And, AtLeast, AtMost, BOTTOM, CI, Concept, Not, Or, RI, Role, Some, TBox,
    TOP, Atomic, Bottom, Top, Trans,
)
from .errors import ParseError, UnsupportedConstructError
from .terms import INTEGER, STRING, XSD, Iri, Literal

OWL = "http://www.w3.org/2002/07/owl#"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"

DEFAULT_PREFIXES = {
    "owl:": OWL,
    "rdf:": RDF,
    "rdfs:": RDFS,
    "xsd:": XSD,
}

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<iri><[^>\s]*>)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<dt>\^\^)
  | (?P<lang>@[A-Za-z]+(?:-[A-Za-z0-9]+)*)
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<eq>=)
  | (?P<bnode>_:[^\s()"<>=]+)
  | (?P<pname>(?:[A-Za-z][\w.\-]*)?:[^\s()"<>=]*)
  | (?P<int>[+-]?\d+)
  | (?P<kw>[A-Za-z][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


@dataclass
class Node:
    head: str
    args: list
    line: int
    col: int


def tokenize(text: str, source: str | None = None) -> Iterator[Token]:
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1, source)
        kind = m.lastgroup
        tok_text = m.group()
        if kind != "ws":
            yield Token(kind, tok_text, line, pos - line_start + 1)
        nl = tok_text.count("\n")
        if nl:
            line += nl
            line_start = pos + tok_text.rfind("\n") + 1
        pos = m.end()


def _read_tree(tokens: list[Token], source: str | None) -> list:
    """Group tokens into ``Node(keyword, args)`` by parentheses."""
    stack: list[Node] = [Node("<root>", [], 1, 1)]
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok.kind == "kw" and i + 1 < len(tokens) and tokens[i + 1].kind == "lparen":
            stack.append(Node(tok.text, [], tok.line, tok.col))
            i += 2
            continue
        if tok.kind == "lparen":
            raise ParseError("'(' without a construct name", tok.line, tok.col, source)
        if tok.kind == "rparen":
            if len(stack) == 1:
                raise ParseError("unbalanced ')'", tok.line, tok.col, source)
            node = stack.pop()
            stack[-1].args.append(node)
        else:
            stack[-1].args.append(tok)
        i += 1
    if len(stack) != 1:
        node = stack[-1]
        raise ParseError(f"unclosed {node.head}(", node.line, node.col, source)
    return stack[0].args


@dataclass
class ParsedKb:
    tbox: TBox = field(default_factory=TBox)
    abox: ABox = field(default_factory=ABox)
    prefixes: dict[str, str] = field(default_factory=dict)


# axioms that carry no logical content for the rewriting
_IGNORED = {
    "Declaration", "AnnotationAssertion", "SubAnnotationPropertyOf",
    "AnnotationPropertyDomain", "AnnotationPropertyRange", "Annotation", "Import",
}


class FunctionalParser:
    def __init__(self, source: str | None = None, bnode_scope: str = "") -> None:
        self.source = source
        self.bnode_scope = bnode_scope
        self.kb = ParsedKb(prefixes=dict(DEFAULT_PREFIXES))

    # -- entry --------------------------------------------------------------

    def parse(self, text: str) -> ParsedKb:
        tree = _read_tree(list(tokenize(text, self.source)), self.source)
        for item in tree:
            if not isinstance(item, Node):
                self._fail(item, f"unexpected token {item.text!r} at top level")
            if item.head == "Prefix":
                self._prefix(item)
            elif item.head == "Ontology":
                for sub in item.args:
                    if isinstance(sub, Node):
                        self._axiom(sub)
            else:
                self._axiom(item)
        return self.kb

    # -- helpers ------------------------------------------------------------

    def _fail(self, at, message: str):
        raise ParseError(message, at.line, at.col, self.source)

    def _prefix(self, node: Node) -> None:
        args = node.args
        if len(args) != 3 or args[0].kind != "pname" or args[1].kind != "eq" or args[2].kind != "iri":
            self._fail(node, "malformed Prefix declaration")
        self.kb.prefixes[args[0].text] = args[2].text[1:-1]

    def expand(self, tok: Token) -> str:
        if tok.kind == "iri":
            return tok.text[1:-1]
        if tok.kind == "pname":
            pfx, _, local = tok.text.partition(":")
            base = self.kb.prefixes.get(pfx + ":")
            if base is None:
                self._fail(tok, f"undeclared prefix {pfx + ':'!r}")
            return base + local
        self._fail(tok, f"expected an IRI, found {tok.text!r}")

    def _iri_arg(self, item) -> str:
        if isinstance(item, Node):
            self._fail(item, f"expected an IRI, found {item.head}(...)")
        return self.expand(item)

    def _individual(self, item) -> Iri:
        if isinstance(item, Token) and item.kind == "bnode":
            return Iri(f"urn:skolem:{self.bnode_scope}{item.text[2:]}")
        return Iri(self._iri_arg(item))

    # -- expressions --------------------------------------------------------

    def role(self, item) -> Role:
        if isinstance(item, Node):
            if item.head != "ObjectInverseOf" or len(item.args) != 1:
                raise UnsupportedConstructError(item.head)
            return self.role(item.args[0]).inverse()
        return Role(self._iri_arg(item))

    def concept(self, item) -> Concept:
        if isinstance(item, Token):
            iri = self._iri_arg(item)
            if iri == OWL + "Thing":
                return TOP
            if iri == OWL + "Nothing":
                return BOTTOM
            return Atomic(iri)
        h, a = item.head, item.args
        if h == "ObjectIntersectionOf":
            return And(tuple(self.concept(x) for x in self._at_least(item, 2)))
        if h == "ObjectUnionOf":
            return Or(tuple(self.concept(x) for x in self._at_least(item, 2)))
        if h == "ObjectComplementOf":
            return Not(self.concept(self._exactly(item, 1)[0]))
        if h == "ObjectSomeValuesFrom":
            r, c = self._exactly(item, 2)
            return Some(self.role(r), self.concept(c))
        if h == "ObjectAllValuesFrom":
            r, c = self._exactly(item, 2)
            return All(self.role(r), self.concept(c))
        if h in ("ObjectMinCardinality", "ObjectMaxCardinality"):
            if len(a) not in (2, 3) or not isinstance(a[0], Token) or a[0].kind != "int":
                self._fail(item, f"malformed {h}")
            n = int(a[0].text)
            filler = self.concept(a[2]) if len(a) == 3 else TOP
            cls = AtLeast if h == "ObjectMinCardinality" else AtMost
            return cls(n, self.role(a[1]), filler)
        raise UnsupportedConstructError(h)

    def _exactly(self, node: Node, n: int) -> list:
        if len(node.args) != n:
            self._fail(node, f"{node.head} expects {n} argument(s), got {len(node.args)}")
        return node.args

    def _at_least(self, node: Node, n: int) -> list:
        if len(node.args) < n:
            self._fail(node, f"{node.head} expects at least {n} arguments")
        return node.args

    def literal(self, items: list) -> Literal:
        tok = items[0]
        if tok.kind == "int":
            return Literal(tok.text, INTEGER)
        if tok.kind != "string":
            self._fail(tok, f"expected a literal, found {tok.text!r}")
        lexical = re.sub(r"\\(.)", r"\1", tok.text[1:-1])
        if len(items) == 1:
            return Literal(lexical, STRING)
        if items[1].kind == "dt" and len(items) == 3:
            dt = self.expand(items[2])
            if dt == XSD + "string":
                return Literal(lexical, STRING)
            if dt == XSD + "integer":
                try:
                    return Literal(lexical, INTEGER)
                except ValueError:
                    self._fail(tok, f"invalid xsd:integer {lexical!r}")
            self._fail(items[2], f"unsupported literal datatype <{dt}>")
        if items[1].kind == "lang":
            self._fail(items[1], "language-tagged literals are not supported")
        self._fail(tok, "malformed literal")

    # -- axioms -------------------------------------------------------------

    def _axiom(self, node: Node) -> None:
        h, a = node.head, node.args
        tbox, abox = self.kb.tbox, self.kb.abox
        # leading axiom annotations are not part of the logical content
        a = [x for x in a if not (isinstance(x, Node) and x.head == "Annotation")]
        if h in _IGNORED:
            return
        if h == "SubClassOf":
            if len(a) != 2:
                self._fail(node, "SubClassOf expects 2 arguments")
            tbox.add(CI(self.concept(a[0]), self.concept(a[1])))
        elif h == "EquivalentClasses":
            cs = [self.concept(x) for x in a]
            for i, c in enumerate(cs):
                for d in cs[i + 1:]:
                    tbox.add(CI(c, d))
                    tbox.add(CI(d, c))
        elif h == "DisjointClasses":
            cs = [self.concept(x) for x in a]
            for i, c in enumerate(cs):
                for d in cs[i + 1:]:
                    tbox.add(CI(And((c, d)), BOTTOM))
        elif h == "SubObjectPropertyOf":
            if len(a) != 2:
                self._fail(node, "SubObjectPropertyOf expects 2 arguments")
            if isinstance(a[0], Node) and a[0].head == "ObjectPropertyChain":
                raise UnsupportedConstructError("ObjectPropertyChain")
            tbox.add(RI(self.role(a[0]), self.role(a[1])))
        elif h == "EquivalentObjectProperties":
            rs = [self.role(x) for x in a]
            for i, r in enumerate(rs):
                for s in rs[i + 1:]:
                    tbox.add(RI(r, s))
                    tbox.add(RI(s, r))
        elif h == "InverseObjectProperties":
            r, s = (self.role(x) for x in a)
            tbox.add(RI(r, s.inverse()))
            tbox.add(RI(s, r.inverse()))
        elif h == "SymmetricObjectProperty":
            r = self.role(a[0])
            tbox.add(RI(r, r.inverse()))
        elif h == "TransitiveObjectProperty":
            tbox.add(Trans(self.role(a[0])))
        elif h == "ObjectPropertyDomain":
            tbox.add(CI(Some(self.role(a[0]), TOP), self.concept(a[1])))
        elif h == "ObjectPropertyRange":
            tbox.add(CI(TOP, All(self.role(a[0]), self.concept(a[1]))))
        elif h == "ClassAssertion":
            c = self.concept(a[0])
            if not isinstance(c, Atomic):
                if isinstance(c, Top):
                    return
                raise UnsupportedConstructError("ClassAssertion with a complex class expression")
            abox.concept_asserts.add((c.name, self._individual(a[1])))
        elif h == "ObjectPropertyAssertion":
            r = self.role(a[0])
            s, o = self._individual(a[1]), self._individual(a[2])
            if r.inverted:
                s, o = o, s
            abox.role_asserts.add((r.name, s, o))
        elif h == "DataPropertyAssertion":
            abox.role_asserts.add((self._iri_arg(a[0]), self._individual(a[1]), self.literal(a[2:])))
        elif h == "SameIndividual":
            inds = [self._individual(x) for x in a]
            for x, y in zip(inds, inds[1:]):
                abox.add_same_as(x, y)
        else:
            raise UnsupportedConstructError(h)


def parse_functional(text: str, source: str | None = None, bnode_scope: str = "") -> ParsedKb:
    return FunctionalParser(source, bnode_scope).parse(text)


def parse_tbox(text: str, format: str = "functional", source: str | None = None) -> ParsedKb:
    if format != "functional":
        raise ValueError(f"unsupported TBox format: {format}")
    return parse_functional(text, source)


# -- pretty printing ---------------------------------------------------------


def _iri(name: str) -> str:
    return f"<{name}>"


def role_to_functional(r: Role) -> str:
    return f"ObjectInverseOf({_iri(r.name)})" if r.inverted else _iri(r.name)


def concept_to_functional(c: Concept) -> str:
    f, rf = concept_to_functional, role_to_functional
    if isinstance(c, Top):
        return _iri(OWL + "Thing")
    if isinstance(c, Bottom):
        return _iri(OWL + "Nothing")
    if isinstance(c, Atomic):
        return _iri(c.name)
    if isinstance(c, Not):
        return f"ObjectComplementOf({f(c.arg)})"
    if isinstance(c, And):
        return "ObjectIntersectionOf(" + " ".join(map(f, c.args)) + ")"
    if isinstance(c, Or):
        return "ObjectUnionOf(" + " ".join(map(f, c.args)) + ")"
    if isinstance(c, Some):
        return f"ObjectSomeValuesFrom({rf(c.role)} {f(c.filler)})"
    if isinstance(c, All):
        return f"ObjectAllValuesFrom({rf(c.role)} {f(c.filler)})"
    if isinstance(c, AtLeast):
        return f"ObjectMinCardinality({c.n} {rf(c.role)} {f(c.filler)})"
    if isinstance(c, AtMost):
        return f"ObjectMaxCardinality({c.n} {rf(c.role)} {f(c.filler)})"
    raise TypeError(c)


def tbox_to_functional(tbox: TBox) -> str:
    lines = ["Ontology("]
    for ci in tbox.cis:
        lines.append(f"SubClassOf({concept_to_functional(ci.sub)} {concept_to_functional(ci.sup)})")
    for ri in tbox.ris:
        lines.append(f"SubObjectPropertyOf({role_to_functional(ri.sub)} {role_to_functional(ri.sup)})")
    for t in tbox.trans:
        lines.append(f"TransitiveObjectProperty({role_to_functional(t.role)})")
    lines.append(")")
    return "\n".join(lines) + "\n"


# -- RL profile ----------------------------------------------------------------


class ViolationReason(enum.Enum):
    NOT_SUBCONCEPT = "not-subconcept-expression"
    NOT_SUPERCONCEPT = "not-superconcept-expression"
    CARDINALITY = "cardinality>1"
    UNSUPPORTED = "unsupported-construct"


@dataclass(frozen=True)
class RlViolation:
    axiom: CI
    reason: ViolationReason
    offending: Concept

    def __str__(self) -> str:
        return f"{self.axiom}: {self.reason.value} at {self.offending}"


def _cardinality_problem(c: Concept) -> ViolationReason | None:
    if isinstance(c, (AtLeast, AtMost)) and c.n != 1:
        return ViolationReason.UNSUPPORTED if c.n == 0 else ViolationReason.CARDINALITY
    return None


def subconcept_violation(c: Concept) -> tuple[ViolationReason, Concept] | None:
    if isinstance(c, (Top, Bottom, Atomic)):
        return None
    if (reason := _cardinality_problem(c)) is not None:
        return reason, c
    if isinstance(c, (And, Or)):
        for a in c.args:
            if (v := subconcept_violation(a)) is not None:
                return v
        return None
    if isinstance(c, (Some, AtLeast)):
        return subconcept_violation(c.filler)
    return ViolationReason.NOT_SUBCONCEPT, c


def superconcept_violation(c: Concept) -> tuple[ViolationReason, Concept] | None:
    if isinstance(c, (Top, Bottom, Atomic)):
        return None
    if (reason := _cardinality_problem(c)) is not None:
        return reason, c
    if isinstance(c, And):
        for a in c.args:
            if (v := superconcept_violation(a)) is not None:
                return v
        return None
    if isinstance(c, All):
        return superconcept_violation(c.filler)
    # the argument of ¬ and the filler of ≤1 occur negatively
    if isinstance(c, Not):
        return subconcept_violation(c.arg)
    if isinstance(c, AtMost):
        return subconcept_violation(c.filler)
    return ViolationReason.NOT_SUPERCONCEPT, c


def check_rl_profile(tbox: TBox) -> list[RlViolation]:
    out = []
    for ci in tbox.cis:
        for v in (subconcept_violation(ci.sub), superconcept_violation(ci.sup)):
            if v is not None:
                out.append(RlViolation(ci, *v))
    return out
