"""ABox loading from Turtle / N-Triples and the format dispatch for data files."""

from __future__ import annotations

import logging

import rdflib
from rdflib.term import BNode, URIRef
from rdflib.term import Literal as RdfLiteral

from .dl import ABox
from .errors import ParseError
from .owl import OWL, RDF, RDFS, parse_functional
from .terms import INTEGER, STRING, XSD, GroundTerm, Iri, Literal

log = logging.getLogger(__name__)

RDF_TYPE = RDF + "type"
OWL_SAME_AS = OWL + "sameAs"
_SCHEMA_NS = (OWL, RDF, RDFS)

FORMATS = {"turtle": "turtle", "ntriples": "nt"}


def _node(term, scope: str) -> Iri:
    if isinstance(term, BNode):
        return Iri(f"urn:skolem:{scope}{term}")
    return Iri(str(term))


def _literal(lit: RdfLiteral) -> Literal:
    if lit.language is not None:
        raise ValueError("language-tagged literal")
    dt = str(lit.datatype) if lit.datatype is not None else XSD + "string"
    if dt == XSD + "string":
        return Literal(str(lit), STRING)
    if dt == XSD + "integer":
        return Literal(str(lit), INTEGER)
    raise ParseError(f"unsupported literal datatype <{dt}> in {lit.n3()}")


def abox_from_graph(graph: rdflib.Graph, scope: str = "") -> ABox:
    abox = ABox()
    skipped = 0
    for s, p, o in graph:
        pred = str(p)
        if isinstance(s, RdfLiteral):
            skipped += 1
            continue
        subj: GroundTerm = _node(s, scope)
        if pred == RDF_TYPE:
            if not isinstance(o, (URIRef,)) or str(o).startswith(_SCHEMA_NS):
                skipped += 1
                continue
            abox.concept_asserts.add((str(o), subj))
        elif pred == OWL_SAME_AS:
            if isinstance(o, RdfLiteral):
                skipped += 1
                continue
            abox.add_same_as(subj, _node(o, scope))
        elif pred.startswith(_SCHEMA_NS):
            skipped += 1
        elif isinstance(o, RdfLiteral):
            try:
                abox.role_asserts.add((pred, subj, _literal(o)))
            except ValueError:
                skipped += 1
        else:
            abox.role_asserts.add((pred, subj, _node(o, scope)))
    if skipped:
        log.warning("ignored %d triple(s) outside the supported ABox shapes", skipped)
    return abox


def parse_abox(text: str, format: str = "turtle", source: str | None = None,
               bnode_scope: str = "") -> ABox:
    """Parse assertions from ``functional``, ``turtle`` or ``ntriples`` text."""
    if format == "functional":
        kb = parse_functional(text, source, bnode_scope)
        if len(kb.tbox):
            log.warning("%s: ignoring %d TBox axiom(s) in a data file", source or "<abox>", len(kb.tbox))
        return kb.abox
    if format not in FORMATS:
        raise ValueError(f"unsupported ABox format: {format}")
    graph = rdflib.Graph()
    try:
        graph.parse(data=text, format=FORMATS[format])
    except Exception as exc:  # rdflib raises assorted parser-specific errors
        raise ParseError(f"malformed {format} input{' in ' + source if source else ''}: {exc}") from exc
    return abox_from_graph(graph, bnode_scope)
