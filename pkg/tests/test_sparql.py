import pytest

from rl2datalog.errors import UnsafeRuleError, UnsupportedConstructError, UnsupportedSparqlFeature
from rl2datalog.sparql import BgpQuery, TriplePattern, Variable, parse_sparql_bgp, translate_bgp
from rl2datalog.terms import INTEGER, Iri, Literal, SymbolTable

EX = "http://ex.org/"
PFX = f"PREFIX : <{EX}>\nPREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>\n"
TYPE = Iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type")


def test_minimal_query():
    (q,) = parse_sparql_bgp(PFX + "SELECT ?x WHERE { ?x rdf:type :DogOwner . }")
    assert q.select_vars == ["x"]
    assert q.patterns == [TriplePattern(Variable("x"), TYPE, Iri(EX + "DogOwner"))]


def test_two_patterns_and_translation():
    (q,) = parse_sparql_bgp(PFX + "SELECT ?x ?y WHERE { ?x :hasPet ?y . ?y rdf:type :Dog . }")
    assert len(q.patterns) == 2
    assert str(translate_bgp(q, 1)) == "ans_1(X,Y) :- hasPet(X,Y), dog(Y)."


def test_constant_object():
    (q,) = parse_sparql_bgp(PFX + "SELECT ?x WHERE { ?x :linked :Rome . }")
    assert str(translate_bgp(q, 1)) == f'ans_1(X) :- linked(X,"{EX}Rome").'


def test_multiple_queries_and_shorthand():
    qs = parse_sparql_bgp(PFX + """
        SELECT DISTINCT ?x WHERE { ?x a :A ; :p ?y , ?z . }
        # a comment
        SELECT * { ?s :q 5 . ?s :name "n" }
    """)
    assert len(qs) == 2
    assert len(qs[0].patterns) == 3
    assert qs[1].select_vars == ["s"]
    assert qs[1].patterns[0].o == Literal("5", INTEGER)
    assert qs[1].patterns[1].o == Literal("n")


@pytest.mark.parametrize("feature,text", [
    ("FILTER", "SELECT ?x WHERE { ?x :p ?y . FILTER(?y > 1) }"),
    ("OPTIONAL", "SELECT ?x WHERE { ?x :p ?y OPTIONAL { ?y :q ?z } }"),
    ("UNION", "SELECT ?x WHERE { { ?x :p ?y } UNION { ?x :q ?y } }"),
    ("LIMIT", "SELECT ?x WHERE { ?x :p ?y } LIMIT 3"),
    ("ASK", "ASK { ?x :p ?y }"),
])
def test_unsupported_features(feature, text):
    with pytest.raises(UnsupportedSparqlFeature):
        parse_sparql_bgp(PFX + text)


def test_filter_message():
    with pytest.raises(UnsupportedSparqlFeature, match="unsupported SPARQL feature: FILTER"):
        parse_sparql_bgp(PFX + "SELECT ?x WHERE { ?x :p ?y . FILTER(?y > 1) }")


def test_property_path_rejected():
    with pytest.raises(UnsupportedSparqlFeature):
        parse_sparql_bgp(PFX + "SELECT ?x WHERE { ?x :p/:q ?y }")


def test_variable_predicate_is_meta_reasoning():
    with pytest.raises(UnsupportedConstructError, match="meta-reasoning unsupported"):
        parse_sparql_bgp(PFX + "SELECT ?x WHERE { ?x ?p ?y }")


def test_zero_select_vars_rejected():
    q = BgpQuery([], [TriplePattern(Variable("x"), Iri(EX + "p"), Variable("y"))])
    with pytest.raises(UnsupportedSparqlFeature):
        translate_bgp(q, 1)


def test_unsafe_select_var():
    (q,) = parse_sparql_bgp(PFX + "SELECT ?z WHERE { ?x :p ?y }")
    with pytest.raises(UnsafeRuleError):
        translate_bgp(q, 1)


def test_blank_nodes_become_variables():
    (q,) = parse_sparql_bgp(PFX + "SELECT ?x WHERE { ?x :p _:b . _:b a :C }")
    rule = translate_bgp(q, 1)
    assert rule.body[0].atom.args[1] == rule.body[1].atom.args[0]


def test_variable_multiplicity_preserved():
    (q,) = parse_sparql_bgp(PFX + "SELECT ?x WHERE { ?x :p ?y . ?y :p ?x . ?x a :C }")
    rule = translate_bgp(q, 2)
    pattern_vars = [v.name for t in q.patterns for v in (t.s, t.o) if isinstance(v, Variable)]
    body_vars = [a.name for b in rule.body for a in b.atom.args if hasattr(a, "name")]
    assert sorted(pattern_vars) == sorted(v.lower() for v in body_vars)


def test_symbols_are_shared():
    t = SymbolTable()
    (q,) = parse_sparql_bgp(PFX + "SELECT ?x WHERE { ?x a :Dog }")
    translate_bgp(q, 1, t)
    assert t.forward[EX + "Dog"] == "dog"
