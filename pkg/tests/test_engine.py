import random

import pytest

from randomkb import random_program
from rl2datalog.datalog import Atom, Builtin, Const, Program, Rule, Var, neg, pos
from rl2datalog.dl import ABox, AtMost, Atomic, CI, Role, TBox, TOP
from rl2datalog.engine import (
    answer_query, materialize, materialize_with_equality, naive_materialize, same_as_cliques,
)
from rl2datalog.errors import StratificationError, UnknownQueryError, UnsafeRuleError
from rl2datalog.rewrite import rewrite_knowledge_base
from rl2datalog.sameas import EqualityConfig, apply_non_una
from rl2datalog.terms import INTEGER, Iri, Literal, compare_terms

X, Y, Z = Var("X"), Var("Y"), Var("Z")


def iri(x):
    return Iri(f"http://e/{x}")


def fact(p, *xs):
    return Atom(p, tuple(Const(x) for x in xs))


TC = [Rule(Atom("tc", (X, Y)), (pos("e", X, Y),)),
      Rule(Atom("tc", (X, Z)), (pos("tc", X, Y), pos("e", Y, Z)))]


def test_transitive_closure_of_path():
    facts = [fact("e", iri(i), iri(i + 1)) for i in range(9)]
    model = materialize(Program(TC, facts))
    assert len(model.get("tc")) == 45
    assert model.stats.derived == {"tc": 45}
    assert model == naive_materialize(Program(TC, facts))


def test_stratified_negation():
    rules = [Rule(Atom("unreached", (X,)), (pos("node", X), neg("tc", Const(iri(0)), X)))] + TC
    facts = [fact("e", iri(0), iri(1)), fact("e", iri(1), iri(2))] + [fact("node", iri(i)) for i in range(4)]
    model = materialize(Program(rules, facts))
    assert model.get("unreached") == {(iri(0),), (iri(3),)}
    assert len(model.stats.iterations) == 2


def test_unstratifiable_and_unsafe_programs():
    with pytest.raises(StratificationError):
        materialize(Program([Rule(Atom("p", (X,)), (pos("q", X), neg("p", X)))]))
    with pytest.raises(UnsafeRuleError):
        materialize(Program([Rule(Atom("p", (X,)), (neg("q", X),))]))


def test_builtins_follow_compare_terms():
    vals = [iri("a"), iri("b"), Literal("3", INTEGER), Literal("20", INTEGER), Literal("x")]
    facts = [fact("v", v) for v in vals]
    for op, test in [("<", lambda c: c < 0), (">=", lambda c: c >= 0), ("!=", lambda c: c != 0)]:
        rule = Rule(Atom("r", (X, Y)), (pos("v", X), pos("v", Y), Builtin(op, X, Y)))
        got = materialize(Program([rule], facts)).get("r")
        assert got == {(a, b) for a in vals for b in vals if test(compare_terms(a, b))}


def test_constants_in_rules_and_repeated_variables():
    rules = [Rule(Atom("loop", (X,)), (pos("e", X, X),)),
             Rule(Atom("from_a", (Y,)), (pos("e", Const(iri("a")), Y),))]
    facts = [fact("e", iri("a"), iri("a")), fact("e", iri("a"), iri("b")), fact("e", iri("b"), iri("c"))]
    model = materialize(Program(rules, facts))
    assert model.get("loop") == {(iri("a"),)}
    assert model.get("from_a") == {(iri("a"),), (iri("b"),)}


def test_minimality_spot_check():
    # removing any derived fact from the model breaks closure, so nothing extra is derived
    facts = [fact("e", iri(i), iri(i + 1)) for i in range(4)]
    model = materialize(Program(TC, facts))
    expected = {(iri(i), iri(j)) for i in range(5) for j in range(i + 1, 5)}
    assert model.get("tc") == expected


@pytest.mark.parametrize("seed", range(60))
def test_semi_naive_matches_naive(seed):
    prog = random_program(random.Random(seed))
    assert materialize(prog) == naive_materialize(prog)


def _at_most_chain():
    tb = TBox()
    tb.add(CI(Atomic("http://e/A"), AtMost(1, Role("http://e/r"), TOP)))
    ab = ABox()
    ab.concept_asserts |= {("http://e/A", iri("a")), ("http://e/A", iri("b"))}
    ab.role_asserts |= {("http://e/r", iri("a"), iri("b")), ("http://e/r", iri("a"), iri("c")),
                        ("http://e/r", iri("b"), iri("d")), ("http://e/r", iri("c"), iri("e"))}
    return rewrite_knowledge_base(tb, ab)


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_merge_chain(n):
    model = materialize_with_equality(apply_non_una(_at_most_chain(), cfg=EqualityConfig(n)))
    cliques = same_as_cliques(model)
    assert cliques[iri("b")] == {iri("b"), iri("c")}
    assert cliques[iri("d")] == {iri("d"), iri("e")}
    assert iri("a") not in cliques
    # b,c merge first; only then does b's r-successor set {d, e} force d = e
    assert model.stats.merge_rounds == 2
    assert model.stats.outer_rounds == 3
    comp = model.get("sameComp")
    assert (iri("b"), iri("c")) in comp and (iri("d"), iri("e")) in comp


def test_answer_query_expand_and_errors():
    rules = [Rule(Atom("ans_1", (X,)), (pos("p", X),))]
    facts = [fact("p", iri("a")), fact("sameAs", iri("a"), iri("b")), fact("sameAs", iri("b"), iri("c"))]
    model = materialize(Program(rules, facts))
    assert answer_query(model, 1) == {(iri("a"),)}
    assert answer_query(model, 1, expand=True) == {(iri("a"),), (iri("b"),), (iri("c"),)}
    with pytest.raises(UnknownQueryError):
        answer_query(model, 2)
    assert answer_query(materialize(Program([])), 1) == set()


def test_inconsistent_flag():
    rules = [Rule(Atom("inconsistent"), (pos("a", X), pos("b", X)))]
    assert materialize(Program(rules, [fact("a", iri(1)), fact("b", iri(1))])).inconsistent
    assert not materialize(Program(rules, [fact("a", iri(1)), fact("b", iri(2))])).inconsistent


def test_stats_dict():
    d = materialize(Program(TC, [fact("e", iri(0), iri(1))])).stats.as_dict()
    assert set(d) == {"backend", "strata", "iterations", "derived", "outer_rounds", "merge_rounds", "wall_time"}
