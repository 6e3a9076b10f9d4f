import random

import pytest

from rl2datalog.datalog import Atom, Builtin, Const, Program, Rule, Var, neg, pos
from rl2datalog.engine import materialize
from rl2datalog.errors import ConfigError
from rl2datalog.sameas import (
    EqualityConfig, apply_non_una, equality_rules, join_variables, relax, rewrite_rule_joins,
)
from rl2datalog.terms import Iri

X, Y, Z = Var("X"), Var("Y"), Var("Z")
DOG_OWNER = Rule(Atom("dogOwner", (X,)), (pos("hasPet", X, Y), pos("dog", Y)))


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_rule_count(n):
    rules = equality_rules(EqualityConfig(n))
    assert len(rules) == 5 + n
    assert sum(r.head.pred == "noStart" for r in rules) == n


def test_rules_for_n_two():
    assert [str(r) for r in equality_rules(EqualityConfig(2))] == [
        "sameAs(X,Y) :- sameAs(Y,X).",
        "noStart(X1) :- sameAs(X0,X1), X0 < X1.",
        "noStart(X2) :- sameAs(X0,X1), sameAs(X1,X2), X0 < X2.",
        "sameComp(X,Y) :- sameAs(X,Y), not noStart(X), X < Y.",
        "sameComp(X,Z) :- sameComp(X,Y), sameAs(Y,Z), X < Y, X < Z.",
        "sameComp(X,X) :- sameComp(X,Y).",
        "sameComp(X,X) :- sameAs(X,X).",
    ]


def test_negative_n_rejected():
    with pytest.raises(ValueError):
        EqualityConfig(-1)


def test_join_variables():
    assert join_variables(DOG_OWNER) == [Y]
    r = Rule(Atom("h", (X,)), (pos("p", X, Y), pos("q", Y, Z), pos("s", Z, X), neg("t", X, X),
                               Builtin("<", Y, Z)))
    assert join_variables(r) == [X, Y, Z]
    assert join_variables(Rule(Atom("h", (X,)), (pos("p", X, X),))) == [X]
    assert join_variables(Rule(Atom("h", (X,)), (pos("p", X, Y),))) == []


def test_example_six_relaxed_rule():
    rules = rewrite_rule_joins(DOG_OWNER)
    assert [str(r) for r in rules] == [
        "dogOwner(X) :- hasPet(X,Y), dog(Y).",
        "dogOwner(X) :- hasPet(X,Y1), dog(Y2), sameComp(Y,Y1), sameComp(Y,Y2).",
    ]


def test_relax_avoids_name_clash():
    r = Rule(Atom("h", (Var("Y1"),)), (pos("p", Var("Y1"), Y), pos("q", Y)))
    assert str(relax(r, [Y])) == "h(Y1) :- p(Y1,Y1_), q(Y2), sameComp(Y,Y1_), sameComp(Y,Y2)."


@pytest.mark.parametrize("k,expected", [(0, 1), (1, 2), (2, 4), (3, 8), (4, 2), (5, 2)])
def test_rewrite_count(k, expected):
    vs = [Var(f"V{i}") for i in range(k)]
    body = [pos("p", v, v) for v in vs] or [pos("p", X, Y)]
    rule = Rule(Atom("h", tuple(vs) or (X,)), tuple(body))
    assert len(rewrite_rule_joins(rule)) == expected


def test_apply_non_una_requires_rules():
    with pytest.raises(ConfigError):
        apply_non_una(Program([], [Atom("p", (Const(Iri("http://a")),))]))


def test_apply_non_una_rejects_reserved_heads():
    with pytest.raises(ValueError):
        apply_non_una(Program([Rule(Atom("sameComp", (X, Y)), (pos("p", X, Y),))]))


def test_apply_non_una_layout():
    prog = apply_non_una(Program([DOG_OWNER]), cfg=EqualityConfig(1))
    assert prog.rules[:6] == equality_rules(EqualityConfig(1))
    assert len(prog.rules) == 8


def _same_comp(edges, n):
    facts = [Atom("sameAs", (Const(Iri(a)), Const(Iri(b)))) for a, b in edges]
    return {(a.value, b.value) for a, b in materialize(Program(equality_rules(EqualityConfig(n)), facts)).get("sameComp")}


def test_n_zero_single_edge():
    assert _same_comp([("http://a", "http://b")], 0) == {("http://a", "http://b"), ("http://a", "http://a")}


def test_reflexive_singleton_clique():
    assert _same_comp([("http://a", "http://a")], 2) == {("http://a", "http://a")}


def test_smaller_n_more_tuples_on_chain():
    chain = [(f"http://n{i}", f"http://n{i + 1}") for i in range(6)]
    sizes = [len(_same_comp(chain, n)) for n in range(5)]
    assert sizes == sorted(sizes, reverse=True)
    assert ("http://n0", "http://n6") in _same_comp(chain, 4)


def test_random_rules_keep_head_and_negation():
    rng = random.Random(7)
    for _ in range(50):
        vs = [Var(v) for v in "XYZW"]
        body = [pos(rng.choice("pq"), rng.choice(vs), rng.choice(vs)) for _ in range(rng.randint(1, 4))]
        bound = [a for b in body for a in b.atom.args]
        rule = Rule(Atom("h", (bound[0],)), tuple(body) + (neg("n", bound[-1]),))
        for out in rewrite_rule_joins(rule):
            assert out.head == rule.head
            assert neg("n", bound[-1]) in out.body
