import random

import pytest
from hypothesis import given, strategies as st

from rl2datalog.terms import (
    INTEGER, STRING, Iri, Literal, SymbolTable, compare_terms, mangle_predicate, term_from_asp,
    term_to_asp,
)

iris = st.text(alphabet="abcdefgh#/:._-", min_size=1, max_size=12).map(lambda s: Iri("http://x/" + s))
ints = st.integers(-10**30, 10**30).map(Literal.integer)
strings = st.text(max_size=10).map(lambda s: Literal(s, STRING))
terms = st.one_of(iris, ints, strings)


def test_compare_prefix_iri_is_smaller():
    assert compare_terms(Iri("http://ex.org/Brian"), Iri("http://ex.org/BrianGriffin")) == -1


def test_compare_integers_numerically():
    assert compare_terms(Literal("7", INTEGER), Literal("7", INTEGER)) == 0
    assert compare_terms(Literal("10", INTEGER), Literal("9", INTEGER)) == 1


def test_compare_kind_precedence():
    a, n, s = Iri("http://z"), Literal.integer(-5), Literal("a")
    assert compare_terms(a, n) == -1 and compare_terms(n, s) == -1 and compare_terms(a, s) == -1


def test_integer_lexical_is_canonical():
    assert Literal("+007", INTEGER) == Literal("7", INTEGER)
    assert Literal.integer(12).value == 12


def test_invalid_iri_rejected():
    with pytest.raises(ValueError):
        Iri("has space")
    with pytest.raises(ValueError):
        Iri("")


def test_order_is_strict_total_on_random_triples():
    rng = random.Random(3)
    pool = ([Iri(f"http://e/{rng.randrange(50)}") for _ in range(40)]
            + [Literal.integer(rng.randrange(-20, 20)) for _ in range(40)]
            + [Literal(str(rng.randrange(30))) for _ in range(40)])
    for _ in range(10_000):
        a, b, c = rng.choice(pool), rng.choice(pool), rng.choice(pool)
        assert compare_terms(a, b) == -compare_terms(b, a)
        assert (compare_terms(a, b) == 0) == (a == b)
        if compare_terms(a, b) < 0 and compare_terms(b, c) < 0:
            assert compare_terms(a, c) < 0


@given(terms)
def test_asp_round_trip(t):
    assert term_from_asp(term_to_asp(t)) == t


def test_asp_forms():
    assert term_to_asp(Iri("http://ex.org#Peter")) == '"http://ex.org#Peter"'
    assert term_to_asp(Literal.integer(42)) == "42"
    assert term_to_asp(Literal('say "hi"')) == '"s_say \\"hi\\""'


def test_mangle_examples():
    t = SymbolTable()
    assert mangle_predicate(Iri("http://ex.org/onto#DogOwner"), t) == "dogOwner"
    assert mangle_predicate(Iri("http://ex.org/onto#sameAs"), t) == "p_sameAs"
    assert mangle_predicate(Iri("http://a.org/A"), t) == "a"
    assert mangle_predicate(Iri("http://b.org/A"), t) == "a_2"
    assert mangle_predicate(Iri("http://a.org/A"), t) == "a"
    assert t.iri_of("a_2") == "http://b.org/A"


def test_mangle_special_characters_and_digits():
    t = SymbolTable()
    assert mangle_predicate("http://x/has-part.of", t) == "has_part_of"
    assert mangle_predicate("http://x/3D", t) == "p_3D"
    assert mangle_predicate("http://x/ans_1", t) == "p_ans_1"
    assert mangle_predicate("http://x/aux_0", t) == "p_aux_0"


@given(st.lists(st.text(alphabet="aAbB_-#/1", min_size=1, max_size=6), max_size=30))
def test_mangle_is_injective(fragments):
    t = SymbolTable()
    iris_ = {f"http://h/{i}/{f}" for i, f in enumerate(fragments)}
    names = [mangle_predicate(i, t) for i in sorted(iris_)]
    assert len(set(names)) == len(names)
    assert all(t.reverse[n] == i for n, i in zip(names, sorted(iris_)))
