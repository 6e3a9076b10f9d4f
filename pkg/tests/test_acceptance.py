"""Acceptance suite: one test per criterion, each timed against its limit."""

import random

import networkx as nx

from criteria import criterion
from randomkb import (
    NS, TBoxGen, quotient_answers, random_abox, random_program, random_query,
    random_same_as_graph, spanning_tree_same_as,
)
from render import EXAMPLE_CI, golden, render_eli, render_normalization, render_table_rows
from rl2datalog.cli import main
from rl2datalog.datalog import Atom, Const, Program, Rule, Var, pos
from rl2datalog.engine import (
    answer_query, materialize, materialize_with_equality, naive_materialize,
)
from rl2datalog.rewrite import rewrite_knowledge_base
from rl2datalog.sameas import (
    EqualityConfig, apply_non_una, equality_rules, join_variables, rewrite_rule_joins,
)
from rl2datalog.sparql import translate_bgp
from rl2datalog.terms import Iri, SymbolTable, compare_terms, term_key

X, Y, Z = Var("X"), Var("Y"), Var("Z")


def test_criterion_01_eli_rule_golden():
    with criterion(1, "ELI concept inclusion rewrites to the golden rule", 1.0):
        assert render_eli() == golden("eli_rule.txt")


def test_criterion_02_normalization_golden():
    with criterion(2, "structural transformation and fixups match the golden axioms", 1.0):
        enhanced = render_normalization(EXAMPLE_CI, True)
        unenhanced = render_normalization(EXAMPLE_CI, False)
        assert enhanced + unenhanced == golden("normalization_example.txt")
        assert "normalized (4 axioms)" in enhanced
        assert "structural transformation (7 axioms)" in unenhanced
        fixed = "A[B ⊓ C] ⊑ ∀r⁻.A[∃r.(B ⊓ C)]"
        assert fixed in enhanced.split("normalized")[1]
        assert "∃r.A[B ⊓ C] ⊑ A[∃r.(B ⊓ C)]" not in enhanced.split("normalized")[1]


def test_criterion_03_table_rows_golden():
    with criterion(3, "normalized-form rows translate to the golden rules", 1.0):
        assert render_table_rows() == golden("normalized_table.tsv")


DOG_TBOX = """Prefix(:=<http://ex.org/>)
Ontology(
SubClassOf(ObjectSomeValuesFrom(:hasPet :Dog) :DogOwner)
)
"""
DOG_ABOX = """Prefix(:=<http://ex.org/>)
Ontology(
ObjectPropertyAssertion(:hasPet :Peter :Brian)
ClassAssertion(:Dog :BrianGriffin)
SameIndividual(:Brian :BrianGriffin)
)
"""
DOG_QUERY = "PREFIX : <http://ex.org/>\nSELECT ?x WHERE { ?x a :DogOwner }\n"


def test_criterion_04_dog_owner_end_to_end(tmp_path, capsys):
    (tmp_path / "dog.ofn").write_text(DOG_TBOX)
    (tmp_path / "facts.ofn").write_text(DOG_ABOX)
    (tmp_path / "q.sparql").write_text(DOG_QUERY)
    base = ["--tbox", str(tmp_path / "dog.ofn"), "--abox", str(tmp_path / "facts.ofn"),
            "--query", str(tmp_path / "q.sparql"), "--eval", "materialize"]
    with criterion(4, "DogOwner(Peter) holds without UNA for N=0..3 and not under UNA", 1.0):
        for n in range(4):
            out = tmp_path / f"n{n}"
            assert main(base + ["--same-as", str(n), "--out", str(out)]) == 0
            assert (out / "answers-1.tsv").read_text() == '"http://ex.org/Peter"\n'
        assert main(base + ["--out", str(tmp_path / "una")]) == 0
        assert (tmp_path / "una" / "answers-1.tsv").read_text() == ""
    capsys.readouterr()


def _random_rule(rng: random.Random) -> Rule:
    variables = [Var(v) for v in ("X", "Y", "Z", "W", "U", "V", "T")]
    preds = {"p": 2, "q": 2, "c": 1, "sameAs": 2}
    body = []
    for _ in range(rng.randint(1, 7)):
        name = rng.choice(list(preds))
        body.append(pos(name, *(rng.choice(variables) for _ in range(preds[name]))))
    bound = [a for b in body for a in b.atom.args]
    return Rule(Atom("h", (rng.choice(bound),)), tuple(body))


def test_criterion_05_join_rewriting_law():
    with criterion(5, "join rewriting yields 2^|J| rules (|J|<=3) or 2, dog-owner rule verbatim", 5.0):
        rng = random.Random(5)
        sizes = set()
        for _ in range(600):
            rule = _random_rule(rng)
            k = len(join_variables(rule))
            sizes.add(k)
            assert len(rewrite_rule_joins(rule)) == (2 ** k if k <= 3 else 2)
        assert {0, 1, 2, 3, 4} <= sizes
        dog = Rule(Atom("dogOwner", (X,)), (pos("hasPet", X, Y), pos("dog", Y)))
        assert str(rewrite_rule_joins(dog)[1]) == \
            "dogOwner(X) :- hasPet(X,Y1), dog(Y2), sameComp(Y,Y1), sameComp(Y,Y2)."


# ans_1 has no join variable in its head, ans_2 has only join variables there
SAMECOMP_QUERIES = [
    Rule(Atom("ans_1", (X,)), (pos("q", X, Y), pos("p", Y))),
    Rule(Atom("ans_2", (X, Y)), (pos("q", X, Y), pos("q", Y, X))),
]


def test_criterion_06_same_comp_correctness():
    with criterion(6, "sameComp complete, sound, non-increasing in N, answers stable", 30.0):
        rng = random.Random(6)
        for _ in range(30):
            edges = random_same_as_graph(rng)
            g = nx.Graph(edges)
            nodes = sorted(g.nodes, key=term_key)
            comp_of = {t: frozenset(c) for c in nx.connected_components(g) for t in c}
            facts = [Atom("sameAs", (Const(a), Const(b))) for a, b in edges]
            facts += [Atom("p", (Const(t),)) for t in rng.sample(nodes, max(1, len(nodes) // 10))]
            facts += [Atom("q", (Const(rng.choice(nodes)), Const(rng.choice(nodes))))
                      for _ in range(max(1, len(nodes) // 4))]
            sizes, raw, expanded = [], [], []
            for n in range(5):
                cfg = EqualityConfig(n)
                prog = apply_non_una(Program([], facts), SAMECOMP_QUERIES, cfg)
                model = materialize_with_equality(prog)
                comp = model.get("sameComp")
                for k in set(comp_of.values()):
                    rep = min(k, key=term_key)
                    assert all((rep, d) in comp for d in k)  # (a)
                for a, b in comp:
                    assert comp_of[a] == comp_of[b] and compare_terms(a, b) <= 0  # (b)
                sizes.append(len(comp))
                raw.append(answer_query(model, 1))
                expanded.append((answer_query(model, 1, expand=True),
                                 answer_query(model, 2, expand=True)))
            assert sizes == sorted(sizes, reverse=True)  # (c)
            assert all(r == raw[0] for r in raw)  # (d)
            assert all(e == expanded[0] for e in expanded)


def test_criterion_07_normalization_conservative():
    def restrict(model):
        return {(p, t) for p, t in model.facts() if not p.startswith("aux_") and p != "top"}

    with criterion(7, "enhanced and unenhanced pipelines agree on the original vocabulary", 60.0):
        for seed in range(200):
            rng = random.Random(seed)
            gen = TBoxGen(rng)
            tbox = gen.tbox(rng.randint(1, 30))
            abox = random_abox(rng, gen, 30, rng.randint(1, 100))
            enhanced = materialize(rewrite_knowledge_base(tbox, abox, SymbolTable(), enhanced=True))
            plain = materialize(rewrite_knowledge_base(tbox, abox, SymbolTable(), enhanced=False))
            assert restrict(enhanced) == restrict(plain), seed


def test_criterion_08_quotient_oracle():
    with criterion(8, "expanded answers equal the clique-quotient oracle for N=0..3", 120.0):
        nonempty = 0
        for seed in range(200):
            rng = random.Random(seed)
            gen = TBoxGen(rng, at_most=False)
            tbox = gen.tbox(rng.randint(1, 30))
            abox = random_abox(rng, gen, 40, rng.randint(1, 200), n_cliques=rng.randint(1, 8))
            query = random_query(rng, gen)
            expected = quotient_answers(tbox, abox, query)
            nonempty += bool(expected)
            symbols = SymbolTable()
            prog = rewrite_knowledge_base(tbox, abox, symbols)
            rule = translate_bgp(query, 1, symbols)
            for n in range(4):
                model = materialize_with_equality(apply_non_una(prog, [rule], EqualityConfig(n)))
                assert answer_query(model, 1, expand=True) == expected, (seed, n)
        assert nonempty >= 50


def test_criterion_09_engine_self_consistency():
    with criterion(9, "semi-naive equals naive on 500 programs, path closure has 45 tuples", 30.0):
        for seed in range(500):
            prog = random_program(random.Random(seed))
            assert materialize(prog) == naive_materialize(prog), seed
        path = [Atom("e", (Const(Iri(f"{NS}v{i}")), Const(Iri(f"{NS}v{i + 1}")))) for i in range(9)]
        tc = [Rule(Atom("tc", (X, Y)), (pos("e", X, Y),)),
              Rule(Atom("tc", (X, Z)), (pos("tc", X, Y), pos("e", Y, Z)))]
        assert len(materialize(Program(tc, path)).get("tc")) == 45


def test_criterion_10_n_tradeoff_trend():
    with criterion(10, "|sameComp| non-increasing as N goes 0..3 on 100 cliques of 50", 60.0):
        edges = spanning_tree_same_as(random.Random(10), 100, 50)
        facts = [Atom("sameAs", (Const(a), Const(b))) for a, b in edges]
        sizes = []
        for n in range(4):
            model = materialize(Program(equality_rules(EqualityConfig(n)), facts))
            sizes.append(len(model.get("sameComp")))
        print("sameComp sizes for N=0..3:", sizes)
        assert all(a >= b for a, b in zip(sizes, sizes[1:]))
        assert sizes[0] > sizes[3]
