"""OWL 2 RL TBox/ABox -> Datalog.

Concept inclusions take one of two routes. Those of the shape ``⊔Cᵢ ⊑ ⊓Aⱼ``
with ELI-concepts ``Cᵢ`` are turned into rules directly; the rest are first
brought into normalized form (structural transformation followed by a small
set of rewrites) and then translated row by row.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .datalog import (
    INCONSISTENT, SAME_AS, TOP_PRED, Atom, Builtin, Const, Literal, Program, Rule, Var, pos,
)
from .dl import (
    ABox, All, And, AtLeast, AtMost, Atomic, BOTTOM, Bottom, CI, CIClass, Concept, Not, Or,
    Polarity, RI, Role, Some, TBox, Top, Trans, ci_occurrences, classify_ci, conj,
    conjuncts, is_atomic_conj, is_exists, is_normalized, polarity_map, subconcepts,
)
from .errors import RlProfileError
from .owl import check_rl_profile
from .terms import Iri, SymbolTable, mangle_predicate, term_key

X, Y, Y1, Y2 = Var("X"), Var("Y"), Var("Y1"), Var("Y2")


# -- fresh names ----------------------------------------------------------------


def _key(c: Concept) -> tuple:
    if isinstance(c, Atomic):
        return ("atomic", c.name, c.fresh)
    if isinstance(c, (Top, Bottom)):
        return (type(c).__name__,)
    if isinstance(c, (And, Or)):
        return (type(c).__name__, tuple(sorted(_key(a) for a in c.args)))
    if isinstance(c, Not):
        return ("Not", _key(c.arg))
    n = getattr(c, "n", 0)
    return (type(c).__name__, n, c.role.name, c.role.inverted, _key(c.filler))


def canonical(c: Concept) -> Concept:
    """Order ⊓/⊔ arguments structurally so that B⊓C and C⊓B coincide."""
    if isinstance(c, (And, Or)):
        args = sorted((canonical(a) for a in c.args), key=_key)
        return type(c)(tuple(args))
    if isinstance(c, Not):
        return Not(canonical(c.arg))
    if isinstance(c, (All, Some)):
        return type(c)(c.role, canonical(c.filler))
    if isinstance(c, (AtLeast, AtMost)):
        return type(c)(c.n, c.role, canonical(c.filler))
    return c


@dataclass
class FreshNamer:
    """Memoised ``aux_<k>`` names for complex concepts.

    With ``name_everything`` set (the unenhanced procedure) ⊤, ⊥ and atomic
    concepts receive fresh names too.
    """

    name_everything: bool = False
    memo: dict[Concept, Atomic] = field(default_factory=dict)

    def needs_name(self, c: Concept) -> bool:
        return self.name_everything or not isinstance(c, (Top, Bottom, Atomic))

    def name(self, c: Concept) -> Concept:
        if not self.needs_name(c):
            return c
        k = canonical(c)
        a = self.memo.get(k)
        if a is None:
            a = self.memo[k] = Atomic(f"aux_{len(self.memo)}", fresh=True)
        return a


def st(c: Concept, namer: FreshNamer) -> Concept:
    """Shallow form of ``c``: every direct sub-concept replaced by its name."""
    n = namer.name
    if isinstance(c, (Top, Bottom, Atomic)):
        return c
    if isinstance(c, Not):
        return Not(n(c.arg))
    if isinstance(c, And):
        return And(tuple(n(a) for a in c.args))
    if isinstance(c, Or):
        return Or(tuple(n(a) for a in c.args))
    if isinstance(c, (All, Some)):
        return type(c)(c.role, n(c.filler))
    return type(c)(c.n, c.role, n(c.filler))


def structural_transform(cis: Iterable[CI], namer: FreshNamer | None = None,
                         enhanced: bool = True, seen: set | None = None,
                         polarity: dict | None = None) -> list[CI]:
    """Structural transformation of a set of concept inclusions.

    Emits ``A_C ⊑ st(C)`` for positive and ``st(C) ⊑ A_C`` for negative
    occurrences, plus ``A_C ⊑ A_D`` for every ``C ⊑ D``. Concepts are visited
    left to right, depth first, so fresh names follow first encounter.
    ``seen`` and ``polarity`` let callers process a TBox in several chunks.
    """
    cis = list(cis)
    if namer is None:
        namer = FreshNamer(name_everything=not enhanced)
    if polarity is None:
        polarity = polarity_map(cis)
    if seen is None:
        seen = set()
    out: list[CI] = []
    for ci in cis:
        for c, _ in ci_occurrences(ci):
            if c in seen:
                continue
            seen.add(c)
            if not namer.needs_name(c):
                continue
            a, shallow = namer.name(c), st(c, namer)
            p = polarity[c]
            if Polarity.POSITIVE in p:
                out.append(CI(a, shallow))
            if Polarity.NEGATIVE in p:
                out.append(CI(shallow, a))
        out.append(CI(namer.name(ci.sub), namer.name(ci.sup)))
    return list(dict.fromkeys(out))


def normalize_fixups(cis: Iterable[CI]) -> list[CI]:
    """Rewrite shallow CIs until every one is in normalized form.

    Trivial CIs (tautological right side, ⊥ conjunct on the left) vanish.
    """
    todo = list(cis)
    todo.reverse()
    out: list[CI] = []
    while todo:
        ci = todo.pop()
        sub, sup = ci.sub, ci.sup
        if classify_ci(ci) is CIClass.TRIVIAL_DROP:
            continue
        if is_normalized(ci):
            out.append(ci)
            continue
        new: list[CI]
        if is_atomic_conj(sub) and isinstance(sup, Not):
            new = [CI(conj((sub, sup.arg)), BOTTOM)]
        elif is_atomic_conj(sub) and isinstance(sup, And):
            new = [CI(sub, d) for d in sup.args]
        elif isinstance(sub, Or):
            new = [CI(d, sup) for d in sub.args]
        elif is_exists(sub) and isinstance(sup, (Atomic, Bottom)):
            new = [CI(sub.filler, All(sub.role.inverse(), sup))]
        elif isinstance(sub, And) and all(isinstance(a, (Atomic, Top, Bottom)) for a in sub.args):
            new = [CI(conj(sub.args), sup)]
        else:
            raise ValueError(f"cannot normalize {ci}")
        todo.extend(reversed(new))
    return list(dict.fromkeys(out))


# -- rule generation ---------------------------------------------------------------


class Naming:
    """Maps concepts and roles to predicate names through a shared symbol table."""

    def __init__(self, symbols: SymbolTable | None = None) -> None:
        self.symbols = symbols if symbols is not None else SymbolTable()

    def pred(self, iri: str) -> str:
        return mangle_predicate(iri, self.symbols)

    def concept(self, a: Atomic) -> str:
        return a.name if a.fresh else self.pred(a.name)

    def concept_atom(self, c: Concept, v: Var) -> Atom:
        if isinstance(c, Top):
            return Atom(TOP_PRED, (v,))
        if isinstance(c, Bottom):
            return Atom(INCONSISTENT)
        return Atom(self.concept(c), (v,))

    def role_atom(self, r: Role, x, y) -> Atom:
        name = self.pred(r.name)
        return Atom(name, (y, x) if r.inverted else (x, y))


def translate_eli(c: Concept, var: str, clause: int, acc: list, naming: Naming) -> list:
    """Append the body literals for ELI-concept ``c`` over variable ``var``.

    Existential conjuncts of a conjunction are numbered 1, 2, ... and the
    variable they introduce is ``var`` + ``_`` + that number. ⊤ contributes a
    literal only when nothing else binds the variable.
    """
    if isinstance(c, Top):
        acc.append(pos(TOP_PRED, Var(var)))
    elif isinstance(c, Atomic):
        acc.append(pos(naming.concept(c), Var(var)))
    elif isinstance(c, And):
        k = 0
        for d in conjuncts(conj(c.args)):
            if is_exists(d):
                k += 1
                translate_eli(d, var, k, acc, naming)
            else:
                translate_eli(d, var, clause, acc, naming)
    elif is_exists(c):
        new_var = f"{var}_{clause}"
        acc.append(Literal(naming.role_atom(c.role, Var(var), Var(new_var))))
        if not isinstance(c.filler, Top):
            translate_eli(c.filler, new_var, 1, acc, naming)
    else:
        raise ValueError(f"not an ELI concept: {c}")
    return acc


def translate_direct_ci(ci: CI, naming: Naming) -> list[Rule]:
    disjuncts = ci.sub.args if isinstance(ci.sub, Or) else (ci.sub,)
    heads = [a for a in conjuncts(ci.sup) if isinstance(a, Atomic)]
    rules = []
    for head in heads:
        for d in disjuncts:
            body = translate_eli(d, "X", 1, [], naming)
            rules.append(Rule(naming.concept_atom(head, X), tuple(body)))
    return rules


def translate_normalized_ci(ci: CI, naming: Naming) -> Rule | None:
    """One rule per normalized CI; ``None`` when the CI is vacuous."""
    sub, sup = ci.sub, ci.sup
    lhs = [Literal(naming.concept_atom(a, X)) for a in conjuncts(sub) if not isinstance(a, Top)]
    if isinstance(sup, (Bottom, Atomic)):
        body = lhs or [pos(TOP_PRED, X)]
        return Rule(naming.concept_atom(sup, X), tuple(body))
    if isinstance(sup, All):
        head = naming.concept_atom(sup.filler, Y)
        return Rule(head, (Literal(naming.role_atom(sup.role, X, Y)), *lhs))
    if isinstance(sup, AtMost) and sup.n == 1:
        if isinstance(sup.filler, Bottom):
            return None
        body = [*lhs,
                Literal(naming.role_atom(sup.role, X, Y1)),
                Literal(naming.role_atom(sup.role, X, Y2))]
        if not isinstance(sup.filler, Top):
            body += [Literal(naming.concept_atom(sup.filler, Y1)),
                     Literal(naming.concept_atom(sup.filler, Y2))]
        body.append(Builtin("!=", Y1, Y2))
        return Rule(Atom(SAME_AS, (Y1, Y2)), tuple(body))
    raise ValueError(f"not in normalized form: {ci}")


def translate_role_axioms(ris: Iterable[RI], trans: Iterable[Trans], naming: Naming) -> list[Rule]:
    rules = []
    for ri in ris:
        rules.append(Rule(naming.role_atom(ri.sup, X, Y), (Literal(naming.role_atom(ri.sub, X, Y)),)))
    z = Var("Z")
    for t in trans:
        r = Role(t.role.name)
        rules.append(Rule(naming.role_atom(r, X, z),
                          (Literal(naming.role_atom(r, X, Y)), Literal(naming.role_atom(r, Y, z)))))
    return rules


def translate_abox(abox: ABox, naming: Naming) -> list[Atom]:
    facts: list[Atom] = []
    individuals = set()
    for cname, a in sorted(abox.concept_asserts, key=lambda t: (t[0], term_key(t[1]))):
        facts.append(Atom(naming.pred(cname), (Const(a),)))
        individuals.add(a)
    for rname, a, b in sorted(abox.role_asserts, key=lambda t: (t[0], term_key(t[1]), term_key(t[2]))):
        facts.append(Atom(naming.pred(rname), (Const(a), Const(b))))
        individuals.update((a, b))
    for a, b in sorted(abox.same_as, key=lambda t: (term_key(t[0]), term_key(t[1]))):
        facts.append(Atom(SAME_AS, (Const(a), Const(b))))
        individuals.update((a, b))
    for ind in sorted((i for i in individuals if isinstance(i, Iri)), key=term_key):
        facts.append(Atom(TOP_PRED, (Const(ind),)))
    return facts


class Rewriter:
    """Stateful TBox rewriter sharing fresh names across several TBox chunks.

    Call :meth:`prepare` with the whole TBox before rewriting its parts so that
    polarities are computed globally.
    """

    def __init__(self, symbols: SymbolTable | None = None, enhanced: bool = True) -> None:
        self.naming = Naming(symbols)
        self.enhanced = enhanced
        self.namer = FreshNamer(name_everything=not enhanced)
        self._seen: set = set()
        self._polarity: dict = {}
        self.concepts: dict[str, None] = {}
        self.roles: dict[str, None] = {}

    @property
    def symbols(self) -> SymbolTable:
        return self.naming.symbols

    def _residue(self, cis: Iterable[CI]) -> list[CI]:
        if not self.enhanced:
            return list(cis)
        return [ci for ci in cis if classify_ci(ci) is CIClass.NEEDS_NORMALIZATION]

    def prepare(self, tbox: TBox) -> None:
        violations = check_rl_profile(tbox)
        if violations:
            raise RlProfileError(violations)
        self._polarity = polarity_map(self._residue(tbox.cis))

    def _note_signature(self, tbox: TBox) -> None:
        for ci in tbox.cis:
            for side in (ci.sub, ci.sup):
                for c in subconcepts(side):
                    if isinstance(c, Atomic):
                        self.concepts.setdefault(c.name)
                    if hasattr(c, "role"):
                        self.roles.setdefault(c.role.name)
        for ri in tbox.ris:
            self.roles.setdefault(ri.sub.name)
            self.roles.setdefault(ri.sup.name)
        for t in tbox.trans:
            self.roles.setdefault(t.role.name)

    def rewrite_tbox(self, tbox: TBox) -> list[Rule]:
        self._note_signature(tbox)
        rules: list[Rule] = []
        residue: list[CI] = []
        for ci in tbox.cis:
            if not self.enhanced:
                residue.append(ci)
                continue
            cls = classify_ci(ci)
            if cls is CIClass.DIRECT:
                rules.extend(translate_direct_ci(ci, self.naming))
            elif cls is CIClass.NORMALIZED:
                rules.append(translate_normalized_ci(ci, self.naming))
            elif cls is CIClass.NEEDS_NORMALIZATION:
                residue.append(ci)
        if residue:
            missing = [ci for ci in residue if any(c not in self._polarity for c, _ in ci_occurrences(ci))]
            if missing:
                pol = polarity_map(missing)
                for c, p in pol.items():
                    self._polarity[c] = self._polarity.get(c, p) | p
            shallow = structural_transform(residue, self.namer, self.enhanced,
                                           self._seen, self._polarity)
            for ci in normalize_fixups(shallow):
                r = translate_normalized_ci(ci, self.naming)
                if r is not None:
                    rules.append(r)
        rules.extend(translate_role_axioms(tbox.ris, tbox.trans, self.naming))
        return list(dict.fromkeys(r for r in rules if r is not None))

    def support_rules(self, rules: Iterable[Rule]) -> list[Rule]:
        """``top`` closure rules, needed only if some body mentions ``top``."""
        if not any(isinstance(b, Literal) and b.atom.pred == TOP_PRED
                   for r in rules for b in r.body):
            return []
        out = []
        for cname in self.concepts:
            out.append(Rule(Atom(TOP_PRED, (X,)), (pos(self.naming.pred(cname), X),)))
        for rname in self.roles:
            p = self.naming.pred(rname)
            out.append(Rule(Atom(TOP_PRED, (X,)), (pos(p, X, Y),)))
            out.append(Rule(Atom(TOP_PRED, (Y,)), (pos(p, X, Y),)))
        return out

    def translate_abox(self, abox: ABox) -> list[Atom]:
        return translate_abox(abox, self.naming)


def rewrite_knowledge_base(tbox: TBox, abox: ABox | None = None,
                           symbols: SymbolTable | None = None,
                           enhanced: bool = True) -> Program:
    rw = Rewriter(symbols, enhanced)
    rw.prepare(tbox)
    rules = rw.rewrite_tbox(tbox)
    rules += rw.support_rules(rules)
    facts = rw.translate_abox(abox) if abox is not None else []
    return Program(rules, facts)
