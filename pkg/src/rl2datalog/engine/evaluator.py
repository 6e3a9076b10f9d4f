"""Semi-naive bottom-up evaluation over interned constants."""

from __future__ import annotations

import time
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable

import networkx as nx

from ..datalog import (
    EQUALITY_PREDICATES, INCONSISTENT, SAME_AS, Atom, Builtin, Const, Literal, Program, Rule,
    Var, check_safety, stratify,
)
from ..errors import UnknownQueryError, UnsafeRuleError
from ..sameas import EqualityConfig
from ..terms import GroundTerm, term_key
from . import kernel


@dataclass
class EvalStats:
    iterations: list[int] = field(default_factory=list)
    derived: dict[str, int] = field(default_factory=dict)
    outer_rounds: int = 0
    merge_rounds: int = 0
    wall_time: float = 0.0
    backend: str = field(default_factory=lambda: kernel.BACKEND)

    def as_dict(self) -> dict:
        return {
            "backend": self.backend,
            "strata": len(self.iterations),
            "iterations": list(self.iterations),
            "derived": dict(sorted(self.derived.items())),
            "outer_rounds": self.outer_rounds,
            "merge_rounds": self.merge_rounds,
            "wall_time": round(self.wall_time, 6),
        }


@dataclass
class Model:
    relations: dict[str, set[tuple[GroundTerm, ...]]] = field(default_factory=dict)
    stats: EvalStats = field(default_factory=EvalStats)

    @property
    def inconsistent(self) -> bool:
        return bool(self.relations.get(INCONSISTENT))

    def get(self, pred: str) -> set[tuple[GroundTerm, ...]]:
        return self.relations.get(pred, set())

    def facts(self) -> set[tuple[str, tuple[GroundTerm, ...]]]:
        return {(p, t) for p, rows in self.relations.items() for t in rows}

    def __eq__(self, other) -> bool:
        if not isinstance(other, Model):
            return NotImplemented
        return self.facts() == other.facts()


# -- storage ----------------------------------------------------------------------------


class Relation:
    """A set of int tuples plus lazily built hash indexes on column subsets."""

    __slots__ = ("rows", "indexes")

    def __init__(self) -> None:
        self.rows: set[tuple[int, ...]] = set()
        self.indexes: dict[tuple[int, ...], dict] = {}

    def index(self, positions: tuple[int, ...]) -> dict:
        idx = self.indexes.get(positions)
        if idx is None:
            idx = {}
            self.indexes[positions] = idx
            self._fill(idx, positions, self.rows)
        return idx

    @staticmethod
    def _fill(idx: dict, positions: tuple[int, ...], rows: Iterable[tuple[int, ...]]) -> None:
        if len(positions) == 1:
            p = positions[0]
            for r in rows:
                bucket = idx.get(r[p])
                if bucket is None:
                    idx[r[p]] = [r]
                else:
                    bucket.append(r)
        else:
            for r in rows:
                key = tuple([r[p] for p in positions])
                bucket = idx.get(key)
                if bucket is None:
                    idx[key] = [r]
                else:
                    bucket.append(r)

    def add_new(self, rows: set[tuple[int, ...]]) -> set[tuple[int, ...]]:
        """Insert ``rows``; return the subset that was not present before."""
        fresh = rows - self.rows
        if fresh:
            self.rows |= fresh
            for positions, idx in self.indexes.items():
                self._fill(idx, positions, fresh)
        return fresh


class Interner:
    """Dense integer ids whose numeric order matches ``compare_terms``."""

    def __init__(self, terms: Iterable[GroundTerm]) -> None:
        self.terms = sorted(set(terms), key=term_key)
        self.ids = {t: i for i, t in enumerate(self.terms)}


def program_constants(program: Program) -> set[GroundTerm]:
    out: set[GroundTerm] = set()
    for f in program.facts:
        out.update(a.value for a in f.args)
    for r in program.rules:
        out.update(a.value for a in r.head.args if isinstance(a, Const))
        for b in r.body:
            args = b.atom.args if isinstance(b, Literal) else (b.left, b.right)
            out.update(a.value for a in args if isinstance(a, Const))
    return out


# -- planning -------------------------------------------------------------------------------


def _literal_vars(lit) -> set[Var]:
    return set(lit.variables())


class _Compiler:
    def __init__(self, interner: Interner, store: "_Store") -> None:
        self.interner = interner
        self.store = store

    def const(self, c: Const) -> int:
        return -self.interner.ids[c.value] - 1

    def order(self, rule: Rule, first: int | None) -> list[int]:
        """Body evaluation order: ``first`` (the delta literal) leads, filters run as
        soon as their variables are bound, remaining atoms go most-bound first."""
        body = rule.body
        positive = [i for i, b in enumerate(body) if isinstance(b, Literal) and not b.negated]
        filters = [i for i, b in enumerate(body) if i not in positive]
        bound: set[Var] = set()
        out: list[int] = []

        def flush():
            for i in list(filters):
                if _literal_vars(body[i]) <= bound:
                    out.append(i)
                    filters.remove(i)

        flush()
        if first is not None:
            out.append(first)
            positive.remove(first)
            bound |= _literal_vars(body[first])
            flush()
        while positive:
            def score(i):
                args = body[i].atom.args
                hits = sum(1 for a in args if isinstance(a, Const) or a in bound)
                return (-(hits > 0), -hits, i)
            nxt = min(positive, key=score)
            positive.remove(nxt)
            out.append(nxt)
            bound |= _literal_vars(body[nxt])
            flush()
        if filters:
            raise UnsafeRuleError(f"unsafe rule: {rule}")
        return out

    def compile(self, rule: Rule, first: int | None = None):
        if not check_safety(rule):
            raise UnsafeRuleError(f"unsafe rule: {rule}")
        slots: dict[Var, int] = {}

        def src(t) -> int:
            return self.const(t) if isinstance(t, Const) else slots[t]

        steps, sources = [], []
        for i in self.order(rule, first):
            b = rule.body[i]
            if isinstance(b, Builtin):
                steps.append((kernel.CMP, kernel.CMP_OPS[b.op], src(b.left), src(b.right)))
                sources.append(None)
            elif b.negated:
                steps.append((kernel.NEG, tuple(src(a) for a in b.atom.args)))
                sources.append(self.store.rel(b.atom.pred).rows)
            else:
                is_delta = i == first
                before = set(slots)
                keys, key_pos, checks, binds = [], [], [], []
                for pos, a in enumerate(b.atom.args):
                    if isinstance(a, Const) or a in before:
                        if is_delta:
                            checks += [pos, src(a)]
                        else:
                            key_pos.append(pos)
                            keys.append(src(a))
                    elif a in slots:
                        # repeated within this atom; the kernel binds before checking
                        checks += [pos, slots[a]]
                    else:
                        slots[a] = len(slots)
                        binds += [pos, slots[a]]
                rel = self.store.rel(b.atom.pred)
                if is_delta:
                    source = None
                elif key_pos:
                    source = rel.index(tuple(key_pos))
                else:
                    source = rel.rows
                steps.append((kernel.ATOM, tuple(keys), tuple(checks), tuple(binds)))
                sources.append(source)
        head = tuple(src(a) for a in rule.head.args)
        return kernel.Plan(steps, sources, head, len(slots))



# -- evaluation ---------------------------------------------------------------------------


class _Store:
    def __init__(self, interner: Interner) -> None:
        self.interner = interner
        self.relations: dict[str, Relation] = {}

    def rel(self, pred: str) -> Relation:
        r = self.relations.get(pred)
        if r is None:
            r = self.relations[pred] = Relation()
        return r

    def load(self, facts: Iterable[Atom]) -> None:
        ids = self.interner.ids
        grouped: dict[str, set] = defaultdict(set)
        for f in facts:
            grouped[f.pred].add(tuple(ids[a.value] for a in f.args))
        for pred, rows in grouped.items():
            self.rel(pred).add_new(rows)

    def decode(self) -> dict[str, set[tuple[GroundTerm, ...]]]:
        terms = self.interner.terms
        return {p: {tuple(terms[i] for i in row) for row in r.rows}
                for p, r in self.relations.items()}


def _evaluate(store: _Store, rules: list[Rule], stats: EvalStats,
              extra_preds: Iterable[str] = ()) -> None:
    """Run ``rules`` to fixpoint on top of ``store``, stratum by stratum."""
    compiler = _Compiler(store.interner, store)
    for pred in extra_preds:
        store.rel(pred)
    by_head: dict[str, list[Rule]] = defaultdict(list)
    for r in rules:
        store.rel(r.head.pred)
        for b in r.body:
            if isinstance(b, Literal):
                store.rel(b.atom.pred)
        by_head[r.head.pred].append(r)
    for stratum in stratify(rules):
        srules = [r for p in sorted(stratum) for r in by_head.get(p, ())]
        if not srules:
            continue
        stats.iterations.append(_evaluate_stratum(store, compiler, srules, stratum, stats))


def _evaluate_stratum(store: _Store, compiler: _Compiler, rules: list[Rule],
                      stratum: set[str], stats: EvalStats) -> int:
    delta: dict[str, set] = defaultdict(set)
    for r in rules:
        out: set = set()
        compiler.compile(r).run(out)
        delta[r.head.pred] |= out
    delta = _commit(store, delta, stats)
    recursive = []
    for r in rules:
        for i, b in enumerate(r.body):
            if isinstance(b, Literal) and not b.negated and b.atom.pred in stratum:
                step = compiler.order(r, i).index(i)
                recursive.append((r, i, step, compiler.compile(r, first=i)))
    rounds = 1
    while delta and recursive:
        rounds += 1
        new: dict[str, set] = defaultdict(set)
        for r, i, step, plan in recursive:
            d = delta.get(r.body[i].atom.pred)
            if not d:
                continue
            plan.set_source(step, d)
            out = set()
            plan.run(out)
            new[r.head.pred] |= out
        delta = _commit(store, new, stats)
    return rounds


def _commit(store: _Store, new: dict[str, set], stats: EvalStats) -> dict[str, set]:
    delta = {}
    for pred, rows in new.items():
        fresh = store.rel(pred).add_new(rows)
        if fresh:
            # snapshot: the delta must not grow while the next round iterates it
            delta[pred] = frozenset(fresh)
            stats.derived[pred] = stats.derived.get(pred, 0) + len(fresh)
    return delta


def materialize(program: Program) -> Model:
    """Perfect model of a stratified program."""
    t0 = time.perf_counter()
    stats = EvalStats()
    store = _Store(Interner(program_constants(program)))
    store.load(program.facts)
    _evaluate(store, program.rules, stats, program.predicates())
    stats.outer_rounds = 1
    stats.wall_time = time.perf_counter() - t0
    return Model(store.decode(), stats)


def _is_equality_rule(rule: Rule) -> bool:
    if rule.head.pred not in EQUALITY_PREDICATES:
        return False
    return all(b.atom.pred in EQUALITY_PREDICATES
               for b in rule.body if isinstance(b, Literal))


def materialize_with_equality(program: Program,
                              cfg: EqualityConfig | None = None) -> Model:
    """Model of a non-UNA program via an outer fixpoint on ``sameAs``.

    Each round computes ``sameComp`` from the current ``sameAs`` extension with
    the equality rules, then evaluates the remaining rules with ``sameComp``
    fixed. New ``sameAs`` facts (from at-most-one axioms) start another round
    from the original facts plus the enlarged ``sameAs``. ``cfg`` is accepted
    for symmetry with :func:`apply_non_una`; the equality rules themselves are
    taken from ``program``.
    """
    t0 = time.perf_counter()
    stats = EvalStats()
    eq_rules = [r for r in program.rules if _is_equality_rule(r)]
    rest = [r for r in program.rules if not _is_equality_rule(r)]
    interner = Interner(program_constants(program))
    carried: set = set()
    while True:
        stats.outer_rounds += 1
        store = _Store(interner)
        store.load(program.facts)
        same = store.rel(SAME_AS)
        same.add_new(carried)
        _evaluate(store, eq_rules, stats, program.predicates())
        before = len(same.rows)
        _evaluate(store, rest, stats)
        if len(same.rows) == before:
            break
        stats.merge_rounds += 1
        carried = set(same.rows)
    stats.wall_time = time.perf_counter() - t0
    return Model(store.decode(), stats)


# -- answers ------------------------------------------------------------------------------


def same_as_cliques(model: Model) -> dict[GroundTerm, frozenset]:
    g = nx.Graph()
    g.add_edges_from(model.get(SAME_AS))
    out = {}
    for comp in nx.connected_components(g):
        members = frozenset(comp)
        for t in comp:
            out[t] = members
    return out


def answer_query(model: Model, index: int, expand: bool = False) -> set[tuple[GroundTerm, ...]]:
    """Tuples of ``ans_<index>``, optionally closed under ``sameAs`` cliques."""
    pred = f"ans_{index}"
    if pred not in model.relations:
        if not model.relations:
            return set()
        raise UnknownQueryError(index)
    rows = set(model.relations[pred])
    if not expand:
        return rows
    cliques = same_as_cliques(model)
    # rows whose terms lie in the same cliques expand identically
    signatures = {tuple(cliques.get(t) or frozenset((t,)) for t in row) for row in rows}
    out: set = set()
    for sig in signatures:
        out.update(product(*sig))
    return out
