"""Naive evaluation over ground terms, kept deliberately simple as a test oracle."""

from __future__ import annotations

import time

from ..datalog import Builtin, Const, Literal, Program, Rule, check_safety, stratify
from ..errors import UnsafeRuleError
from ..terms import compare_terms
from .evaluator import EvalStats, Model

_CMP = {
    "<": lambda c: c < 0,
    "<=": lambda c: c <= 0,
    ">": lambda c: c > 0,
    ">=": lambda c: c >= 0,
    "=": lambda c: c == 0,
    "!=": lambda c: c != 0,
}


def _value(t, subst):
    return t.value if isinstance(t, Const) else subst[t.name]


def _pattern(args) -> tuple:
    # (is_const, constant or variable name) per argument
    return tuple((True, a.value) if isinstance(a, Const) else (False, a.name) for a in args)


def _match(pattern, row, subst):
    out = dict(subst)
    for (is_const, x), v in zip(pattern, row):
        if is_const:
            if x != v:
                return None
        else:
            seen = out.get(x)
            if seen is None:
                out[x] = v
            elif seen != v:
                return None
    return out


def _holds(lit, subst, db) -> bool:
    if isinstance(lit, Builtin):
        return _CMP[lit.op](compare_terms(_value(lit.left, subst), _value(lit.right, subst)))
    return tuple(_value(a, subst) for a in lit.atom.args) not in db.get(lit.atom.pred, set())


def _fire(rule: Rule, db: dict) -> set:
    """All head instances of ``rule`` over ``db``; positive literals in written order,
    each filter checked once its variables are bound."""
    positives = [b for b in rule.body if isinstance(b, Literal) and not b.negated]
    pending = [b for b in rule.body if b not in positives]
    substs = [{}]
    bound: set = set()
    for lit in positives:
        rows = db.get(lit.atom.pred, set())
        pattern = _pattern(lit.atom.args)
        nxt = []
        for s in substs:
            for row in rows:
                if len(row) != len(lit.atom.args):
                    continue
                m = _match(pattern, row, s)
                if m is not None:
                    nxt.append(m)
        bound.update(lit.variables())
        ready = [f for f in pending if set(f.variables()) <= bound]
        pending = [f for f in pending if f not in ready]
        substs = [s for s in nxt if all(_holds(f, s, db) for f in ready)]
    return {tuple(_value(a, s) for a in rule.head.args) for s in substs}


def naive_materialize(program: Program) -> Model:
    t0 = time.perf_counter()
    stats = EvalStats(backend="naive")
    for r in program.rules:
        if not check_safety(r):
            raise UnsafeRuleError(f"unsafe rule: {r}")
    db: dict = {p: set() for p in program.predicates()}
    for f in program.facts:
        db[f.pred].add(tuple(a.value for a in f.args))
    base = {p: len(rows) for p, rows in db.items()}
    for stratum in stratify(program):
        rules = [r for r in program.rules if r.head.pred in stratum]
        if not rules:
            continue
        rounds = 0
        changed = True
        while changed:
            rounds += 1
            changed = False
            derived = [(r.head.pred, _fire(r, db)) for r in rules]
            for pred, rows in derived:
                if not rows <= db[pred]:
                    db[pred] |= rows
                    changed = True
        stats.iterations.append(rounds)
    stats.derived = {p: len(rows) - base[p] for p, rows in db.items() if len(rows) > base[p]}
    stats.outer_rounds = 1
    stats.wall_time = time.perf_counter() - t0
    return Model(db, stats)
