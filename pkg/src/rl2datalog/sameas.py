"""Equality handling without the unique name assumption.

The equality rules connect every member of an ``owl:sameAs`` clique to a
representative through ``sameComp``; rules with join variables are then
duplicated with those joins relaxed modulo ``sameComp``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .datalog import (
    EQUALITY_PREDICATES, NO_START, SAME_AS, SAME_COMP, Atom, Builtin, Literal, Program, Rule,
    Var, neg, pos,
)
from .errors import ConfigError

DEFAULT_N = 2


@dataclass(frozen=True)
class EqualityConfig:
    n: int = DEFAULT_N
    join_threshold: int = 3

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("path bound N must be non-negative")
        if self.join_threshold < 1:
            raise ValueError("join threshold must be positive")


def equality_rules(cfg: EqualityConfig = EqualityConfig()) -> list[Rule]:
    X, Y, Z = Var("X"), Var("Y"), Var("Z")
    rules = [Rule(Atom(SAME_AS, (X, Y)), (pos(SAME_AS, Y, X),))]
    for k in range(1, cfg.n + 1):
        xs = [Var(f"X{i}") for i in range(k + 1)]
        body = [pos(SAME_AS, xs[i], xs[i + 1]) for i in range(k)]
        body.append(Builtin("<", xs[0], xs[k]))
        rules.append(Rule(Atom(NO_START, (xs[k],)), tuple(body)))
    rules.append(Rule(Atom(SAME_COMP, (X, Y)),
                      (pos(SAME_AS, X, Y), neg(NO_START, X), Builtin("<", X, Y))))
    rules.append(Rule(Atom(SAME_COMP, (X, Z)),
                      (pos(SAME_COMP, X, Y), pos(SAME_AS, Y, Z),
                       Builtin("<", X, Y), Builtin("<", X, Z))))
    rules.append(Rule(Atom(SAME_COMP, (X, X)), (pos(SAME_COMP, X, Y),)))
    # a reflexive sameAs fact on its own forms a one-element clique that the
    # rules above never reach, since they only seed sameComp along X < Y
    rules.append(Rule(Atom(SAME_COMP, (X, X)), (pos(SAME_AS, X, X),)))
    return rules


def _relaxable(lit) -> bool:
    return (isinstance(lit, Literal) and not lit.negated
            and lit.atom.pred not in EQUALITY_PREDICATES)


def _occurrence_counts(rule: Rule) -> Counter:
    counts: Counter = Counter()
    for lit in rule.body:
        if _relaxable(lit):
            counts.update(a for a in lit.atom.args if isinstance(a, Var))
    return counts


def join_variables(rule: Rule) -> list[Var]:
    """Variables occurring more than once among the positive body atoms.

    Returned in order of first occurrence; built-ins, negated literals and the
    equality predicates do not count.
    """
    return [v for v, n in _occurrence_counts(rule).items() if n > 1]


def _fresh(base: str, i: int, used: set[str]) -> Var:
    cand = f"{base}{i}"
    while cand in used:
        cand += "_"
    used.add(cand)
    return Var(cand)


def relax(rule: Rule, relaxed: Iterable[Var]) -> Rule:
    """Replace the i-th body occurrence of each relaxed variable X by a fresh
    X_i and append ``sameComp(X, X_i)``."""
    relaxed = list(relaxed)
    if not relaxed:
        return rule
    used = {v.name for v in rule.variables()}
    counts = _occurrence_counts(rule)
    fresh = {x: [_fresh(x.name, i, used) for i in range(1, counts[x] + 1)] for x in relaxed}
    seen: Counter = Counter()
    body = []
    for lit in rule.body:
        if not _relaxable(lit):
            body.append(lit)
            continue
        args = []
        for a in lit.atom.args:
            if a in fresh:
                args.append(fresh[a][seen[a]])
                seen[a] += 1
            else:
                args.append(a)
        body.append(Literal(Atom(lit.atom.pred, tuple(args))))
    for x in relaxed:
        body.extend(pos(SAME_COMP, x, xi) for xi in fresh[x])
    return Rule(rule.head, tuple(body))


def rewrite_rule_joins(rule: Rule, cfg: EqualityConfig = EqualityConfig()) -> list[Rule]:
    joins = join_variables(rule)
    if len(joins) > cfg.join_threshold:
        return [rule, relax(rule, joins)]
    out = []
    for size in range(len(joins) + 1):
        for subset in combinations(joins, size):
            out.append(relax(rule, subset))
    return out


def apply_non_una(program: Program, query_rules: Iterable[Rule] = (),
                  cfg: EqualityConfig = EqualityConfig()) -> Program:
    query_rules = list(query_rules)
    if not program.rules and not query_rules:
        raise ConfigError("non-UNA mode requires an ontology or a query")
    rules = equality_rules(cfg)
    for r in [*program.rules, *query_rules]:
        if r.head.pred in (NO_START, SAME_COMP):
            raise ValueError(f"rule defines a reserved equality predicate: {r}")
        rules.extend(rewrite_rule_joins(r, cfg))
    return Program(list(dict.fromkeys(rules)), list(program.facts))
