"""Description-logic model: roles, concepts, axioms, polarity and CI classes."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

from .terms import GroundTerm, Iri


@dataclass(frozen=True, slots=True)
class Role:
    name: str
    inverted: bool = False

    def inverse(self) -> "Role":
        return Role(self.name, not self.inverted)

    def __str__(self) -> str:
        return _short(self.name) + ("⁻" if self.inverted else "")


def inverse_role(r: Role) -> Role:
    return r.inverse()


class Concept:
    """Base of the concept AST. Subclasses are frozen dataclasses."""

    __slots__ = ()

    def children(self) -> tuple["Concept", ...]:
        return ()


@dataclass(frozen=True, slots=True)
class Top(Concept):
    def __str__(self) -> str:
        return "⊤"


@dataclass(frozen=True, slots=True)
class Bottom(Concept):
    def __str__(self) -> str:
        return "⊥"


@dataclass(frozen=True, slots=True)
class Atomic(Concept):
    """Named concept. ``fresh`` marks names introduced by normalization."""

    name: str
    fresh: bool = False

    def __str__(self) -> str:
        return self.name if self.fresh else _short(self.name)


@dataclass(frozen=True, slots=True)
class Not(Concept):
    arg: Concept

    def children(self) -> tuple[Concept, ...]:
        return (self.arg,)

    def __str__(self) -> str:
        return f"¬{_paren(self.arg)}"


@dataclass(frozen=True, slots=True)
class And(Concept):
    args: tuple[Concept, ...]

    def __post_init__(self) -> None:
        if len(self.args) < 2:
            raise ValueError("And needs at least two arguments")

    def children(self) -> tuple[Concept, ...]:
        return self.args

    def __str__(self) -> str:
        return " ⊓ ".join(_paren(a) for a in self.args)


@dataclass(frozen=True, slots=True)
class Or(Concept):
    args: tuple[Concept, ...]

    def __post_init__(self) -> None:
        if len(self.args) < 2:
            raise ValueError("Or needs at least two arguments")

    def children(self) -> tuple[Concept, ...]:
        return self.args

    def __str__(self) -> str:
        return " ⊔ ".join(_paren(a) for a in self.args)


@dataclass(frozen=True, slots=True)
class All(Concept):
    role: Role
    filler: Concept

    def children(self) -> tuple[Concept, ...]:
        return (self.filler,)

    def __str__(self) -> str:
        return f"∀{self.role}.{_paren(self.filler)}"


@dataclass(frozen=True, slots=True)
class Some(Concept):
    role: Role
    filler: Concept

    def children(self) -> tuple[Concept, ...]:
        return (self.filler,)

    def __str__(self) -> str:
        return f"∃{self.role}.{_paren(self.filler)}"


@dataclass(frozen=True, slots=True)
class AtLeast(Concept):
    n: int
    role: Role
    filler: Concept

    def children(self) -> tuple[Concept, ...]:
        return (self.filler,)

    def __str__(self) -> str:
        return f"≥{self.n}{self.role}.{_paren(self.filler)}"


@dataclass(frozen=True, slots=True)
class AtMost(Concept):
    n: int
    role: Role
    filler: Concept

    def children(self) -> tuple[Concept, ...]:
        return (self.filler,)

    def __str__(self) -> str:
        return f"≤{self.n}{self.role}.{_paren(self.filler)}"


TOP = Top()
BOTTOM = Bottom()


def _short(iri: str) -> str:
    cut = max(iri.rfind("#"), iri.rfind("/"))
    return iri[cut + 1:] or iri


def _paren(c: Concept) -> str:
    return f"({c})" if isinstance(c, (And, Or)) else str(c)


def conj(args: Iterable[Concept]) -> Concept:
    """Build a flattened conjunction; ⊤ conjuncts vanish, duplicates collapse."""
    flat: list[Concept] = []
    for a in args:
        for b in a.args if isinstance(a, And) else (a,):
            if b != TOP and b not in flat:
                flat.append(b)
    if not flat:
        return TOP
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def disj(args: Iterable[Concept]) -> Concept:
    flat: list[Concept] = []
    for a in args:
        for b in a.args if isinstance(a, Or) else (a,):
            if b not in flat:
                flat.append(b)
    if not flat:
        return BOTTOM
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


def conjuncts(c: Concept) -> tuple[Concept, ...]:
    return c.args if isinstance(c, And) else (c,)


def subconcepts(c: Concept) -> Iterator[Concept]:
    """Pre-order, left-to-right traversal including ``c`` itself."""
    yield c
    for ch in c.children():
        yield from subconcepts(ch)


def is_exists(c: Concept) -> bool:
    return isinstance(c, Some) or (isinstance(c, AtLeast) and c.n == 1)


# -- axioms -----------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class CI:
    sub: Concept
    sup: Concept

    def __str__(self) -> str:
        return f"{self.sub} ⊑ {self.sup}"


@dataclass(frozen=True, slots=True)
class RI:
    sub: Role
    sup: Role

    def __str__(self) -> str:
        return f"{self.sub} ⊑ {self.sup}"


@dataclass(frozen=True, slots=True)
class Trans:
    role: Role

    def __str__(self) -> str:
        return f"trans({self.role})"


Axiom = Union[CI, RI, Trans]


def _dedup(items):
    return list(dict.fromkeys(items))


@dataclass
class TBox:
    cis: list[CI] = field(default_factory=list)
    ris: list[RI] = field(default_factory=list)
    trans: list[Trans] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.cis = _dedup(self.cis)
        self.ris = _dedup(self.ris)
        self.trans = _dedup(self.trans)

    def add(self, ax: Axiom) -> None:
        bucket = {CI: self.cis, RI: self.ris, Trans: self.trans}[type(ax)]
        if ax not in bucket:
            bucket.append(ax)

    def extend(self, other: "TBox") -> None:
        for ax in [*other.cis, *other.ris, *other.trans]:
            self.add(ax)

    def __len__(self) -> int:
        return len(self.cis) + len(self.ris) + len(self.trans)


@dataclass
class ABox:
    concept_asserts: set[tuple[str, GroundTerm]] = field(default_factory=set)
    role_asserts: set[tuple[str, GroundTerm, GroundTerm]] = field(default_factory=set)
    same_as: set[tuple[GroundTerm, GroundTerm]] = field(default_factory=set)

    def add_same_as(self, a: GroundTerm, b: GroundTerm) -> None:
        if not (isinstance(a, Iri) and isinstance(b, Iri)):
            raise ValueError("sameAs relates individuals only")
        self.same_as.add((a, b))

    def extend(self, other: "ABox") -> None:
        self.concept_asserts |= other.concept_asserts
        self.role_asserts |= other.role_asserts
        self.same_as |= other.same_as

    def __len__(self) -> int:
        return len(self.concept_asserts) + len(self.role_asserts) + len(self.same_as)


# -- polarity ---------------------------------------------------------------


class Polarity(enum.Flag):
    POSITIVE = enum.auto()
    NEGATIVE = enum.auto()
    BOTH = POSITIVE | NEGATIVE


def _flip(p: Polarity) -> Polarity:
    return Polarity.NEGATIVE if p == Polarity.POSITIVE else Polarity.POSITIVE


def occurrences(c: Concept, pol: Polarity) -> Iterator[tuple[Concept, Polarity]]:
    """Every sub-concept occurrence of ``c`` with its polarity, pre-order."""
    yield c, pol
    child_pol = _flip(pol) if isinstance(c, (Not, AtMost)) else pol
    for ch in c.children():
        yield from occurrences(ch, child_pol)


def ci_occurrences(ci: CI) -> Iterator[tuple[Concept, Polarity]]:
    yield from occurrences(ci.sub, Polarity.NEGATIVE)
    yield from occurrences(ci.sup, Polarity.POSITIVE)


def polarity_map(tbox: TBox | Iterable[CI]) -> dict[Concept, Polarity]:
    cis = tbox.cis if isinstance(tbox, TBox) else tbox
    out: dict[Concept, Polarity] = {}
    for ci in cis:
        for c, p in ci_occurrences(ci):
            out[c] = out.get(c, p) | p
    return out


# -- classification ---------------------------------------------------------


class CIClass(enum.Enum):
    TRIVIAL_DROP = "trivial-drop"
    DIRECT = "direct"
    NORMALIZED = "normalized"
    NEEDS_NORMALIZATION = "needs-normalization"


def is_tautology(c: Concept) -> bool:
    """True for superconcepts every individual satisfies."""
    if isinstance(c, Top):
        return True
    if isinstance(c, And):
        return all(is_tautology(a) for a in c.args)
    if isinstance(c, All):
        return is_tautology(c.filler)
    if isinstance(c, Not):
        return isinstance(c.arg, Bottom)
    if isinstance(c, AtMost):
        return isinstance(c.filler, Bottom)
    return False


def is_eli(c: Concept) -> bool:
    if isinstance(c, (Top, Atomic)):
        return True
    if isinstance(c, And):
        return all(is_eli(a) for a in c.args)
    if is_exists(c):
        return is_eli(c.filler)
    return False


def is_atomic_conj(c: Concept) -> bool:
    """⊓Aᵢ with every Aᵢ atomic; ⊤ counts as the empty conjunction."""
    return isinstance(c, (Top, Atomic)) or (
        isinstance(c, And) and all(isinstance(a, Atomic) for a in c.args)
    )


def is_normalized_rhs(c: Concept) -> bool:
    if isinstance(c, (Bottom, Atomic)):
        return True
    if isinstance(c, All):
        return isinstance(c.filler, (Atomic, Bottom))
    if isinstance(c, AtMost):
        return c.n == 1 and isinstance(c.filler, (Atomic, Top))
    return False


def is_direct(ci: CI) -> bool:
    subs = ci.sub.args if isinstance(ci.sub, Or) else (ci.sub,)
    if not all(is_eli(s) for s in subs):
        return False
    return all(isinstance(a, Atomic) for a in conjuncts(ci.sup))


def is_normalized(ci: CI) -> bool:
    return is_atomic_conj(ci.sub) and is_normalized_rhs(ci.sup)


def classify_ci(ci: CI) -> CIClass:
    if is_tautology(ci.sup) or any(isinstance(c, Bottom) for c in conjuncts(ci.sub)):
        return CIClass.TRIVIAL_DROP
    if is_direct(ci):
        return CIClass.DIRECT
    if is_normalized(ci):
        return CIClass.NORMALIZED
    return CIClass.NEEDS_NORMALIZATION
