"""Ground terms, their total order, and IRI -> predicate-name mangling."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

XSD = "http://www.w3.org/2001/XMLSchema#"
XSD_STRING = XSD + "string"
XSD_INTEGER = XSD + "integer"

STRING = "string"
INTEGER = "integer"

RESERVED_PREDICATES = frozenset(
    {"sameAs", "sameComp", "noStart", "top", "inconsistent", "ans"}
)
# generated names live under these prefixes; user vocabulary must never land there
RESERVED_PREFIXES = ("ans_", "aux_")

_WS = re.compile(r"\s")
_NON_IDENT = re.compile(r"[^A-Za-z0-9_]")


@dataclass(frozen=True, slots=True)
class Iri:
    value: str

    def __post_init__(self) -> None:
        if not self.value or _WS.search(self.value):
            raise ValueError(f"invalid IRI: {self.value!r}")

    def __hash__(self) -> int:
        # str caches its hash; the generated tuple hash showed up in profiles
        return hash(self.value)

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, slots=True)
class Literal:
    lexical: str
    datatype: str = STRING

    def __post_init__(self) -> None:
        if self.datatype == INTEGER:
            # canonical lexical form so that equal values are equal objects
            object.__setattr__(self, "lexical", str(int(self.lexical.strip())))
        elif self.datatype != STRING:
            raise ValueError(f"unsupported literal datatype: {self.datatype!r}")

    def __hash__(self) -> int:
        return hash((self.lexical, self.datatype))

    @classmethod
    def integer(cls, value: int) -> "Literal":
        return cls(str(value), INTEGER)

    @property
    def value(self) -> int | str:
        return int(self.lexical) if self.datatype == INTEGER else self.lexical

    def __str__(self) -> str:
        if self.datatype == INTEGER:
            return self.lexical
        return '"' + self.lexical + '"'


GroundTerm = Union[Iri, Literal]


def term_key(t: GroundTerm) -> tuple:
    """Sort key realising the global order: individuals < integers < strings.

    Python compares ``str`` by code point, which coincides with byte-wise
    comparison of the UTF-8 encoding.
    """
    if isinstance(t, Iri):
        return (0, t.value)
    if t.datatype == INTEGER:
        return (1, int(t.lexical))
    return (2, t.lexical)


def compare_terms(a: GroundTerm, b: GroundTerm) -> int:
    """Return -1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``."""
    ka, kb = term_key(a), term_key(b)
    return (ka > kb) - (ka < kb)


def _escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")


def _unescape(s: str) -> str:
    out = []
    it = iter(s)
    for ch in it:
        if ch == "\\":
            nxt = next(it, "")
            out.append("\n" if nxt == "n" else nxt)
        else:
            out.append(ch)
    return "".join(out)


def term_to_asp(t: GroundTerm) -> str:
    """Serialise a constant the way it appears in ``.asp`` output."""
    if isinstance(t, Iri):
        return '"' + _escape(t.value) + '"'
    if t.datatype == INTEGER:
        return t.lexical
    return '"s_' + _escape(t.lexical) + '"'


def term_from_asp(text: str) -> GroundTerm:
    """Inverse of :func:`term_to_asp`."""
    if text.startswith('"') and text.endswith('"') and len(text) >= 2:
        body = _unescape(text[1:-1])
        if body.startswith("s_"):
            return Literal(body[2:], STRING)
        return Iri(body)
    return Literal(text, INTEGER)


def iri_fragment(iri: str) -> str:
    cut = max(iri.rfind("#"), iri.rfind("/"))
    return iri[cut + 1:]


@dataclass
class SymbolTable:
    """Bijective IRI <-> predicate-name map filled in insertion order."""

    forward: dict[str, str] = field(default_factory=dict)
    reverse: dict[str, str] = field(default_factory=dict)

    def __contains__(self, iri: object) -> bool:
        return str(iri) in self.forward

    def iri_of(self, name: str) -> str | None:
        return self.reverse.get(name)


def _base_name(iri: str) -> str:
    frag = iri_fragment(iri)
    if frag:
        frag = frag[0].lower() + frag[1:]
    name = _NON_IDENT.sub("_", frag)
    if (
        not name
        or not name[0].isalpha()
        or name in RESERVED_PREDICATES
        or name.startswith(RESERVED_PREFIXES)
    ):
        name = "p_" + name
    return name


def mangle_predicate(iri: Iri | str, table: SymbolTable) -> str:
    iri = str(iri)
    known = table.forward.get(iri)
    if known is not None:
        return known
    base = _base_name(iri)
    name, k = base, 1
    while name in table.reverse:
        k += 1
        name = f"{base}_{k}"
    table.forward[iri] = name
    table.reverse[name] = iri
    return name
