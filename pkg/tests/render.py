"""Text renderings of rewriting results, compared against files in ``golden/``."""

from __future__ import annotations

import re
from pathlib import Path

from rl2datalog.dl import CI, All, And, AtLeast, AtMost, Atomic, BOTTOM, Role, Some
from rl2datalog.rewrite import FreshNamer, Naming, normalize_fixups, structural_transform

GOLDEN = Path(__file__).parent / "golden"

A = Atomic
r, s, t, u = Role("r"), Role("s"), Role("t"), Role("u")

# ∃r.(∃s.(C⊓D)) ⊓ ≥1t.(E⊓∃u⁻.F) ⊑ A
ELI_CI = CI(And((Some(r, Some(s, And((A("C"), A("D"))))),
                 AtLeast(1, t, And((A("E"), Some(u.inverse(), A("F"))))))), A("A"))

# ∃r.(B⊓C) ⊑ ∀s⁻.D
EXAMPLE_CI = CI(Some(r, And((A("B"), A("C")))), All(s.inverse(), A("D")))

A12 = And((A("A1"), A("A2")))
TABLE_ROWS = [
    CI(A12, BOTTOM),
    CI(A12, A("A")),
    CI(A12, All(r, A("A"))),
    CI(A12, AtMost(1, r, A("A"))),
    CI(A("A1"), All(r.inverse(), A("A"))),
]


def golden(name: str) -> str:
    return (GOLDEN / name).read_text(encoding="utf-8")


def render_normalization(ci: CI, enhanced: bool) -> str:
    namer = FreshNamer(name_everything=not enhanced)
    shallow = structural_transform([ci], namer, enhanced)
    fixed = normalize_fixups(shallow)
    labels = {a.name: f"A[{c}]" for c, a in namer.memo.items()}

    def show(x: CI) -> str:
        return re.sub(r"aux_\d+", lambda m: labels[m.group(0)], str(x))

    mode = "enhanced" if enhanced else "unenhanced"
    lines = [f"# {mode}: structural transformation ({len(shallow)} axioms)"]
    lines += sorted(show(x) for x in shallow)
    lines.append(f"# {mode}: normalized ({len(fixed)} axioms)")
    lines += sorted(show(x) for x in fixed)
    return "\n".join(lines) + "\n"


def render_table_rows() -> str:
    from rl2datalog.rewrite import translate_normalized_ci
    naming = Naming()
    return "".join(f"{ci}\t{translate_normalized_ci(ci, naming)}\n" for ci in TABLE_ROWS)


def render_eli() -> str:
    from rl2datalog.rewrite import translate_direct_ci
    return "".join(f"{rule}\n" for rule in translate_direct_ci(ELI_CI, Naming()))
