"""Command-line front end: read ontology, data and query files, write ``.asp`` files."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .datalog import Program, Rule, serialize_program
from .dl import TBox
from .engine import answer_query, materialize, materialize_with_equality
from .errors import (
    ConfigError, ParseError, RlProfileError, StratificationError, UnsafeRuleError,
    UnsupportedConstructError,
)
from .owl import parse_tbox
from .rdfdata import parse_abox
from .rewrite import Rewriter
from .sameas import DEFAULT_N, EqualityConfig, apply_non_una, equality_rules
from .sparql import parse_sparql_bgp, translate_bgp
from .terms import SymbolTable, term_key, term_to_asp

log = logging.getLogger("rl2datalog")

EXIT_OK, EXIT_INPUT, EXIT_RL, EXIT_UNSUPPORTED, EXIT_CONFIG = 0, 2, 3, 4, 5

TBOX_EXT = {".owl": "functional", ".ofn": "functional"}
ABOX_EXT = {".owl": "functional", ".ofn": "functional", ".ttl": "turtle", ".nt": "ntriples"}
QUERY_EXT = {".sparql": "sparql", ".rq": "sparql"}


@dataclass
class RunConfig:
    tbox_paths: list[Path] = field(default_factory=list)
    abox_paths: list[Path] = field(default_factory=list)
    query_paths: list[Path] = field(default_factory=list)
    out_dir: Path = Path(".")
    same_as: int | None = None
    eval_mode: str = "none"
    expand_answers: bool = False

    def validate(self) -> None:
        if not (self.tbox_paths or self.abox_paths or self.query_paths):
            raise ConfigError("no input given: use --tbox, --abox or --query")
        if self.same_as is not None:
            if self.same_as < 0:
                raise ConfigError("--same-as expects a non-negative N")
            if not (self.tbox_paths or self.query_paths):
                raise ConfigError("non-UNA mode requires an ontology or a query")
        if self.eval_mode not in ("none", "materialize"):
            raise ConfigError(f"unknown evaluation mode {self.eval_mode!r}")


def discover(paths: list[Path], extensions: dict[str, str], kind: str) -> list[tuple[Path, str]]:
    """Expand folders into their recognised files; files keep their given order."""
    out: list[tuple[Path, str]] = []
    for p in paths:
        if p.is_dir():
            found = sorted(f for f in p.rglob("*") if f.is_file() and f.suffix.lower() in extensions)
            if not found:
                log.warning("no %s files found in %s", kind, p)
            out.extend((f, extensions[f.suffix.lower()]) for f in found)
        elif p.is_file():
            fmt = extensions.get(p.suffix.lower())
            if fmt is None:
                raise ParseError(f"unrecognised {kind} file extension {p.suffix!r}", source=str(p))
            out.append((p, fmt))
        else:
            raise ParseError(f"no such file or directory: {p}")
    return out


class _Names:
    """Output names mirroring input stems, disambiguated on collision."""

    def __init__(self) -> None:
        self.used: set[str] = set()

    def __call__(self, stem: str, suffix: str) -> str:
        name, k = f"{stem}{suffix}", 1
        while name in self.used:
            k += 1
            name = f"{stem}_{k}{suffix}"
        self.used.add(name)
        return name


def _write(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8")
    log.info("wrote %s", path)


def run(cfg: RunConfig) -> int:
    cfg.validate()
    tbox_files = discover(cfg.tbox_paths, TBOX_EXT, "TBox")
    abox_files = discover(cfg.abox_paths, ABOX_EXT, "ABox")
    query_files = discover(cfg.query_paths, QUERY_EXT, "query")
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    names = _Names()
    symbols = SymbolTable()
    rewriter = Rewriter(symbols)

    # TBox: check the union first so polarities and fresh names are global
    parsed = []
    for path, fmt in tbox_files:
        kb = parse_tbox(path.read_text(encoding="utf-8"), fmt, source=str(path))
        if len(kb.abox):
            log.warning("%s: ignoring %d assertion(s) in a TBox file; pass it with --abox",
                        path, len(kb.abox))
        parsed.append((path, kb))
    union = TBox()
    for _, kb in parsed:
        union.extend(kb.tbox)
    rewriter.prepare(union)
    per_file = [(path, kb, rewriter.rewrite_tbox(kb.tbox)) for path, kb in parsed]
    tbox_rules = [r for _, _, rules in per_file for r in rules]
    support = rewriter.support_rules(tbox_rules)
    support_placed = False
    for path, kb, rules in per_file:
        if support and not support_placed:
            rules = rules + support
            support_placed = True
        text = serialize_program(Program(rules), symbols, kb.prefixes, f"TBox rewriting of {path.name}")
        _write(out / names(path.stem, ".tbox.asp"), text)
    tbox_rules += support

    facts = []
    for i, (path, fmt) in enumerate(abox_files):
        abox = parse_abox(path.read_text(encoding="utf-8"), fmt, source=str(path),
                          bnode_scope=f"f{i}_")
        file_facts = rewriter.translate_abox(abox)
        facts.extend(file_facts)
        _write(out / names(path.stem, ".abox.asp"),
               serialize_program(Program([], file_facts), symbols, None, f"facts from {path.name}"))

    query_rules: list[Rule] = []
    for path, _ in query_files:
        queries = parse_sparql_bgp(path.read_text(encoding="utf-8"))
        rules = [translate_bgp(q, len(query_rules) + k + 1, symbols) for k, q in enumerate(queries)]
        query_rules.extend(rules)
        prefixes = queries[0].prefixes if queries else None
        _write(out / names(path.stem, ".query.asp"),
               serialize_program(Program(rules), symbols, prefixes, f"queries from {path.name}"))

    if cfg.same_as is not None:
        eq_cfg = EqualityConfig(cfg.same_as)
        program = apply_non_una(Program(tbox_rules), query_rules, eq_cfg)
        originals = set(tbox_rules) | set(query_rules)
        eq_part = equality_rules(eq_cfg) + [r for r in program.rules[len(equality_rules(eq_cfg)):]
                                           if r not in originals]
        stem = (tbox_files or query_files)[0][0].stem
        _write(out / names(stem, ".eq.asp"),
               serialize_program(Program(eq_part), symbols, None,
                                 f"equality rules (N={cfg.same_as}) and relaxed joins"))
        program = Program(program.rules, facts)
    else:
        program = Program(tbox_rules + query_rules, facts)

    if cfg.eval_mode == "materialize":
        model = (materialize_with_equality(program) if cfg.same_as is not None
                 else materialize(program))
        counts = {}
        for i in range(1, len(query_rules) + 1):
            answers = answer_query(model, i, expand=cfg.expand_answers)
            rows = sorted(answers, key=lambda t: tuple(term_key(x) for x in t))
            _write(out / f"answers-{i}.tsv",
                   "".join("\t".join(term_to_asp(x) for x in row) + "\n" for row in rows))
            counts[f"ans_{i}"] = len(rows)
        summary = {"inconsistent": model.inconsistent, "answers": counts, **model.stats.as_dict()}
        if model.inconsistent:
            log.warning("the knowledge base is inconsistent")
        print(json.dumps(summary, sort_keys=True))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="rl2datalog",
        description="Rewrite OWL 2 RL ontologies, RDF data and SPARQL BGP queries into Datalog.")
    ap.add_argument("--tbox", action="append", type=Path, default=[], metavar="PATH",
                    help="ontology file or folder (.owl/.ofn, functional syntax); repeatable")
    ap.add_argument("--abox", action="append", type=Path, default=[], metavar="PATH",
                    help="data file or folder (.owl/.ofn/.ttl/.nt); repeatable")
    ap.add_argument("--query", action="append", type=Path, default=[], metavar="PATH",
                    help="SPARQL file or folder (.sparql/.rq); repeatable")
    ap.add_argument("--out", type=Path, default=Path("."), metavar="DIR",
                    help="output folder (default: current directory)")
    ap.add_argument("--same-as", type=int, nargs="?", const=DEFAULT_N, default=None, metavar="N",
                    help=f"drop the unique name assumption; N bounds noStart paths (default {DEFAULT_N})")
    ap.add_argument("--eval", dest="eval_mode", choices=["none", "materialize"], default="none",
                    help="evaluate the program and write answers-<i>.tsv (default: none)")
    ap.add_argument("--expand-answers", action="store_true",
                    help="close answers under sameAs cliques")
    ap.add_argument("-v", "--verbose", action="store_true", help="log written files")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    cfg = RunConfig(args.tbox, args.abox, args.query, args.out, args.same_as,
                    args.eval_mode, args.expand_answers)
    try:
        return run(cfg)
    except RlProfileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RL
    except (UnsupportedConstructError, UnsafeRuleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (ConfigError, StratificationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ParseError, OSError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
