"""Rewrite OWL 2 RL knowledge bases and SPARQL BGP queries into Datalog."""

from .datalog import Program, Rule, serialize_program, stratify
from .engine import answer_query, materialize, materialize_with_equality, naive_materialize
from .owl import check_rl_profile, parse_functional, parse_tbox
from .rdfdata import parse_abox
from .rewrite import Rewriter, rewrite_knowledge_base
from .sameas import EqualityConfig, apply_non_una, equality_rules, rewrite_rule_joins
from .sparql import parse_sparql_bgp, translate_bgp
from .terms import Iri, Literal, SymbolTable

__version__ = "0.1.0"

__all__ = [
    "EqualityConfig", "Iri", "Literal", "Program", "Rewriter", "Rule", "SymbolTable",
    "answer_query", "apply_non_una", "check_rl_profile", "equality_rules", "materialize",
    "materialize_with_equality", "naive_materialize", "parse_abox", "parse_functional",
    "parse_sparql_bgp", "parse_tbox", "rewrite_knowledge_base", "rewrite_rule_joins",
    "serialize_program", "stratify", "translate_bgp",
]
