"""Bottom-up evaluation of the generated programs."""

from .evaluator import (
    EvalStats, Model, answer_query, materialize, materialize_with_equality, same_as_cliques,
)
from . import kernel
from .naive import naive_materialize

__all__ = [
    "kernel", "EvalStats", "Model", "answer_query", "materialize",
    "materialize_with_equality", "naive_materialize", "same_as_cliques",
]
