"""Python bindings for the ddcid critical-point explorer."""

from ._ddcid import (
    EvaluationError,
    Potential,
    classify,
    eigendecompose,
    explore,
    known_global_minimum,
    list_problems,
    make_problem,
    metropolis_accept,
    minimize,
    run_benchmark,
    saddle_search,
)

__all__ = [
    "EvaluationError",
    "Potential",
    "classify",
    "eigendecompose",
    "explore",
    "known_global_minimum",
    "list_problems",
    "make_problem",
    "metropolis_accept",
    "minimize",
    "run_benchmark",
    "saddle_search",
]
