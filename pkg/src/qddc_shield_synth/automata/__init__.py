from qddc_shield_synth.automata.compiler import compile
from qddc_shield_synth.automata.dfa import (
    Dfa,
    Nfa,
    accepting_row,
    accepts,
    complement,
    counterexample,
    equivalent,
    explore,
    intersect,
    is_empty,
    is_prefix_closed,
    is_subset,
    lift,
    minimize,
    product,
    project_determinize,
    run,
    union,
)

__all__ = [
    "Dfa",
    "Nfa",
    "accepting_row",
    "accepts",
    "compile",
    "complement",
    "counterexample",
    "equivalent",
    "explore",
    "intersect",
    "is_empty",
    "is_prefix_closed",
    "is_subset",
    "lift",
    "minimize",
    "product",
    "project_determinize",
    "run",
    "union",
]
