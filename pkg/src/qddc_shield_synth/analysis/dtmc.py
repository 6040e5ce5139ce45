"""Uniform-input Markov chain of a shield in product with a formula monitor.

Every letter over I and O is equally likely at every step. The expected
value of a formula is the long-run probability of being in a state whose
monitor component accepts.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Union

import networkx as nx

from qddc_shield_synth.analysis.linalg import solve
from qddc_shield_synth.automata.compiler import compile
from qddc_shield_synth.constants import DEFAULT_MAX_STATES
from qddc_shield_synth.errors import CapacityError
from qddc_shield_synth.qddc.ast import Qddc
from qddc_shield_synth.shield.model import ShieldModel

logger = logging.getLogger(__name__)

Number = Union[Fraction, float]


@dataclass(frozen=True)
class Dtmc:
    keys: list[Hashable]
    transitions: list[dict[int, Fraction]]
    labels: list[bool]
    init: int = 0

    @property
    def num_states(self) -> int:
        return len(self.keys)

    @property
    def num_transitions(self) -> int:
        return sum(len(row) for row in self.transitions)

    def graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(self.num_states))
        for s, row in enumerate(self.transitions):
            g.add_edges_from((s, t) for t in row)
        return g

    def bottom_sccs(self) -> list[list[int]]:
        g = self.graph()
        cond = nx.condensation(g)
        return [
            sorted(cond.nodes[c]["members"])
            for c in nx.topological_sort(cond)
            if cond.out_degree(c) == 0
        ]


def build_dtmc(model: ShieldModel, d: Qddc, max_states: int = DEFAULT_MAX_STATES) -> Dtmc:
    """Reachable product of the shield with compile(d) under uniform inputs."""
    monitor = compile(d, model.vars, max_states)
    p = Fraction(1, model.num_inputs)
    init = (model.init, monitor.init)
    index = {init: 0}
    keys: list = [init]
    transitions: list[dict[int, Fraction]] = []
    queue = deque([init])
    while queue:
        key = queue.popleft()
        joint, q = key
        row: dict[int, Fraction] = {}
        for mv in model.moves(joint):
            nxt = (mv.target, monitor.delta[q][mv.letter])
            t = index.get(nxt)
            if t is None:
                if len(keys) >= max_states:
                    raise CapacityError(f"Markov chain exceeds the state cap of {max_states}.")
                t = index[nxt] = len(keys)
                keys.append(nxt)
                queue.append(nxt)
            row[t] = row.get(t, Fraction(0)) + p
        transitions.append(row)
    labels = [monitor.accepting[q] for _, q in keys]
    logger.debug("dtmc: %d states, %d transitions", len(keys), sum(len(r) for r in transitions))
    return Dtmc(keys, transitions, labels)


def stationary(m: Dtmc, members: list[int], exact: bool = True) -> dict[int, Number]:
    """Stationary distribution of a closed class."""
    local = {s: i for i, s in enumerate(members)}
    n = len(members)
    one = Fraction(1) if exact else 1.0
    zero = Fraction(0) if exact else 0.0
    a = [[zero] * n for _ in range(n)]
    for s in members:
        for t, p in m.transitions[s].items():
            a[local[t]][local[s]] += p if exact else float(p)
    for i in range(n):
        a[i][i] -= one
    a[-1] = [one] * n
    b = [zero] * (n - 1) + [one]
    pi = solve(a, b, exact)
    return {s: pi[local[s]] for s in members}


def expected_value(m: Dtmc, exact: bool = True) -> Number:
    """Long-run probability of accepting states from the initial state."""
    bottoms = m.bottom_sccs()
    value: dict[int, Number] = {}
    for members in bottoms:
        pi = stationary(m, members, exact)
        v = sum((pi[s] for s in members if m.labels[s]), Fraction(0) if exact else 0.0)
        for s in members:
            value[s] = v
    logger.debug("dtmc: %d bottom SCCs, values %s", len(bottoms), sorted(set(map(str, value.values()))))

    transient = [s for s in range(m.num_states) if s not in value]
    if not transient:
        return value[m.init]

    # v(s) - sum_{t transient} P(s,t) v(t) = sum_{t bottom} P(s,t) value(t)
    local = {s: i for i, s in enumerate(transient)}
    n = len(transient)
    one = Fraction(1) if exact else 1.0
    zero = Fraction(0) if exact else 0.0
    a = [[zero] * n for _ in range(n)]
    b = [zero] * n
    for s in transient:
        i = local[s]
        a[i][i] += one
        for t, p in m.transitions[s].items():
            p = p if exact else float(p)
            if t in local:
                a[i][local[t]] -= p
            else:
                b[i] += p * value[t]
    v = solve(a, b, exact)
    return v[local[m.init]] if m.init in local else value[m.init]
