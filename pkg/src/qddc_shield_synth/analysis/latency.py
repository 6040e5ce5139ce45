from __future__ import annotations

import logging
from typing import Literal, Optional

import networkx as nx
from pydantic import BaseModel

from qddc_shield_synth.automata.compiler import compile
from qddc_shield_synth.automata.dfa import is_prefix_closed
from qddc_shield_synth.constants import DEFAULT_MAX_STATES
from qddc_shield_synth.errors import NotPrefixClosedError
from qddc_shield_synth.qddc.ast import Qddc, to_text
from qddc_shield_synth.qddc.parser import parse
from qddc_shield_synth.shield.model import ShieldModel

logger = logging.getLogger(__name__)

BURST_DEVIATION = "[[SSEOK && Deviation]]"


class LatencyResult(BaseModel):
    kind: Literal["finite", "infinite", "undefined"]
    value: Optional[int] = None

    @classmethod
    def finite(cls, n: int) -> "LatencyResult":
        return cls(kind="finite", value=n)

    @classmethod
    def infinite(cls) -> "LatencyResult":
        return cls(kind="infinite")

    @classmethod
    def undefined(cls) -> "LatencyResult":
        return cls(kind="undefined")

    def __str__(self) -> str:
        if self.kind == "finite":
            return str(self.value)
        return "∞" if self.kind == "infinite" else "undefined"


def maxlen(model: ShieldModel, d: Qddc, max_states: int = DEFAULT_MAX_STATES) -> LatencyResult:
    """Length e-b of the longest interval satisfying prefix-closed `d` in any execution.

    Lengths count steps between the interval's end points, so an interval of
    n+1 cycles has length n: a two-cycle burst of deviations is Finite(1).
    `deviation_latency` maps Finite(n) to n+1 cycles and Undefined to 0.
    Infinite means some execution satisfies `d` on an unbounded interval.
    """
    monitor = compile(d, model.vars, max_states)
    if not is_prefix_closed(monitor):
        raise NotPrefixClosedError(f"maxlen needs a prefix-closed formula; {to_text(d)} is not.")

    g = nx.DiGraph()
    starts = [(s, monitor.init) for s in model.reachable()]
    frontier = list(starts)
    seen = set(starts)
    while frontier:
        node = frontier.pop()
        joint, q = node
        for mv in model.moves(joint):
            q_next = monitor.delta[q][mv.letter]
            if not monitor.accepting[q_next]:
                continue
            nxt = (mv.target, q_next)
            g.add_edge(node, nxt)
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)

    if g.number_of_edges() == 0:
        return LatencyResult.undefined()
    if not nx.is_directed_acyclic_graph(g):
        return LatencyResult.infinite()
    edges = nx.dag_longest_path_length(g)
    logger.debug("maxlen: %d nodes, longest path %d edges", g.number_of_nodes(), edges)
    return LatencyResult.finite(edges - 1)


def deviation_latency(model: ShieldModel, max_states: int = DEFAULT_MAX_STATES) -> LatencyResult:
    """Most consecutive cycles with SSEOK && Deviation: 0 if never, infinite if unbounded."""
    result = maxlen(model, parse(BURST_DEVIATION, model.vars), max_states)
    if result.kind == "undefined":
        return LatencyResult.finite(0)
    if result.kind == "infinite":
        return result
    return LatencyResult.finite(result.value + 1)
