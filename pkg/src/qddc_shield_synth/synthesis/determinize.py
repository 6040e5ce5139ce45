from __future__ import annotations

import logging

from qddc_shield_synth.automata.dfa import explore, minimize
from qddc_shield_synth.constants import DEFAULT_MAX_STATES
from qddc_shield_synth.synthesis.supervisor import Controller, OutputOrder, Supervisor

logger = logging.getLogger(__name__)


def determinize(sup: Supervisor, order: OutputOrder, max_states: int = DEFAULT_MAX_STATES) -> Controller:
    """Det_ord: per state and input keep only the best allowed output under `order`."""
    io = sup.io
    choice: dict[tuple[int, int], int] = {}
    for q in sup.live_states():
        for i in range(io.num_inputs):
            allowed = sup.allowed_outputs(q, i)
            if allowed:
                choice[(q, i)] = order.ranked(io.outputs, allowed)[0]

    def step(key, x):
        if key == "reject" or key == sup.reject:
            return "reject"
        i, o = io.split(x)
        return sup.dfa.delta[key][x] if choice.get((key, i)) == o else "reject"

    init = sup.dfa.init
    dfa = minimize(explore(io.vars, init, step, lambda key: key not in (init, "reject"), max_states))
    logger.debug("determinize by %r: %d -> %d states", str(order), sup.num_states, dfa.num_states)
    sinks = [q for q in range(dfa.num_states) if q != dfa.init and not dfa.accepting[q]]
    return Controller(dfa, io, sinks[0] if sinks else None)
