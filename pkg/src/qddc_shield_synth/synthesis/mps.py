from __future__ import annotations

import logging

from qddc_shield_synth.automata.dfa import Dfa, explore, minimize
from qddc_shield_synth.constants import DEFAULT_MAX_STATES
from qddc_shield_synth.synthesis.supervisor import IoPartition, Supervisor, Unrealizable

logger = logging.getLogger(__name__)

_START = "start"
_REJECT = "reject"


def winning_region(hard: Dfa, io: IoPartition) -> set[int]:
    """Greatest set W of accepting states where every input has an output staying in W."""
    win = {q for q in hard.reachable() if hard.accepting[q]}
    iterations = 0
    while True:
        iterations += 1
        keep = {
            q
            for q in win
            if all(
                any(hard.delta[q][io.letter(i, o)] in win for o in range(io.num_outputs))
                for i in range(io.num_inputs)
            )
        }
        if keep == win:
            break
        win = keep
    logger.debug("mps fixpoint: %d winning states after %d iterations", len(win), iterations)
    return win


def mps(hard: Dfa, io: IoPartition, max_states: int = DEFAULT_MAX_STATES) -> Supervisor | Unrealizable:
    """Maximally permissive supervisor for the invariance of `hard`.

    The game starts at the initial state (the empty word): realizable iff
    every input there has an output leading into the winning region.
    """
    if hard.vars != io.vars:
        io = IoPartition(io.inputs, io.outputs, hard.vars)
    win = winning_region(hard, io)

    losing_inputs = [
        io.inputs.letter(i).bits()
        for i in range(io.num_inputs)
        if not any(hard.delta[hard.init][io.letter(i, o)] in win for o in range(io.num_outputs))
    ]
    if losing_inputs:
        losing = sorted(q for q in hard.reachable() if hard.accepting[q] and q not in win)
        return Unrealizable(
            reason=f"no output keeps the specification invariant from the start for input(s) {losing_inputs}",
            losing_states=losing,
            losing_inputs=losing_inputs,
            num_states=hard.num_states,
        )

    def step(key, x):
        if key == _REJECT:
            return _REJECT
        t = hard.delta[hard.init if key == _START else key][x]
        return t if t in win else _REJECT

    sup = minimize(explore(hard.vars, _START, step, lambda key: key not in (_START, _REJECT), max_states))
    logger.debug("mps: %d hard states -> %d supervisor states", hard.num_states, sup.num_states)
    return Supervisor.from_dfa(sup, io)
