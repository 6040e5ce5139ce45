"""H-optimal pruning of a supervisor against weighted soft requirements.

Inputs are uniform and independent at every step. Values are the expected
weight accumulated over the current step plus H lookahead steps, computed
by finite-horizon value iteration.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from qddc_shield_synth.automata.compiler import compile
from qddc_shield_synth.automata.dfa import Dfa, explore, explore_keyed, minimize
from qddc_shield_synth.constants import DEFAULT_MAX_STATES
from qddc_shield_synth.prop_logic import Prop, truth_table
from qddc_shield_synth.qddc.ast import TRUE_D, Chop, Point, Qddc
from qddc_shield_synth.qddc.desugar import desugar
from qddc_shield_synth.synthesis.supervisor import Supervisor

logger = logging.getLogger(__name__)

Number = Union[Fraction, float]


class SoftRequirement(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    formula: Qddc
    weight: int = Field(ge=0)


class SoftSpec(BaseModel):
    requirements: list[SoftRequirement] = Field(default_factory=list)

    def is_trivial(self) -> bool:
        return all(r.weight == 0 for r in self.requirements)


def current_letter_prop(d: Qddc) -> Optional[Prop]:
    """phi when `d` is `true^<phi>`, i.e. its truth depends only on the last letter."""
    d = desugar(d)
    if isinstance(d, Chop) and d.left == TRUE_D and isinstance(d.right, Point):
        return d.right.phi
    return None


@dataclass(frozen=True)
class Arena:
    """Supervisor in product with the soft-requirement monitors; weights live on transitions."""

    sup: Supervisor
    dfa: Dfa
    reject: Optional[int]
    weights: tuple[tuple[int, ...], ...]

    @property
    def io(self):
        return self.sup.io

    def live_states(self) -> list[int]:
        return [q for q in self.dfa.reachable() if q != self.reject]


@dataclass(frozen=True)
class ValueTable:
    arena: Arena
    values: dict[int, Number]
    horizon: int

    def __getitem__(self, q: int) -> Number:
        return self.values[q]

    @property
    def initial_value(self) -> Number:
        return self.values[self.arena.dfa.init]


def build_arena(sup: Supervisor, soft: SoftSpec, max_states: int = DEFAULT_MAX_STATES) -> Arena:
    vars = sup.dfa.vars
    direct = [0] * vars.num_letters
    monitors: list[tuple[Dfa, int]] = []
    for req in soft.requirements:
        if req.weight == 0:
            continue
        phi = current_letter_prop(req.formula)
        if phi is not None:
            for x, holds in enumerate(truth_table(phi, vars)):
                direct[x] += req.weight * holds
        else:
            monitors.append((compile(req.formula, vars, max_states), req.weight))

    def step(key, x):
        q, *ms = key
        t = sup.dfa.delta[q][x]
        if t == sup.reject:
            return (t, *(m.init for m, _ in monitors))
        return (t, *(m.delta[s][x] for (m, _), s in zip(monitors, ms)))

    init = (sup.dfa.init, *(m.init for m, _ in monitors))
    dfa, keys = explore_keyed(vars, init, step, lambda key: key[0] != sup.reject, max_states)

    weights = []
    for q, key in enumerate(keys):
        row = []
        for x in range(vars.num_letters):
            nxt = keys[dfa.delta[q][x]]
            w = direct[x]
            for (m, weight), s in zip(monitors, nxt[1:]):
                w += weight * m.accepting[s]
            row.append(w)
        weights.append(tuple(row))
    reject = next((q for q, key in enumerate(keys) if key[0] == sup.reject), None)
    logger.debug("arena: %d supervisor states x %d monitors -> %d states", sup.num_states, len(monitors), len(keys))
    return Arena(sup, dfa, reject, tuple(weights))


def _values(arena: Arena, horizon: int, exact: bool) -> dict[int, Number]:
    zero: Number = Fraction(0) if exact else 0.0
    live = arena.live_states()
    values = {q: zero for q in live}
    for sweep in range(horizon):
        values = {q: _state_value(arena, q, values, exact) for q in live}
        logger.debug("value iteration sweep %d: V(init)=%s", sweep + 1, values.get(arena.dfa.init))
    return values


def _state_value(arena: Arena, q: int, values: dict[int, Number], exact: bool) -> Number:
    io = arena.io
    total: Number = Fraction(0) if exact else 0.0
    for i in range(io.num_inputs):
        best = max(_option_values(arena, q, i, values).values())
        total += best
    return total / io.num_inputs


def _option_values(arena: Arena, q: int, i: int, values: dict[int, Number]) -> dict[int, Number]:
    """w + V(successor) for every allowed output."""
    io = arena.io
    out = {}
    for o in range(io.num_outputs):
        x = io.letter(i, o)
        t = arena.dfa.delta[q][x]
        if t != arena.reject:
            out[o] = arena.weights[q][x] + values[t]
    return out


def value_table(
    sup: Supervisor,
    soft: SoftSpec,
    horizon: int,
    exact: bool = True,
    max_states: int = DEFAULT_MAX_STATES,
) -> ValueTable:
    if horizon < 0:
        raise ValueError(f"Horizon must be non-negative, got {horizon}.")
    arena = build_arena(sup, soft, max_states)
    return ValueTable(arena, _values(arena, horizon, exact), horizon)


def mphos(
    sup: Supervisor,
    soft: SoftSpec,
    horizon: int,
    exact: bool = True,
    max_states: int = DEFAULT_MAX_STATES,
) -> Supervisor:
    """Keep, per state and input, exactly the outputs maximizing w + V_H(successor); ties all stay."""
    table = value_table(sup, soft, horizon, exact, max_states)
    arena = table.arena
    io = arena.io
    keep: dict[tuple[int, int], set[int]] = {}
    for q in arena.live_states():
        for i in range(io.num_inputs):
            options = _option_values(arena, q, i, table.values)
            best = max(options.values())
            keep[(q, i)] = {o for o, v in options.items() if v == best}

    def step(key, x):
        if key == "reject" or key == arena.reject:
            return "reject"
        i, o = io.split(x)
        if o not in keep[(key, i)]:
            return "reject"
        t = arena.dfa.delta[key][x]
        return "reject" if t == arena.reject else t

    init = arena.dfa.init
    pruned = minimize(explore(io.vars, init, step, lambda key: key not in (init, "reject"), max_states))
    logger.debug("mphos H=%d: %d -> %d states", horizon, sup.num_states, pruned.num_states)
    return Supervisor.from_dfa(pruned, io)
