from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator, NamedTuple

from qddc_shield_synth.automata.compiler import compile
from qddc_shield_synth.automata.dfa import Dfa
from qddc_shield_synth.constants import DEFAULT_MAX_STATES
from qddc_shield_synth.errors import AlphabetMismatchError
from qddc_shield_synth.prop_logic import VarSet
from qddc_shield_synth.shield.spec import ShieldInterface, ShieldSpec
from qddc_shield_synth.synthesis.export import ControllerTable, controller_table
from qddc_shield_synth.synthesis.supervisor import Controller

JointState = tuple[int, int]


class Move(NamedTuple):
    target: JointState
    output: int
    letter: int
    sse_ok: bool
    deviation: bool


@dataclass(frozen=True)
class ShieldModel:
    """A controller running next to the REQ(I,O) monitor.

    Each step reads a letter over I then O, emits a letter over O', and
    produces a letter of the extended alphabet I, O, O', SSEOK, Deviation.
    """

    interface: ShieldInterface
    table: ControllerTable
    sse_monitor: Dfa

    def __post_init__(self):
        if self.table.inputs != self.interface.io_vars or self.table.outputs != self.interface.O_prime:
            raise AlphabetMismatchError(
                f"Controller reads {self.table.inputs!r} and writes {self.table.outputs!r}; "
                f"the interface expects {self.interface.io_vars!r} and {self.interface.O_prime!r}."
            )
        if self.sse_monitor.vars != self.interface.io_vars:
            raise AlphabetMismatchError(f"REQ monitor must be over {self.interface.io_vars!r}.")

    @classmethod
    def from_table(cls, spec: ShieldSpec, table: ControllerTable, max_states: int = DEFAULT_MAX_STATES) -> "ShieldModel":
        return cls(spec.interface, table, compile(spec.req, spec.interface.io_vars, max_states))

    @classmethod
    def from_controller(cls, spec: ShieldSpec, ctrl: Controller, max_states: int = DEFAULT_MAX_STATES) -> "ShieldModel":
        return cls.from_table(spec, controller_table(ctrl), max_states)

    @property
    def vars(self) -> VarSet:
        return self.interface.extended_vars

    @property
    def num_inputs(self) -> int:
        return self.interface.io_vars.num_letters

    @property
    def init(self) -> JointState:
        return (self.table.init, self.sse_monitor.init)

    def step(self, state: JointState, y: int) -> Move:
        c, m = state
        o_prime, c_next = self.table.move(c, y)
        m_next = self.sse_monitor.delta[m][y]
        sse_ok = self.sse_monitor.accepting[m_next]
        n_out = len(self.interface.O_prime)
        deviation = (y & ((1 << n_out) - 1)) != o_prime
        letter = (((y << n_out) | o_prime) << 2) | (int(sse_ok) << 1) | int(deviation)
        return Move((c_next, m_next), o_prime, letter, sse_ok, deviation)

    def moves(self, state: JointState) -> Iterator[Move]:
        for y in range(self.num_inputs):
            yield self.step(state, y)

    def reachable(self) -> list[JointState]:
        seen = {self.init}
        order = [self.init]
        queue = deque(order)
        while queue:
            s = queue.popleft()
            for mv in self.moves(s):
                if mv.target not in seen:
                    seen.add(mv.target)
                    order.append(mv.target)
                    queue.append(mv.target)
        return order
