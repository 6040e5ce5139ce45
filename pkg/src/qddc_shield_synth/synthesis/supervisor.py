"""Supervisors: DFAs over a game alphabet split into inputs and outputs.

A transition into the reject sink is a disallowed output. Every other
reachable state is live; the supervisor's language is the set of
non-empty words that never reach reject.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

from pydantic import BaseModel, Field, field_validator

from qddc_shield_synth.automata.dfa import Dfa, is_subset
from qddc_shield_synth.errors import AlphabetMismatchError, ControllerIntegrityError, DeclarationError
from qddc_shield_synth.prop_logic import VarSet


@dataclass(frozen=True)
class IoPartition:
    inputs: VarSet
    outputs: VarSet
    vars: VarSet = field(default=None)

    def __post_init__(self):
        clash = set(self.inputs) & set(self.outputs)
        if clash:
            raise DeclarationError(f"Variables {sorted(clash)} are both inputs and outputs.")
        if self.vars is None:
            object.__setattr__(self, "vars", self.inputs.union(self.outputs))
        if set(self.vars) != set(self.inputs) | set(self.outputs):
            raise AlphabetMismatchError(
                f"Game alphabet {self.vars!r} must be exactly inputs {self.inputs!r} and outputs {self.outputs!r}."
            )

    @cached_property
    def _tables(self) -> tuple[list[list[int]], list[int], list[int]]:
        in_proj = self.vars.projection(self.inputs)
        out_proj = self.vars.projection(self.outputs)
        letter = [[0] * self.outputs.num_letters for _ in range(self.inputs.num_letters)]
        for x in range(self.vars.num_letters):
            letter[in_proj[x]][out_proj[x]] = x
        return letter, in_proj, out_proj

    @property
    def num_inputs(self) -> int:
        return self.inputs.num_letters

    @property
    def num_outputs(self) -> int:
        return self.outputs.num_letters

    def letter(self, i: int, o: int) -> int:
        return self._tables[0][i][o]

    def split(self, x: int) -> tuple[int, int]:
        _, in_proj, out_proj = self._tables
        return in_proj[x], out_proj[x]


@dataclass(frozen=True)
class Supervisor:
    dfa: Dfa
    io: IoPartition
    reject: Optional[int] = None

    def __post_init__(self):
        if self.dfa.vars != self.io.vars:
            raise AlphabetMismatchError(f"Supervisor DFA is over {self.dfa.vars!r}, game over {self.io.vars!r}.")
        if self.reject is not None and any(t != self.reject for t in self.dfa.delta[self.reject]):
            raise ValueError(f"Reject state {self.reject} is not absorbing.")

    @classmethod
    def from_dfa(cls, dfa: Dfa, io: IoPartition) -> "Supervisor":
        """Wrap a DFA whose only non-accepting states are the start and an absorbing sink."""
        sinks = [q for q in range(dfa.num_states) if q != dfa.init and not dfa.accepting[q]]
        if len(sinks) > 1:
            raise ValueError(f"Supervisor DFA has {len(sinks)} non-accepting states besides the start.")
        return cls(dfa, io, sinks[0] if sinks else None)

    @property
    def num_states(self) -> int:
        return self.dfa.num_states

    def live_states(self) -> list[int]:
        return [q for q in self.dfa.reachable() if q != self.reject]

    def allowed(self, q: int, i: int, o: int) -> bool:
        return self.dfa.delta[q][self.io.letter(i, o)] != self.reject

    def allowed_outputs(self, q: int, i: int) -> list[int]:
        return [o for o in range(self.io.num_outputs) if self.allowed(q, i, o)]

    def successor(self, q: int, i: int, o: int) -> int:
        return self.dfa.delta[q][self.io.letter(i, o)]


@dataclass(frozen=True)
class Controller(Supervisor):
    """A supervisor allowing exactly one output per live state and input."""

    def __post_init__(self):
        super().__post_init__()
        for q in self.live_states():
            for i in range(self.io.num_inputs):
                n = len(self.allowed_outputs(q, i))
                if n != 1:
                    raise ControllerIntegrityError(f"State {q} allows {n} outputs for input {i}, expected 1.")

    def output(self, q: int, i: int) -> int:
        return self.allowed_outputs(q, i)[0]

    def move(self, q: int, i: int) -> tuple[int, int]:
        o = self.output(q, i)
        return o, self.successor(q, i, o)


class Unrealizable(BaseModel):
    """No supervisor can keep every play inside the specification."""

    reason: str
    losing_states: list[int] = Field(default_factory=list)
    losing_inputs: list[str] = Field(default_factory=list)
    num_states: int = 0


class OutputOrder(BaseModel):
    """Lexicographic output preference, e.g. `!q' !p'`; unlisted outputs prefer false."""

    literals: list[str] = Field(default_factory=list)

    @field_validator("literals")
    @classmethod
    def _distinct_vars(cls, literals: list[str]) -> list[str]:
        names = [lit.lstrip("!") for lit in literals]
        if any(not n for n in names):
            raise ValueError(f"Empty literal in output order {literals}.")
        if len(set(names)) != len(names):
            raise ValueError(f"Output order mentions a variable twice: {literals}.")
        return literals

    @classmethod
    def parse(cls, text: str) -> "OutputOrder":
        return cls(literals=text.replace(",", " ").split())

    def key(self, outputs: VarSet, o: int) -> tuple[int, ...]:
        """Sort key of output letter `o`; smaller is preferred."""
        listed = []
        for lit in self.literals:
            name = lit.lstrip("!")
            if name not in outputs:
                raise DeclarationError(f"Output order literal {lit!r} is not an output in {list(outputs)}.")
            want = not lit.startswith("!")
            listed.append(0 if outputs.bit(o, name) == want else 1)
        mentioned = {lit.lstrip("!") for lit in self.literals}
        rest = [1 if outputs.bit(o, name) else 0 for name in outputs if name not in mentioned]
        return (*listed, *rest)

    def ranked(self, outputs: VarSet, candidates: Sequence[int]) -> list[int]:
        return sorted(candidates, key=lambda o: self.key(outputs, o))

    def __str__(self) -> str:
        return " ".join(self.literals)


def is_non_blocking(sup: Supervisor) -> bool:
    return all(
        sup.allowed_outputs(q, i)
        for q in sup.live_states()
        for i in range(sup.io.num_inputs)
    )


def is_deterministic(sup: Supervisor) -> bool:
    return all(
        len(sup.allowed_outputs(q, i)) == 1
        for q in sup.live_states()
        for i in range(sup.io.num_inputs)
    )


def leq_det(s1: Supervisor, s2: Supervisor) -> bool:
    """s1 <=_det s2, i.e. s2 is at least as deterministic: L(s2) is contained in L(s1)."""
    if s1.io != s2.io:
        raise AlphabetMismatchError("Supervisors have different input/output interfaces.")
    return is_subset(s2.dfa, s1.dfa)
