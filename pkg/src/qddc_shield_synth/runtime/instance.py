from __future__ import annotations

from typing import Mapping, Union

from pydantic import BaseModel

from qddc_shield_synth.errors import AlphabetMismatchError
from qddc_shield_synth.shield.model import JointState, ShieldModel

InputLetter = Union[int, Mapping[str, bool]]


class StepOutput(BaseModel):
    output: int
    bits: dict[str, bool]
    deviation: bool
    sse_ok: bool


class ShieldInstance:
    """One running shield: reads letters over I then O, writes letters over O'."""

    def __init__(self, model: ShieldModel):
        self.model = model
        self._state: JointState = model.init
        self.steps = 0
        self.deviations = 0

    @property
    def state(self) -> JointState:
        return self._state

    def reset(self) -> None:
        self._state = self.model.init
        self.steps = 0
        self.deviations = 0

    def _letter_index(self, letter: InputLetter) -> int:
        io_vars = self.model.interface.io_vars
        if isinstance(letter, Mapping):
            return io_vars.letter_index(letter)
        if not 0 <= letter < io_vars.num_letters:
            raise AlphabetMismatchError(f"Letter index {letter} is outside the alphabet of {io_vars!r}.")
        return letter

    def step(self, letter: InputLetter) -> StepOutput:
        mv = self.model.step(self._state, self._letter_index(letter))
        self._state = mv.target
        self.steps += 1
        self.deviations += int(mv.deviation)
        out_vars = self.model.interface.O_prime
        return StepOutput(
            output=mv.output,
            bits=out_vars.letter(mv.output).as_dict(),
            deviation=mv.deviation,
            sse_ok=mv.sse_ok,
        )
