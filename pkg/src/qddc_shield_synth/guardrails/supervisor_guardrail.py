from __future__ import annotations

from typing import Any, Tuple

from qddc_shield_synth.automata.dfa import Dfa, counterexample
from qddc_shield_synth.synthesis.supervisor import Supervisor, is_non_blocking


class ValidateSupervisorGuardrail:
    _hard: Dfa

    def __init__(self, hard: Dfa):
        self._hard = hard

    def get_guardrail_function(self):
        return lambda supervisor: self._validate_supervisor(supervisor)

    def check(self, supervisor: Supervisor, stage: str) -> None:
        ok, result = self.get_guardrail_function()(supervisor)
        if not ok:
            raise RuntimeError(f"{stage} failed validation: {result}")

    def _validate_supervisor(self, supervisor: Any) -> Tuple[bool, Any]:
        if not isinstance(supervisor, Supervisor):
            return False, f"Unexpected output type: {type(supervisor)}"

        if supervisor.dfa.vars != self._hard.vars:
            return False, f"Supervisor is over {supervisor.dfa.vars!r}, specification over {self._hard.vars!r}."

        word = counterexample(supervisor.dfa, self._hard)
        if word is not None:
            letters = " ".join(self._hard.vars.letter(x).bits() for x in word)
            return False, f"Supervisor allows a word outside the specification: {letters}"

        if not is_non_blocking(supervisor):
            return False, "Supervisor blocks: some reachable state has an input with no allowed output."

        return True, supervisor
