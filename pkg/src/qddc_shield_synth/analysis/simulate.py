from __future__ import annotations

import math

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from qddc_shield_synth.constants import DEFAULT_SEED
from qddc_shield_synth.shield.model import ShieldModel


class SimulationResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    steps: int
    seed: int
    deviation_frequency: float
    non_deviation_frequency: float
    sse_ok_frequency: float
    standard_error: float
    letters: np.ndarray = Field(repr=False, exclude=True)

    def trace(self, model: ShieldModel) -> pd.DataFrame:
        """One row per step, one 0/1 column per extended-alphabet variable."""
        names = list(model.vars)
        n = len(names)
        bits = (self.letters[:, None] >> np.arange(n - 1, -1, -1)) & 1
        return pd.DataFrame(bits.astype(np.int8), columns=names)


def simulate(model: ShieldModel, steps: int, seed: int = DEFAULT_SEED) -> SimulationResult:
    """Drive the shield with uniform random letters over I and O."""
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}.")
    rng = np.random.default_rng(seed)
    inputs = rng.integers(0, model.num_inputs, size=steps)
    letters = np.empty(steps, dtype=np.int64)
    deviation = np.empty(steps, dtype=bool)
    sse_ok = np.empty(steps, dtype=bool)
    state = model.init
    for k, y in enumerate(inputs.tolist()):
        mv = model.step(state, y)
        letters[k] = mv.letter
        deviation[k] = mv.deviation
        sse_ok[k] = mv.sse_ok
        state = mv.target

    ok = 1.0 - float(deviation.mean())
    return SimulationResult(
        steps=steps,
        seed=seed,
        deviation_frequency=float(deviation.mean()),
        non_deviation_frequency=ok,
        sse_ok_frequency=float(sse_ok.mean()),
        standard_error=math.sqrt(max(ok * (1.0 - ok), 0.0) / steps),
        letters=letters,
    )
