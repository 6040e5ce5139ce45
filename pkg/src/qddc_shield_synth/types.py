from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, Field

from qddc_shield_synth.constants import (
    DEFAULT_MAX_STATES,
    DEFAULT_OUTPUT_DIR,
    DEFAULT_SEED,
    DEFAULT_SIMULATION_STEPS,
)

Command = Literal["compile", "synth", "analyze", "simulate", "export-mrmc", "run"]


class RunConfig(BaseModel):
    """ Validated command-line invocation """
    command: Command
    spec_path: Path
    out_dir: Path = Field(default=Path(DEFAULT_OUTPUT_DIR))
    formula: Optional[str] = Field(default=None, description="Formula name: req, hdc, hshield or a `formula` entry")
    controller: Optional[Path] = Field(default=None, description="Controller table to use instead of synthesizing")
    trace: Optional[Path] = None
    horizon: Optional[int] = Field(default=None, ge=0)
    dm: Optional[bool] = None
    order: Optional[str] = None
    max_states: int = Field(default=DEFAULT_MAX_STATES, ge=1)
    exact: bool = True
    seed: int = Field(default=DEFAULT_SEED, ge=0)
    steps: int = Field(default=DEFAULT_SIMULATION_STEPS, ge=1)
    mrmc: bool = False
    dfa_import: Optional[Path] = Field(default=None, description="Hand-written .dfa file for `compile` to import")
    verbose: bool = False
