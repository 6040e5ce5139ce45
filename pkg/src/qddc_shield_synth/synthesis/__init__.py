from qddc_shield_synth.synthesis.determinize import determinize
from qddc_shield_synth.synthesis.mphos import SoftRequirement, SoftSpec, ValueTable, mphos, value_table
from qddc_shield_synth.synthesis.mps import mps
from qddc_shield_synth.synthesis.supervisor import (
    Controller,
    IoPartition,
    OutputOrder,
    Supervisor,
    Unrealizable,
    is_deterministic,
    is_non_blocking,
    leq_det,
)

__all__ = [
    "Controller",
    "IoPartition",
    "OutputOrder",
    "SoftRequirement",
    "SoftSpec",
    "Supervisor",
    "Unrealizable",
    "ValueTable",
    "determinize",
    "is_deterministic",
    "is_non_blocking",
    "leq_det",
    "mphos",
    "mps",
    "value_table",
]
