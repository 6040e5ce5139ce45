from qddc_shield_synth.qddc.ast import Qddc, free_vars, rename, to_text
from qddc_shield_synth.qddc.cascade import IndicatorDef, cascade
from qddc_shield_synth.qddc.desugar import desugar
from qddc_shield_synth.qddc.evaluator import Interval, Trace, evaluate, prefix_row, satisfies
from qddc_shield_synth.qddc.macros import MacroDef, builtin_macros, merge_macros
from qddc_shield_synth.qddc.parser import parse

__all__ = [
    "IndicatorDef",
    "Interval",
    "MacroDef",
    "Qddc",
    "Trace",
    "builtin_macros",
    "cascade",
    "desugar",
    "evaluate",
    "free_vars",
    "merge_macros",
    "parse",
    "prefix_row",
    "rename",
    "satisfies",
    "to_text",
]
