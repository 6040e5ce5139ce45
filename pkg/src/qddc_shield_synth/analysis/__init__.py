from qddc_shield_synth.analysis.dtmc import Dtmc, build_dtmc, expected_value
from qddc_shield_synth.analysis.latency import LatencyResult, deviation_latency, maxlen
from qddc_shield_synth.analysis.mrmc import validate_tra, write_mrmc
from qddc_shield_synth.analysis.report import ShieldReport, analyze
from qddc_shield_synth.analysis.simulate import SimulationResult, simulate

__all__ = [
    "Dtmc",
    "LatencyResult",
    "ShieldReport",
    "SimulationResult",
    "analyze",
    "build_dtmc",
    "deviation_latency",
    "expected_value",
    "maxlen",
    "simulate",
    "validate_tra",
    "write_mrmc",
]
