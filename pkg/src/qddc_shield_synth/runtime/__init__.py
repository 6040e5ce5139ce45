from qddc_shield_synth.runtime.instance import ShieldInstance, StepOutput
from qddc_shield_synth.runtime.protocol import serve_lines
from qddc_shield_synth.runtime.replay import ReplayResult, replay

__all__ = ["ReplayResult", "ShieldInstance", "StepOutput", "replay", "serve_lines"]
