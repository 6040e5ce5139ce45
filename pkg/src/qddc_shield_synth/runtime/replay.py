from __future__ import annotations

import traceback

import pandas as pd
from pydantic import BaseModel

from qddc_shield_synth.runtime.instance import ShieldInstance
from utils.trace_file_helper import TraceFileHelper


class StepRecord(BaseModel):
    step: int
    outputs: dict[str, int]
    deviation: bool
    sse_ok: bool


class ReplayResult(BaseModel):
    records: list[StepRecord]
    steps: int
    deviations: int
    sse_ok_steps: int

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {"step": r.step, **r.outputs, "Deviation": int(r.deviation), "SSEOK": int(r.sse_ok)}
            for r in self.records
        ]
        return pd.DataFrame(rows).set_index("step")


def replay(instance: ShieldInstance, frame: pd.DataFrame) -> ReplayResult | str:
    """Run a whole trace (columns: inputs then SSE outputs) through a fresh instance."""
    columns = list(instance.model.interface.io_vars)
    try:
        trace = TraceFileHelper.from_frame(frame, columns)
    except Exception as e:
        return f"Trace validation error: {e}"

    instance.reset()
    records: list[StepRecord] = []
    try:
        for k, row in enumerate(trace.get_rows()):
            try:
                out = instance.step(row)
            except Exception as e:
                return f"Shield error at step {k}: {e}"
            records.append(
                StepRecord(
                    step=k,
                    outputs={name: int(bit) for name, bit in out.bits.items()},
                    deviation=out.deviation,
                    sse_ok=out.sse_ok,
                )
            )
    except Exception:
        return "Unexpected replay error (stack trace follows):\n" + traceback.format_exc()

    return ReplayResult(
        records=records,
        steps=instance.steps,
        deviations=instance.deviations,
        sse_ok_steps=sum(r.sse_ok for r in records),
    )
