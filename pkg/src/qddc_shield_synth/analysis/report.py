from __future__ import annotations

from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

import pandas as pd
from pydantic import BaseModel

from qddc_shield_synth.analysis.dtmc import build_dtmc, expected_value
from qddc_shield_synth.analysis.latency import deviation_latency
from qddc_shield_synth.constants import DEFAULT_MAX_STATES
from qddc_shield_synth.qddc.parser import parse
from qddc_shield_synth.shield.model import ShieldModel

NON_DEVIATION = "true^<!Deviation>"
DISPLAY_PLACES = 7


def display_value(value: Union[Fraction, float], places: int = DISPLAY_PLACES) -> float:
    """Round half-up on the decimal expansion of the exact value."""
    if isinstance(value, Fraction):
        exact = Decimal(value.numerator) / Decimal(value.denominator)
    else:
        exact = Decimal(repr(value))
    return float(exact.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_UP))


class ShieldReport(BaseModel):
    label: str
    states: int
    synthesis_seconds: Optional[float] = None
    expected_value: float
    expected_value_exact: Optional[str] = None
    latency: str
    dtmc_states: int

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([self.model_dump()]).set_index("label")

    def to_text(self) -> str:
        width = max(len(k) for k in type(self).model_fields)
        return "\n".join(f"{k.ljust(width)} : {'' if v is None else v}" for k, v in self.model_dump().items())


def analyze(
    model: ShieldModel,
    label: str,
    states: int,
    synthesis_seconds: Optional[float] = None,
    exact: bool = True,
    max_states: int = DEFAULT_MAX_STATES,
) -> ShieldReport:
    """Expected non-deviation under uniform inputs and the burst-deviation latency."""
    chain = build_dtmc(model, parse(NON_DEVIATION, model.vars), max_states)
    value: Union[Fraction, float] = expected_value(chain, exact)
    return ShieldReport(
        label=label,
        states=states,
        synthesis_seconds=synthesis_seconds,
        expected_value=display_value(value),
        expected_value_exact=str(value) if isinstance(value, Fraction) else None,
        latency=str(deviation_latency(model, max_states)),
        dtmc_states=chain.num_states,
    )


def reports_frame(reports: list[ShieldReport]) -> pd.DataFrame:
    return pd.concat([r.to_frame() for r in reports]) if reports else pd.DataFrame()


def update_report_table(path: Path, report: ShieldReport) -> pd.DataFrame:
    """Add or replace `report`'s row in the CSV summary at `path` and return the table."""
    table = reports_frame([report])
    if path.exists():
        previous = pd.read_csv(path, index_col="label", dtype={"latency": str, "expected_value_exact": str})
        table = pd.concat([previous.drop(index=report.label, errors="ignore"), table])
    path.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(path)
    return table
