from __future__ import annotations

from typing import Mapping

from pydantic import BaseModel, Field, field_validator

from qddc_shield_synth.errors import MacroError


class MacroDef(BaseModel):
    """A named formula template expanded by token substitution at parse time."""

    name: str
    params: list[str] = Field(default_factory=list)
    body: str

    @field_validator("params")
    @classmethod
    def _distinct_params(cls, params: list[str]) -> list[str]:
        if len(set(params)) != len(params):
            raise ValueError(f"Macro parameters must be distinct: {params}")
        return params


MacroTable = Mapping[str, MacroDef]

UNTIL = MacroDef(
    name="Until",
    params=["p", "q", "n"],
    body="((slen<(n)) && [[p]]) || (((([p]||pt)^<q>) && slen<=n)^true)",
)

SINCE_LAST = MacroDef(
    name="SinceLast",
    params=["p", "D"],
    body="!(true^(<p>^((slen=1^[[!p]])||pt) && !(D)))",
)

NO_SPURIOUS_DEVIATION = MacroDef(
    name="NoSpuriousDeviation",
    params=[],
    body="[]((<!Deviation>^[[SSEOK]]) => [[!Deviation]])",
)

PHI_UNTIL = MacroDef(
    name="phi_until",
    params=["n"],
    body="SinceLast(r, Until(p,q,n))",
)


def builtin_macros() -> dict[str, MacroDef]:
    return {m.name: m for m in (UNTIL, SINCE_LAST, NO_SPURIOUS_DEVIATION, PHI_UNTIL)}


def merge_macros(*tables: MacroTable) -> dict[str, MacroDef]:
    merged: dict[str, MacroDef] = {}
    for table in tables:
        merged.update(table)
    return merged


def check_arity(macro: MacroDef, given: int) -> None:
    if given != len(macro.params):
        raise MacroError(
            f"Macro {macro.name} expects {len(macro.params)} argument(s), got {given}."
        )
