from __future__ import annotations

from typing import Collection, Sequence

from pydantic import BaseModel, ConfigDict

from qddc_shield_synth.errors import WitnessCollisionError
from qddc_shield_synth.qddc.ast import EP, And, Iff, Pref, Qddc, free_vars


class IndicatorDef(BaseModel):
    """Ind(D, w): witness variable w holds at a position iff D holds on the prefix ending there."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    formula: Qddc
    witness: str


def cascade(d: Qddc, inds: Sequence[IndicatorDef], reserved: Collection[str] = ()) -> Qddc:
    """D << inds = D && pref(EP(w_1) <=> D_1) && ... in the given order."""
    seen: set[str] = set()
    for ind in inds:
        if ind.witness in seen:
            raise WitnessCollisionError(f"Witness {ind.witness!r} is defined more than once.")
        if ind.witness in reserved:
            raise WitnessCollisionError(f"Witness {ind.witness!r} clashes with a declared input or output.")
        if ind.witness in free_vars(ind.formula):
            raise WitnessCollisionError(f"Witness {ind.witness!r} occurs free in its own defining formula.")
        seen.add(ind.witness)

    out = d
    for ind in inds:
        out = And(out, Pref(Iff(EP(ind.witness), ind.formula)))
    return out
