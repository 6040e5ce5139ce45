"""The hard shield specification REQ(I,O') && HDC << INDDEF as an automaton over I, O, O'."""
from __future__ import annotations

import logging
from functools import reduce
from typing import Optional

from qddc_shield_synth.automata.compiler import compile
from qddc_shield_synth.automata.dfa import Dfa, explore, minimize
from qddc_shield_synth.constants import DEFAULT_MAX_STATES, DEVIATION, SSEOK
from qddc_shield_synth.prop_logic import PIff, PNot, POr, PVar, Prop, VarSet, truth_table
from qddc_shield_synth.qddc.ast import TRUE_D, And, Chop, Exists, Point, Qddc, rename
from qddc_shield_synth.qddc.cascade import IndicatorDef, cascade
from qddc_shield_synth.qddc.macros import MacroTable, builtin_macros
from qddc_shield_synth.qddc.parser import parse
from qddc_shield_synth.shield.spec import HDC_VARS, ShieldInterface, ShieldSpec, ShieldType
from qddc_shield_synth.synthesis.mphos import SoftRequirement, SoftSpec

logger = logging.getLogger(__name__)

HDC_TEXT = {
    "V0": "true",
    "V1": "[]([[Deviation]] => slen<{k})",
    "V2": "[]([[SSEOK && Deviation]] => slen<{k}) && NoSpuriousDeviation",
    "V3": "[]((scount !SSEOK <= {e}) => (scount Deviation <= {d})) && NoSpuriousDeviation",
}


def hdc_text(shield_type: ShieldType) -> str:
    if shield_type.kind == "custom":
        return shield_type.formula
    return HDC_TEXT[shield_type.kind].format(k=shield_type.k, e=shield_type.e, d=shield_type.d)


def hdc_formula(shield_type: ShieldType, macros: Optional[MacroTable] = None) -> Qddc:
    """Hard deviation constraint over SSEOK and Deviation only."""
    return parse(hdc_text(shield_type), HDC_VARS, builtin_macros() if macros is None else macros)


def req_prime(spec: ShieldSpec) -> Qddc:
    """REQ(I,O'): every SSE output replaced by its shield output."""
    return rename(spec.req, spec.interface.pairing)


def mismatch_prop(interface: ShieldInterface) -> Prop:
    """Some o differs from its o'."""
    diffs = [PNot(PIff(PVar(o), PVar(p))) for o, p in interface.pairing.items()]
    return reduce(POr, diffs)


def hamming_soft(interface: ShieldInterface) -> SoftSpec:
    """<true^<o = o'> : 1> per pair; the weight of a letter is r minus its Hamming distance."""
    return SoftSpec(
        requirements=[
            SoftRequirement(formula=Chop(TRUE_D, Point(PIff(PVar(o), PVar(p)))), weight=1)
            for o, p in interface.pairing.items()
        ]
    )


def cascade_formula(spec: ShieldSpec) -> Qddc:
    """ex SSEOK. ex Deviation. (REQ(I,O') && HDC) << INDDEF, the declarative form of the hard shield."""
    inds = [
        IndicatorDef(formula=spec.req, witness=SSEOK),
        IndicatorDef(formula=Chop(TRUE_D, Point(mismatch_prop(spec.interface))), witness=DEVIATION),
    ]
    body = cascade(
        And(req_prime(spec), hdc_formula(spec.shield_type, spec.macros)),
        inds,
        reserved=spec.interface.game_vars,
    )
    return Exists(SSEOK, Exists(DEVIATION, body))


def build_hshield(spec: ShieldSpec, max_states: int = DEFAULT_MAX_STATES) -> Dfa:
    """Product of REQ(I,O'), the REQ(I,O) monitor and the HDC monitor fed with derived bits.

    SSEOK is the REQ(I,O) monitor's acceptance after the letter and Deviation
    is `o != o'` on the letter, so the witnesses never enter the game alphabet.
    """
    interface = spec.interface
    vars = interface.game_vars
    req_out = compile(req_prime(spec), vars, max_states)
    req_in = compile(spec.req, vars, max_states)
    hdc = compile(hdc_formula(spec.shield_type, spec.macros), HDC_VARS, max_states)
    deviation = truth_table(mismatch_prop(interface), vars)
    hdc_vars = VarSet(HDC_VARS)
    sseok_bit = 1 << hdc_vars.shift(SSEOK)
    dev_bit = 1 << hdc_vars.shift(DEVIATION)

    def step(key, x):
        a, b, h = key
        a, b = req_out.delta[a][x], req_in.delta[b][x]
        letter = (sseok_bit if req_in.accepting[b] else 0) | (dev_bit if deviation[x] else 0)
        return a, b, hdc.delta[h][letter]

    dfa = minimize(
        explore(
            vars,
            (req_out.init, req_in.init, hdc.init),
            step,
            lambda key: req_out.accepting[key[0]] and hdc.accepting[key[2]],
            max_states,
        )
    )
    logger.debug(
        "hshield %s: REQ(I,O')=%d, REQ(I,O)=%d, HDC=%d -> %d states",
        spec.shield_type.label,
        req_out.num_states,
        req_in.num_states,
        hdc.num_states,
        dfa.num_states,
    )
    return dfa
