from __future__ import annotations

from qddc_shield_synth.prop_logic import TRUE, PVar
from qddc_shield_synth.qddc.ast import (
    TRUE_D,
    All,
    AllButLast,
    And,
    Box,
    Chop,
    Diamond,
    EP,
    Exists,
    Ext,
    Forall,
    Iff,
    Implies,
    Not,
    Or,
    Point,
    Pref,
    Pt,
    Qddc,
    ScountCmp,
    SdurCmp,
    SlenCmp,
)


def desugar(d: Qddc) -> Qddc:
    """Rewrite every derived construct into core nodes.

    pt = <true>, ext = !pt, <>D = true^D^true, []D = !<>!D,
    pref(D) = !((!D)^true), EP(w) = true^<w>, all p. D = !ex p. !D.
    """
    if isinstance(d, (Point, AllButLast, All, SlenCmp, ScountCmp, SdurCmp)):
        return d
    if isinstance(d, Pt):
        return Point(TRUE, pos=d.pos)
    if isinstance(d, Ext):
        return Not(Point(TRUE), pos=d.pos)
    if isinstance(d, EP):
        return Chop(TRUE_D, Point(PVar(d.var)), pos=d.pos)
    if isinstance(d, Not):
        return Not(desugar(d.arg), pos=d.pos)
    if isinstance(d, Diamond):
        return _diamond(desugar(d.arg), d)
    if isinstance(d, Box):
        return Not(_diamond(Not(desugar(d.arg)), d), pos=d.pos)
    if isinstance(d, Pref):
        return Not(Chop(Not(desugar(d.arg)), TRUE_D), pos=d.pos)
    if isinstance(d, Exists):
        return Exists(d.var, desugar(d.body), pos=d.pos)
    if isinstance(d, Forall):
        return Not(Exists(d.var, Not(desugar(d.body))), pos=d.pos)
    if isinstance(d, Implies):
        return Or(Not(desugar(d.left)), desugar(d.right), pos=d.pos)
    if isinstance(d, Iff):
        left, right = desugar(d.left), desugar(d.right)
        return Or(And(left, right), And(Not(left), Not(right)), pos=d.pos)
    if isinstance(d, (Chop, And, Or)):
        return type(d)(desugar(d.left), desugar(d.right), pos=d.pos)
    raise TypeError(f"Not a QDDC formula: {d!r}")


def _diamond(arg: Qddc, origin: Qddc) -> Qddc:
    return Chop(Chop(TRUE_D, arg), TRUE_D, pos=origin.pos)
