"""QDDC formula tree.

Core nodes are what the compiler and the evaluator's reference semantics are
defined on; sugar nodes are removed by `desugar`. Every node carries an
optional source position that is ignored by equality.
"""
from __future__ import annotations

import operator
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

from qddc_shield_synth.prop_logic import (
    TRUE,
    Prop,
    free_vars as prop_free_vars,
    prop_to_text,
    rename as prop_rename,
)

Pos = Optional[tuple[int, int]]

COMPARATORS: dict[str, Callable[[int, int], bool]] = {
    "<": operator.lt,
    "<=": operator.le,
    "=": operator.eq,
    ">=": operator.ge,
    ">": operator.gt,
}


def compare(op: str, value: int, bound: int) -> bool:
    return COMPARATORS[op](value, bound)


class Qddc:
    pass


# Core

@dataclass(frozen=True)
class Point(Qddc):
    phi: Prop
    pos: Pos = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class AllButLast(Qddc):
    phi: Prop
    pos: Pos = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class All(Qddc):
    phi: Prop
    pos: Pos = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Chop(Qddc):
    left: Qddc
    right: Qddc
    pos: Pos = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Not(Qddc):
    arg: Qddc
    pos: Pos = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class And(Qddc):
    left: Qddc
    right: Qddc
    pos: Pos = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Or(Qddc):
    left: Qddc
    right: Qddc
    pos: Pos = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Exists(Qddc):
    var: str
    body: Qddc
    pos: Pos = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class SlenCmp(Qddc):
    op: str
    bound: int
    pos: Pos = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class ScountCmp(Qddc):
    phi: Prop
    op: str
    bound: int
    pos: Pos = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class SdurCmp(Qddc):
    phi: Prop
    op: str
    bound: int
    pos: Pos = field(default=None, compare=False, repr=False)


# Sugar

@dataclass(frozen=True)
class Pt(Qddc):
    pos: Pos = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Ext(Qddc):
    pos: Pos = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Diamond(Qddc):
    arg: Qddc
    pos: Pos = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Box(Qddc):
    arg: Qddc
    pos: Pos = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Pref(Qddc):
    arg: Qddc
    pos: Pos = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class EP(Qddc):
    var: str
    pos: Pos = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Forall(Qddc):
    var: str
    body: Qddc
    pos: Pos = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Implies(Qddc):
    left: Qddc
    right: Qddc
    pos: Pos = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Iff(Qddc):
    left: Qddc
    right: Qddc
    pos: Pos = field(default=None, compare=False, repr=False)


TRUE_D = All(TRUE)

CORE_TYPES = (Point, AllButLast, All, Chop, Not, And, Or, Exists, SlenCmp, ScountCmp, SdurCmp)
BINARY_TYPES = (Chop, And, Or, Implies, Iff)
UNARY_TYPES = (Not, Diamond, Box, Pref)
PROP_ATOM_TYPES = (Point, AllButLast, All)


def is_core(d: Qddc) -> bool:
    if not isinstance(d, CORE_TYPES):
        return False
    return all(is_core(c) for c in children(d))


def children(d: Qddc) -> tuple[Qddc, ...]:
    if isinstance(d, BINARY_TYPES):
        return (d.left, d.right)
    if isinstance(d, UNARY_TYPES):
        return (d.arg,)
    if isinstance(d, (Exists, Forall)):
        return (d.body,)
    return ()


def free_vars(d: Qddc) -> frozenset[str]:
    if isinstance(d, (Point, AllButLast, All, ScountCmp, SdurCmp)):
        return prop_free_vars(d.phi)
    if isinstance(d, EP):
        return frozenset({d.var})
    if isinstance(d, (Exists, Forall)):
        return free_vars(d.body) - {d.var}
    out: frozenset[str] = frozenset()
    for c in children(d):
        out |= free_vars(c)
    return out


def rename(d: Qddc, mapping: Mapping[str, str]) -> Qddc:
    """Capture-free renaming of free variables."""
    if not mapping:
        return d
    if isinstance(d, (Point, AllButLast, All)):
        return type(d)(prop_rename(d.phi, mapping), pos=d.pos)
    if isinstance(d, (ScountCmp, SdurCmp)):
        return type(d)(prop_rename(d.phi, mapping), d.op, d.bound, pos=d.pos)
    if isinstance(d, EP):
        return EP(mapping.get(d.var, d.var), pos=d.pos)
    if isinstance(d, (Exists, Forall)):
        inner = {k: v for k, v in mapping.items() if k != d.var}
        if d.var in inner.values():
            raise ValueError(f"Renaming {mapping} would capture quantified variable {d.var!r}.")
        return type(d)(d.var, rename(d.body, inner), pos=d.pos)
    if isinstance(d, BINARY_TYPES):
        return type(d)(rename(d.left, mapping), rename(d.right, mapping), pos=d.pos)
    if isinstance(d, UNARY_TYPES):
        return type(d)(rename(d.arg, mapping), pos=d.pos)
    return d


def depth(d: Qddc) -> int:
    return 1 + max((depth(c) for c in children(d)), default=0)


_BINARY_TEXT = {Chop: "^", And: "&&", Or: "||", Implies: "=>", Iff: "<=>"}


def to_text(d: Qddc) -> str:
    """Fully parenthesized concrete syntax, re-parseable by `parse`."""
    if isinstance(d, Point):
        return f"<{prop_to_text(d.phi)}>"
    if isinstance(d, AllButLast):
        return f"[{prop_to_text(d.phi)}]"
    if isinstance(d, All):
        return f"[[{prop_to_text(d.phi)}]]"
    if isinstance(d, SlenCmp):
        return f"(slen {d.op} {d.bound})"
    if isinstance(d, ScountCmp):
        return f"(scount {prop_to_text(d.phi)} {d.op} {d.bound})"
    if isinstance(d, SdurCmp):
        return f"(sdur {prop_to_text(d.phi)} {d.op} {d.bound})"
    if isinstance(d, Pt):
        return "pt"
    if isinstance(d, Ext):
        return "ext"
    if isinstance(d, EP):
        return f"EP({d.var})"
    if isinstance(d, Not):
        return f"!{to_text(d.arg)}"
    if isinstance(d, Diamond):
        return f"<>{to_text(d.arg)}"
    if isinstance(d, Box):
        return f"[]{to_text(d.arg)}"
    if isinstance(d, Pref):
        return f"pref({to_text(d.arg)})"
    if isinstance(d, Exists):
        return f"(ex {d.var}. {to_text(d.body)})"
    if isinstance(d, Forall):
        return f"(all {d.var}. {to_text(d.body)})"
    return f"({to_text(d.left)} {_BINARY_TEXT[type(d)]} {to_text(d.right)})"
