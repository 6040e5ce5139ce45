"""Reference interval semantics, used as the brute-force oracle for the compiler.

Every node, sugar included, is evaluated directly from its meaning on
intervals of a finite trace. Quantifiers enumerate all p-variants of the
trace, so this is exponential in the trace length.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from qddc_shield_synth.errors import DeclarationError
from qddc_shield_synth.prop_logic import Prop, VarSet, truth_table
from qddc_shield_synth.qddc.ast import (
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
    compare,
)


@dataclass(frozen=True)
class Trace:
    vars: VarSet
    letters: tuple[int, ...]

    def __post_init__(self):
        if not self.letters:
            raise ValueError("A trace must contain at least one letter.")
        bad = [idx for idx in self.letters if not 0 <= idx < self.vars.num_letters]
        if bad:
            raise ValueError(f"Letter indices {bad} are outside the alphabet of {self.vars!r}.")

    def __len__(self) -> int:
        return len(self.letters)

    @classmethod
    def from_rows(cls, vars: VarSet, rows: Iterable[Mapping[str, bool]]) -> "Trace":
        return cls(vars, tuple(vars.letter_index({k: bool(v) for k, v in row.items()}) for row in rows))

    @classmethod
    def from_columns(cls, vars: VarSet, columns: Mapping[str, Sequence[int]]) -> "Trace":
        lengths = {len(col) for col in columns.values()}
        if len(lengths) != 1:
            raise ValueError(f"All columns must have the same length, got {sorted(lengths)}.")
        (length,) = lengths
        rows = [{name: bool(columns[name][i]) for name in vars} for i in range(length)]
        return cls.from_rows(vars, rows)

    def value(self, i: int, name: str) -> bool:
        return self.vars.bit(self.letters[i], name)

    def prefix(self, end: int) -> "Trace":
        return Trace(self.vars, self.letters[: end + 1])

    def slice(self, b: int, e: int) -> "Trace":
        return Trace(self.vars, self.letters[b : e + 1])


@dataclass(frozen=True)
class Interval:
    b: int
    e: int

    def __post_init__(self):
        if not 0 <= self.b <= self.e:
            raise ValueError(f"Invalid interval [{self.b},{self.e}].")


def full_interval(t: Trace) -> Interval:
    return Interval(0, len(t) - 1)


def evaluate(d: Qddc, t: Trace, iv: Interval) -> bool:
    if iv.e >= len(t):
        raise ValueError(f"Interval [{iv.b},{iv.e}] is outside a trace of length {len(t)}.")
    return _Evaluator(t).holds(d, iv.b, iv.e)


def satisfies(d: Qddc, t: Trace) -> bool:
    """sigma |= D, i.e. D holds on the whole trace."""
    return evaluate(d, t, full_interval(t))


def prefix_row(d: Qddc, t: Trace) -> list[bool]:
    """Truth of D on [0,i] for every position i."""
    ev = _Evaluator(t)
    return [ev.holds(d, 0, i) for i in range(len(t))]


class _Evaluator:
    def __init__(self, trace: Trace):
        self.trace = trace
        self.memo: dict[tuple[int, int, int], bool] = {}
        self.tables: dict[int, tuple[bool, ...]] = {}
        self.keep: list[Qddc] = []

    def prop_at(self, phi: Prop, i: int) -> bool:
        key = id(phi)
        table = self.tables.get(key)
        if table is None:
            table = truth_table(phi, self.trace.vars)
            self.tables[key] = table
            self.keep.append(phi)
        return table[self.trace.letters[i]]

    def count(self, phi: Prop, b: int, e: int) -> int:
        return sum(1 for i in range(b, e + 1) if self.prop_at(phi, i))

    def holds(self, d: Qddc, b: int, e: int) -> bool:
        key = (id(d), b, e)
        cached = self.memo.get(key)
        if cached is None:
            cached = self._holds(d, b, e)
            self.memo[key] = cached
            self.keep.append(d)
        return cached

    def _holds(self, d: Qddc, b: int, e: int) -> bool:
        if isinstance(d, Point):
            return b == e and self.prop_at(d.phi, b)
        if isinstance(d, AllButLast):
            return b < e and all(self.prop_at(d.phi, i) for i in range(b, e))
        if isinstance(d, All):
            return all(self.prop_at(d.phi, i) for i in range(b, e + 1))
        if isinstance(d, Chop):
            return any(self.holds(d.left, b, i) and self.holds(d.right, i, e) for i in range(b, e + 1))
        if isinstance(d, Not):
            return not self.holds(d.arg, b, e)
        if isinstance(d, And):
            return self.holds(d.left, b, e) and self.holds(d.right, b, e)
        if isinstance(d, Or):
            return self.holds(d.left, b, e) or self.holds(d.right, b, e)
        if isinstance(d, Implies):
            return (not self.holds(d.left, b, e)) or self.holds(d.right, b, e)
        if isinstance(d, Iff):
            return self.holds(d.left, b, e) == self.holds(d.right, b, e)
        if isinstance(d, SlenCmp):
            return compare(d.op, e - b, d.bound)
        if isinstance(d, ScountCmp):
            return compare(d.op, self.count(d.phi, b, e), d.bound)
        if isinstance(d, SdurCmp):
            return compare(d.op, self.count(d.phi, b, e - 1) if e > b else 0, d.bound)
        if isinstance(d, Pt):
            return b == e
        if isinstance(d, Ext):
            return b < e
        if isinstance(d, EP):
            if d.var not in self.trace.vars:
                raise DeclarationError(f"Variable {d.var!r} is not declared in {list(self.trace.vars)}.")
            return self.trace.value(e, d.var)
        if isinstance(d, Pref):
            return all(self.holds(d.arg, b, k) for k in range(b, e + 1))
        if isinstance(d, Diamond):
            return any(self.holds(d.arg, i, j) for i in range(b, e + 1) for j in range(i, e + 1))
        if isinstance(d, Box):
            return all(self.holds(d.arg, i, j) for i in range(b, e + 1) for j in range(i, e + 1))
        if isinstance(d, Exists):
            return any(ev.holds(d.body, b, e) for ev in self._variants(d.var))
        if isinstance(d, Forall):
            return all(ev.holds(d.body, b, e) for ev in self._variants(d.var))
        raise TypeError(f"Not a QDDC formula: {d!r}")

    def _variants(self, var: str):
        """Evaluators over every p-variant of the trace."""
        base = self.trace
        vars = base.vars if var in base.vars else base.vars.union([var])
        rows = [base.vars.letter(idx).as_dict() for idx in base.letters]
        for bits in itertools.product((False, True), repeat=len(base)):
            letters = tuple(vars.letter_index({**row, var: bit}) for row, bit in zip(rows, bits))
            yield _Evaluator(Trace(vars, letters))
