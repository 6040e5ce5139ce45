"""Structural QDDC to minimal DFA compilation.

Each core node maps to a small automaton or to an automaton operation on
the automata of its children; the result is minimized after every node.
"""
from __future__ import annotations

import logging
from typing import Collection

from qddc_shield_synth.automata.dfa import (
    Dfa,
    Nfa,
    complement,
    determinize,
    explore,
    intersect,
    lift,
    minimize,
    project_determinize,
    union,
)
from qddc_shield_synth.constants import DEFAULT_MAX_STATES
from qddc_shield_synth.errors import DeclarationError
from qddc_shield_synth.prop_logic import VarSet, truth_table
from qddc_shield_synth.qddc.ast import (
    All,
    AllButLast,
    And,
    Chop,
    Exists,
    Not,
    Or,
    Point,
    Qddc,
    ScountCmp,
    SdurCmp,
    SlenCmp,
    compare,
    free_vars,
)
from qddc_shield_synth.qddc.desugar import desugar

logger = logging.getLogger(__name__)

_INIT = "init"
_DEAD = "dead"


def compile(d: Qddc, vars: VarSet | Collection[str], max_states: int = DEFAULT_MAX_STATES) -> Dfa:
    """Minimal total DFA accepting exactly the non-empty words satisfying `d`."""
    vars = vars if isinstance(vars, VarSet) else VarSet(vars)
    undeclared = sorted(free_vars(d) - set(vars))
    if undeclared:
        raise DeclarationError(f"Formula uses undeclared variable(s) {undeclared}; declared {list(vars)}.")
    result = _Compiler(max_states).build(desugar(d), vars)
    logger.debug("compiled formula over %r into %d states", vars, result.num_states)
    return result


class _Compiler:
    def __init__(self, max_states: int):
        self.max_states = max_states
        self.cache: dict[tuple[Qddc, VarSet], Dfa] = {}

    def build(self, d: Qddc, vars: VarSet) -> Dfa:
        key = (d, vars)
        cached = self.cache.get(key)
        if cached is None:
            cached = minimize(self._build(d, vars))
            self.cache[key] = cached
        return cached

    def _build(self, d: Qddc, vars: VarSet) -> Dfa:
        cap = self.max_states
        if isinstance(d, Point):
            table = truth_table(d.phi, vars)
            return explore(
                vars,
                _INIT,
                lambda s, x: ("one" if table[x] else _DEAD) if s == _INIT else _DEAD,
                lambda s: s == "one",
                cap,
            )
        if isinstance(d, All):
            table = truth_table(d.phi, vars)
            return explore(
                vars,
                _INIT,
                lambda s, x: "ok" if s != _DEAD and table[x] else _DEAD,
                lambda s: s == "ok",
                cap,
            )
        if isinstance(d, AllButLast):
            table = truth_table(d.phi, vars)

            # (letters read is at least two, last letter satisfies phi)
            def step(s, x):
                if s == _DEAD:
                    return _DEAD
                if s != _INIT and not s[1]:
                    return _DEAD
                return ("one" if s == _INIT else "more", table[x])

            return explore(vars, _INIT, step, lambda s: s not in (_INIT, _DEAD) and s[0] == "more", cap)
        if isinstance(d, SlenCmp):
            top = d.bound + 1
            return explore(
                vars,
                -1,
                lambda n, x: min(n + 1, top),
                lambda n: n >= 0 and compare(d.op, n, d.bound),
                cap,
            )
        if isinstance(d, ScountCmp):
            table = truth_table(d.phi, vars)
            top = d.bound + 1
            return explore(
                vars,
                _INIT,
                lambda n, x: min((0 if n == _INIT else n) + table[x], top),
                lambda n: n != _INIT and compare(d.op, n, d.bound),
                cap,
            )
        if isinstance(d, SdurCmp):
            table = truth_table(d.phi, vars)
            top = d.bound + 1

            # (satisfying positions before the last one, last position satisfies phi)
            def step(s, x):
                if s == _INIT:
                    return (0, table[x])
                return (min(s[0] + s[1], top), table[x])

            return explore(vars, _INIT, step, lambda s: s != _INIT and compare(d.op, s[0], d.bound), cap)
        if isinstance(d, Not):
            return complement(self.build(d.arg, vars), cap)
        if isinstance(d, And):
            return intersect(self.build(d.left, vars), self.build(d.right, vars), cap)
        if isinstance(d, Or):
            return union(self.build(d.left, vars), self.build(d.right, vars), cap)
        if isinstance(d, Chop):
            return determinize(fusion(self.build(d.left, vars), self.build(d.right, vars)), cap)
        if isinstance(d, Exists):
            if d.var in vars:
                inner = self.build(d.body, vars)
                return lift(project_determinize(inner, d.var, cap), vars)
            inner = self.build(d.body, vars.union([d.var]))
            return project_determinize(inner, d.var, cap)
        raise TypeError(f"Not a core QDDC formula: {d!r}")


def fusion(a: Dfa, b: Dfa) -> Nfa:
    """NFA for the chop of two languages where the chop letter is read by both sides.

    States 0..|a|-1 run `a`; states |a|.. run `b`. Whenever `a` reaches an
    accepting state on letter x, `b` is started and reads that same x.
    """
    offset = a.num_states
    delta = []
    for q in range(a.num_states):
        row = []
        for x in range(a.num_letters):
            t = a.delta[q][x]
            succ = {t}
            if a.accepting[t]:
                succ.add(offset + b.delta[b.init][x])
            row.append(frozenset(succ))
        delta.append(row)
    for q in range(b.num_states):
        delta.append([frozenset({offset + t}) for t in b.delta[q]])
    accepting = [False] * offset + list(b.accepting)
    return Nfa(a.vars, frozenset({a.init}), delta, accepting)
