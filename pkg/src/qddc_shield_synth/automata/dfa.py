"""Total DFAs over powerset alphabets.

Languages are sets of non-empty words. State 0 stands for the empty word
and is never accepting; `explore` splits it off when a construction would
need it to accept.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Optional, Sequence

import networkx as nx

from qddc_shield_synth.constants import DEFAULT_MAX_STATES
from qddc_shield_synth.errors import AlphabetMismatchError, CapacityError
from qddc_shield_synth.prop_logic import VarSet

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Dfa:
    vars: VarSet
    delta: tuple[tuple[int, ...], ...]
    accepting: tuple[bool, ...]
    init: int = 0

    def __post_init__(self):
        n, k = len(self.delta), self.vars.num_letters
        if n == 0:
            raise ValueError("A DFA needs at least one state.")
        if len(self.accepting) != n:
            raise ValueError(f"Expected {n} acceptance flags, got {len(self.accepting)}.")
        if not 0 <= self.init < n:
            raise ValueError(f"Initial state {self.init} out of range.")
        for q, row in enumerate(self.delta):
            if len(row) != k:
                raise ValueError(f"State {q} has {len(row)} transitions, expected {k}.")
            if any(not 0 <= t < n for t in row):
                raise ValueError(f"State {q} has a transition outside 0..{n - 1}.")

    @property
    def num_states(self) -> int:
        return len(self.delta)

    @property
    def num_letters(self) -> int:
        return self.vars.num_letters

    def step(self, q: int, letter: int) -> int:
        return self.delta[q][letter]

    def accepting_states(self) -> list[int]:
        return [q for q, acc in enumerate(self.accepting) if acc]

    def reachable(self) -> list[int]:
        seen = {self.init}
        order = [self.init]
        queue = deque(order)
        while queue:
            q = queue.popleft()
            for t in self.delta[q]:
                if t not in seen:
                    seen.add(t)
                    order.append(t)
                    queue.append(t)
        return order

    def graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(self.num_states))
        for q, row in enumerate(self.delta):
            g.add_edges_from((q, t) for t in set(row))
        return g


@dataclass
class Nfa:
    vars: VarSet
    initial: frozenset[int]
    delta: list[list[frozenset[int]]]
    accepting: list[bool]


def explore(
    vars: VarSet,
    init_key: Hashable,
    step: Callable[[Hashable, int], Hashable],
    accepting: Callable[[Hashable], bool],
    max_states: int = DEFAULT_MAX_STATES,
) -> Dfa:
    """Breadth-first construction of the reachable part of an implicit automaton.

    States are numbered in discovery order with letters tried in index
    order, so the result is canonical for a given step function.
    """
    return explore_keyed(vars, init_key, step, accepting, max_states)[0]


def explore_keyed(
    vars: VarSet,
    init_key: Hashable,
    step: Callable[[Hashable, int], Hashable],
    accepting: Callable[[Hashable], bool],
    max_states: int = DEFAULT_MAX_STATES,
) -> tuple[Dfa, list[Hashable]]:
    """Like `explore`, also returning the key of every state."""
    k = vars.num_letters
    init_accepts = accepting(init_key)
    index: dict[Hashable, int] = {} if init_accepts else {init_key: 0}
    keys: list[Hashable] = [init_key]
    delta: list[tuple[int, ...]] = []
    flags: list[bool] = [False]

    i = 0
    while i < len(keys):
        key = keys[i]
        row = []
        for letter in range(k):
            nxt = step(key, letter)
            t = index.get(nxt)
            if t is None:
                t = len(keys)
                if t >= max_states:
                    raise CapacityError(f"Automaton exceeds the state cap of {max_states}.")
                index[nxt] = t
                keys.append(nxt)
                flags.append(bool(accepting(nxt)))
            row.append(t)
        delta.append(tuple(row))
        i += 1
    return Dfa(vars, tuple(delta), tuple(flags)), keys


def from_table(
    vars: VarSet,
    delta: Sequence[Sequence[int]],
    accepting: Sequence[bool],
    init: int = 0,
    max_states: int = DEFAULT_MAX_STATES,
) -> Dfa:
    """Normalize an arbitrary total table: keep reachable states, renumber, fix the empty word."""
    return explore(vars, init, lambda q, a: delta[q][a], lambda q: bool(accepting[q]), max_states)


def run(a: Dfa, letters: Iterable[int]) -> list[int]:
    """States visited, starting with the initial state."""
    q = a.init
    states = [q]
    for letter in letters:
        q = a.delta[q][letter]
        states.append(q)
    return states


def accepts(a: Dfa, trace) -> bool:
    if trace.vars != a.vars:
        raise AlphabetMismatchError(f"Trace is over {trace.vars!r}, automaton over {a.vars!r}.")
    return a.accepting[run(a, trace.letters)[-1]]


def accepting_row(a: Dfa, trace) -> list[bool]:
    """Acceptance after every prefix of the trace."""
    if trace.vars != a.vars:
        raise AlphabetMismatchError(f"Trace is over {trace.vars!r}, automaton over {a.vars!r}.")
    return [a.accepting[q] for q in run(a, trace.letters)[1:]]


def _same_alphabet(a: Dfa, b: Dfa) -> None:
    if a.vars != b.vars:
        raise AlphabetMismatchError(f"Automata over different alphabets: {a.vars!r} and {b.vars!r}.")


def product(
    a: Dfa,
    b: Dfa,
    combine: Callable[[bool, bool], bool],
    max_states: int = DEFAULT_MAX_STATES,
) -> Dfa:
    _same_alphabet(a, b)
    return explore(
        a.vars,
        (a.init, b.init),
        lambda key, x: (a.delta[key[0]][x], b.delta[key[1]][x]),
        lambda key: combine(a.accepting[key[0]], b.accepting[key[1]]),
        max_states,
    )


def intersect(a: Dfa, b: Dfa, max_states: int = DEFAULT_MAX_STATES) -> Dfa:
    return product(a, b, lambda x, y: x and y, max_states)


def union(a: Dfa, b: Dfa, max_states: int = DEFAULT_MAX_STATES) -> Dfa:
    return product(a, b, lambda x, y: x or y, max_states)


def complement(a: Dfa, max_states: int = DEFAULT_MAX_STATES) -> Dfa:
    return explore(a.vars, a.init, lambda q, x: a.delta[q][x], lambda q: not a.accepting[q], max_states)


def minimize(a: Dfa) -> Dfa:
    """Moore partition refinement followed by canonical renumbering."""
    order = a.reachable()
    local = {q: i for i, q in enumerate(order)}
    delta = [[local[t] for t in a.delta[q]] for q in order]
    flags = [a.accepting[q] for q in order]

    block = [int(f) for f in flags]
    num_blocks = len(set(block))
    while True:
        signatures: dict[tuple, int] = {}
        refined = [
            signatures.setdefault((block[q], tuple(block[t] for t in delta[q])), len(signatures))
            for q in range(len(order))
        ]
        block = refined
        if len(signatures) == num_blocks:
            break
        num_blocks = len(signatures)

    quotient: dict[int, tuple[int, ...]] = {}
    quotient_flags: dict[int, bool] = {}
    for q in range(len(order)):
        if block[q] not in quotient:
            quotient[block[q]] = tuple(block[t] for t in delta[q])
            quotient_flags[block[q]] = flags[q]
    result = explore(a.vars, block[0], lambda c, x: quotient[c][x], lambda c: quotient_flags[c])
    logger.debug("minimize: %d -> %d states", a.num_states, result.num_states)
    return result


def _distinguishing_word(a: Dfa, b: Dfa, differs: Callable[[bool, bool], bool]) -> Optional[list[int]]:
    """Shortest non-empty word on which `differs` holds for the two acceptance flags."""
    _same_alphabet(a, b)
    start = (a.init, b.init)
    parent: dict[tuple[int, int], Optional[tuple[tuple[int, int], int]]] = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        for x in range(a.num_letters):
            nxt = (a.delta[pair[0]][x], b.delta[pair[1]][x])
            if differs(a.accepting[nxt[0]], b.accepting[nxt[1]]):
                word = [x]
                cur = pair
                while parent[cur] is not None:
                    cur, letter = parent[cur]
                    word.append(letter)
                return word[::-1]
            if nxt not in parent:
                parent[nxt] = (pair, x)
                queue.append(nxt)
    return None


def equivalent(a: Dfa, b: Dfa) -> bool:
    return _distinguishing_word(a, b, lambda x, y: x != y) is None


def counterexample(a: Dfa, b: Dfa) -> Optional[list[int]]:
    """A shortest non-empty word in L(a) but not in L(b), if any."""
    return _distinguishing_word(a, b, lambda x, y: x and not y)


def is_subset(a: Dfa, b: Dfa) -> bool:
    return counterexample(a, b) is None


def is_empty(a: Dfa) -> bool:
    g = a.graph()
    return not any(a.accepting[q] for q in nx.descendants(g, a.init))


def is_prefix_closed(a: Dfa) -> bool:
    """True iff no accepted word has a rejected non-empty proper prefix."""
    m = minimize(a)
    g = m.graph()
    after_letter = set().union(*(nx.descendants(g, t) | {t} for t in set(m.delta[m.init])))
    for q in after_letter:
        if m.accepting[q]:
            continue
        below = set().union(*(nx.descendants(g, t) | {t} for t in set(m.delta[q])))
        if any(m.accepting[t] for t in below):
            return False
    return True


def lift(a: Dfa, vars: VarSet) -> Dfa:
    """The same language read over a superset alphabet; extra variables are ignored."""
    missing = [n for n in a.vars if n not in vars]
    if missing:
        raise AlphabetMismatchError(f"Cannot lift {a.vars!r} onto {vars!r}: missing {missing}.")
    if vars == a.vars:
        return a
    proj = vars.projection(a.vars)
    delta = tuple(tuple(row[proj[x]] for x in range(vars.num_letters)) for row in a.delta)
    return Dfa(vars, delta, a.accepting, a.init)


def project(a: Dfa, var: str) -> Nfa:
    """Erase `var` from the alphabet; each letter moves along both of its p-variants."""
    small = a.vars.without([var])
    shift = a.vars.shift(var)
    low = (1 << shift) - 1
    delta = []
    for row in a.delta:
        out = []
        for x in range(small.num_letters):
            base = ((x & ~low) << 1) | (x & low)
            out.append(frozenset({row[base], row[base | (1 << shift)]}))
        delta.append(out)
    return Nfa(small, frozenset({a.init}), delta, list(a.accepting))


def determinize(n: Nfa, max_states: int = DEFAULT_MAX_STATES) -> Dfa:
    """Subset construction."""

    def step(subset: frozenset[int], x: int) -> frozenset[int]:
        out: set[int] = set()
        for q in subset:
            out |= n.delta[q][x]
        return frozenset(out)

    return explore(n.vars, n.initial, step, lambda s: any(n.accepting[q] for q in s), max_states)


def project_determinize(a: Dfa, var: str, max_states: int = DEFAULT_MAX_STATES) -> Dfa:
    return minimize(determinize(project(a, var), max_states))
