"""Brute-force game-tree searches used as oracles for the synthesis tests."""
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from qddc_shield_synth.automata import run
from qddc_shield_synth.qddc import Qddc, Trace, satisfies
from qddc_shield_synth.synthesis import IoPartition, SoftSpec, Supervisor


def staying_safe(d: Qddc, io: IoPartition, depth: int):
    """safe(word) is true when some output strategy keeps every prefix in L(d) for `depth` more steps."""

    @lru_cache(maxsize=None)
    def safe(word: tuple[int, ...], remaining: int) -> bool:
        if word and not satisfies(d, Trace(io.vars, word)):
            return False
        if remaining == 0:
            return True
        return all(
            any(safe((*word, io.letter(i, o)), remaining - 1) for o in range(io.num_outputs))
            for i in range(io.num_inputs)
        )

    return lambda word: safe(tuple(word), depth)


def live_words(sup: Supervisor, max_length: int) -> list[tuple[int, ...]]:
    """Every word of at most `max_length` letters the supervisor allows, the empty word included."""
    words = [()]
    frontier = [((), sup.dfa.init)]
    for _ in range(max_length):
        nxt = []
        for word, q in frontier:
            for x in range(sup.io.vars.num_letters):
                t = sup.dfa.delta[q][x]
                if t != sup.reject:
                    nxt.append(((*word, x), t))
        words += [w for w, _ in nxt]
        frontier = nxt
    return words


class RewardTree:
    """Expected soft reward by explicit expansion of inputs (uniform) and allowed outputs (best)."""

    def __init__(self, sup: Supervisor, soft: SoftSpec):
        self.sup = sup
        self.soft = soft
        self._rewards: dict[tuple[int, ...], int] = {}

    def state(self, word: Sequence[int]) -> int:
        return run(self.sup.dfa, word)[-1]

    def reward(self, word: tuple[int, ...]) -> int:
        if word not in self._rewards:
            trace = Trace(self.sup.io.vars, word)
            self._rewards[word] = sum(r.weight for r in self.soft.requirements if satisfies(r.formula, trace))
        return self._rewards[word]

    def options(self, word: tuple[int, ...], i: int, lookahead: int) -> dict[int, Fraction]:
        """reward of the next letter plus the best expected reward over `lookahead` more steps, per allowed output."""
        io = self.sup.io
        q = self.state(word)
        out = {}
        for o in range(io.num_outputs):
            if self.sup.allowed(q, i, o):
                nxt = (*word, io.letter(i, o))
                out[o] = self.reward(nxt) + self.value(nxt, lookahead)
        return out

    def value(self, word: tuple[int, ...], steps: int) -> Fraction:
        if steps == 0:
            return Fraction(0)
        io = self.sup.io
        total = sum((max(self.options(word, i, steps - 1).values()) for i in range(io.num_inputs)), Fraction(0))
        return total / io.num_inputs

    def best_outputs(self, word: tuple[int, ...], i: int, lookahead: int) -> list[int]:
        options = self.options(word, i, lookahead)
        best = max(options.values())
        return sorted(o for o, v in options.items() if v == best)
