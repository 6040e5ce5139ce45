"""Line-oriented controller tables: `state input -> output next`."""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from qddc_shield_synth.errors import ControllerIntegrityError, SpecFileError
from qddc_shield_synth.prop_logic import VarSet
from qddc_shield_synth.synthesis.supervisor import Controller
from utils.code_utils import strip_line_comments

_MOVE = re.compile(r"^(\d+)\s+(\d+)\s*->\s*(\d+)\s+(\d+)$")


@dataclass(frozen=True)
class ControllerTable:
    inputs: VarSet
    outputs: VarSet
    init: int
    moves: dict[tuple[int, int], tuple[int, int]]

    def move(self, state: int, i: int) -> tuple[int, int]:
        try:
            return self.moves[(state, i)]
        except KeyError:
            raise ControllerIntegrityError(f"Controller table has no move for state {state}, input {i}.") from None

    @property
    def states(self) -> set[int]:
        return {s for s, _ in self.moves} | {t for _, t in self.moves.values()}

    @property
    def num_states(self) -> int:
        """Size of the controller automaton, counting the reject sink when outputs can be refused."""
        return len(self.states) + (1 if self.outputs.num_letters > 1 else 0)

    def check_total(self) -> None:
        """Every state reachable from init must have a move for every input letter."""
        seen = {self.init}
        frontier = [self.init]
        while frontier:
            s = frontier.pop()
            for i in range(self.inputs.num_letters):
                _, t = self.move(s, i)
                if t not in seen:
                    seen.add(t)
                    frontier.append(t)


def controller_table(ctrl: Controller) -> ControllerTable:
    moves = {}
    for q in ctrl.live_states():
        for i in range(ctrl.io.num_inputs):
            moves[(q, i)] = ctrl.move(q, i)
    return ControllerTable(ctrl.io.inputs, ctrl.io.outputs, ctrl.dfa.init, moves)


def to_text(table: ControllerTable) -> str:
    lines = [
        f"inputs: {' '.join(table.inputs)}",
        f"outputs: {' '.join(table.outputs)}",
        f"init: {table.init}",
    ]
    lines.extend(f"{s} {i} -> {o} {t}" for (s, i), (o, t) in sorted(table.moves.items()))
    return "\n".join(lines) + "\n"


def from_text(text: str) -> ControllerTable:
    header: dict[str, str] = {}
    moves: dict[tuple[int, int], tuple[int, int]] = {}
    for lineno, raw in enumerate(strip_line_comments(text).splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        m = _MOVE.match(line)
        if m:
            s, i, o, t = (int(g) for g in m.groups())
            if (s, i) in moves:
                raise SpecFileError(f"line {lineno}: duplicate move for state {s}, input {i}")
            moves[(s, i)] = (o, t)
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise SpecFileError(f"line {lineno}: expected 'key: value' or 'state input -> output next', got {line!r}")
        header[key.strip()] = value.strip()

    missing = [k for k in ("inputs", "outputs", "init") if k not in header]
    if missing:
        raise SpecFileError(f"Controller table is missing header(s) {missing}.")
    table = ControllerTable(
        VarSet(header["inputs"].split()),
        VarSet(header["outputs"].split()),
        int(header["init"]),
        moves,
    )
    bad = [(k, v) for k, v in moves.items() if k[1] >= table.inputs.num_letters or v[0] >= table.outputs.num_letters]
    if bad:
        raise ControllerIntegrityError(f"Controller table has letters outside the declared alphabets: {bad[:3]}.")
    table.check_total()
    return table


def write_controller(table: ControllerTable, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_text(table))
    return path


def read_controller(path: Path) -> ControllerTable:
    return from_text(Path(path).read_text())
