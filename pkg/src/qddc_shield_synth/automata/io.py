from __future__ import annotations

from collections import defaultdict
from pathlib import Path
from typing import Iterable

from qddc_shield_synth.automata.dfa import Dfa, from_table
from qddc_shield_synth.errors import SpecFileError
from qddc_shield_synth.prop_logic import VarSet
from utils.code_utils import strip_line_comments


def letter_cubes(letters: Iterable[int], vars: VarSet) -> list[str]:
    """Merge letter indices into cubes over `vars`; `-` marks a don't-care bit."""
    n = len(vars)
    cubes = {format(x, f"0{n}b") if n else "" for x in letters}
    while True:
        merged: set[str] = set()
        used: set[str] = set()
        ordered = sorted(cubes)
        for i, c1 in enumerate(ordered):
            for c2 in ordered[i + 1 :]:
                diff = [k for k in range(n) if c1[k] != c2[k]]
                if len(diff) == 1 and "-" not in (c1[diff[0]], c2[diff[0]]):
                    merged.add(c1[: diff[0]] + "-" + c1[diff[0] + 1 :])
                    used.update((c1, c2))
        if not merged:
            break
        cubes = (cubes - used) | merged
    return sorted(cubes)


def cube_to_text(cube: str, vars: VarSet) -> str:
    lits = [name if bit == "1" else f"!{name}" for name, bit in zip(vars, cube) if bit != "-"]
    return " && ".join(lits) if lits else "true"


def to_dot(a: Dfa, name: str = "dfa") -> str:
    lines = [f"digraph \"{name}\" {{", "  rankdir=LR;", '  start [shape=point, label=""];']
    for q in range(a.num_states):
        shape = "doublecircle" if a.accepting[q] else "circle"
        lines.append(f'  {q} [shape={shape}, label="{q}"];')
    lines.append(f"  start -> {a.init};")
    for q, row in enumerate(a.delta):
        edges: dict[int, list[int]] = defaultdict(list)
        for x, t in enumerate(row):
            edges[t].append(x)
        for t, letters in sorted(edges.items()):
            label = " || ".join(f"({cube_to_text(c, a.vars)})" for c in letter_cubes(letters, a.vars))
            lines.append(f'  {q} -> {t} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_text(a: Dfa) -> str:
    lines = [
        f"vars: {' '.join(a.vars)}",
        f"states: {a.num_states}",
        f"init: {a.init}",
        f"accepting: {' '.join(str(q) for q in a.accepting_states())}",
    ]
    for q, row in enumerate(a.delta):
        lines.extend(f"{q} {x} {t}" for x, t in enumerate(row))
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Dfa:
    header: dict[str, str] = {}
    triples: list[tuple[int, int, int]] = []
    for lineno, raw in enumerate(strip_line_comments(text).splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if ":" in line:
            key, _, value = line.partition(":")
            header[key.strip()] = value.strip()
            continue
        parts = line.split()
        if len(parts) != 3 or not all(p.isdigit() for p in parts):
            raise SpecFileError(f"line {lineno}: expected 'from letter to', got {line!r}")
        triples.append((int(parts[0]), int(parts[1]), int(parts[2])))

    for key in ("vars", "states", "init"):
        if key not in header:
            raise SpecFileError(f"DFA file is missing the {key!r} header.")
    vars = VarSet(header["vars"].split())
    try:
        n = int(header["states"])
        init = int(header["init"])
        accepting = {int(q) for q in header.get("accepting", "").split()}
    except ValueError as e:
        raise SpecFileError(f"Malformed DFA header: {e}") from e
    if n < 1 or not 0 <= init < n or any(not 0 <= q < n for q in accepting):
        raise SpecFileError(f"DFA header is inconsistent: states={n}, init={init}, accepting={sorted(accepting)}.")

    table: list[list[int | None]] = [[None] * vars.num_letters for _ in range(n)]
    for q, x, t in triples:
        if not (0 <= q < n and 0 <= x < vars.num_letters and 0 <= t < n):
            raise SpecFileError(f"Transition {q} {x} {t} is out of range.")
        table[q][x] = t
    gaps = [(q, x) for q in range(n) for x in range(vars.num_letters) if table[q][x] is None]
    if gaps:
        raise SpecFileError(f"DFA is not total; first missing (state, letter) pairs: {gaps[:5]}.")
    return from_table(vars, table, [q in accepting for q in range(n)], init)


def write_dfa(a: Dfa, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_text(a) if path.suffix != ".dot" else to_dot(a, path.stem.replace("-", "_")))
    return path


def read_dfa(path: Path) -> Dfa:
    return from_text(Path(path).read_text())
