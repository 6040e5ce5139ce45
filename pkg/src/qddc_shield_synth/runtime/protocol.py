"""Line protocol: `b b b` in, `b b dev ok` out."""
from __future__ import annotations

from typing import Iterable, Iterator

from qddc_shield_synth.errors import AlphabetMismatchError
from qddc_shield_synth.prop_logic import VarSet
from qddc_shield_synth.runtime.instance import ShieldInstance, StepOutput


def parse_line(line: str, vars: VarSet) -> int:
    bits = line.split()
    if len(bits) != len(vars) or any(b not in ("0", "1") for b in bits):
        raise AlphabetMismatchError(
            f"Expected {len(vars)} space-separated 0/1 values for {' '.join(vars)}, got {line.strip()!r}."
        )
    return int("".join(bits), 2) if bits else 0


def format_output(out: StepOutput) -> str:
    bits = [str(int(v)) for v in out.bits.values()]
    return " ".join([*bits, str(int(out.deviation)), str(int(out.sse_ok))])


def serve_lines(instance: ShieldInstance, lines: Iterable[str]) -> Iterator[str]:
    """One output line per non-blank input line."""
    vars = instance.model.interface.io_vars
    for line in lines:
        if not line.strip():
            continue
        yield format_output(instance.step(parse_line(line, vars)))
