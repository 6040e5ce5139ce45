"""MRMC `.tra` / `.lab` export of a Markov chain."""
from __future__ import annotations

from pathlib import Path

import pandas as pd

from qddc_shield_synth.analysis.dtmc import Dtmc

ROW_SUM_TOLERANCE = 1e-9


def tra_text(m: Dtmc) -> str:
    lines = [f"STATES {m.num_states}", f"TRANSITIONS {m.num_transitions}"]
    for s, row in enumerate(m.transitions):
        for t in sorted(row):
            lines.append(f"{s + 1} {t + 1} {float(row[t]):.12g}")
    return "\n".join(lines) + "\n"


def lab_text(m: Dtmc, label: str = "accept") -> str:
    lines = ["#DECLARATION", label, "#END"]
    lines.extend(f"{s + 1} {label}" for s, acc in enumerate(m.labels) if acc)
    return "\n".join(lines) + "\n"


def write_mrmc(m: Dtmc, stem: Path, label: str = "accept") -> tuple[Path, Path]:
    stem.parent.mkdir(parents=True, exist_ok=True)
    tra = stem.with_suffix(".tra")
    lab = stem.with_suffix(".lab")
    tra.write_text(tra_text(m))
    lab.write_text(lab_text(m, label))
    return tra, lab


def validate_tra(path: Path) -> list[int]:
    """1-based states whose outgoing probabilities do not sum to 1 (empty when the file is valid)."""
    path = Path(path)
    with path.open() as fh:
        states = int(fh.readline().split()[1])
        declared = int(fh.readline().split()[1])
    df = pd.read_csv(path, sep=r"\s+", skiprows=2, header=None, names=["src", "dst", "prob"])
    if len(df) != declared:
        raise ValueError(f"{path.name} declares {declared} transitions but lists {len(df)}.")
    sums = df.groupby("src")["prob"].sum().reindex(range(1, states + 1), fill_value=0.0)
    return [int(s) for s, total in sums.items() if abs(total - 1.0) > ROW_SUM_TOLERANCE]
