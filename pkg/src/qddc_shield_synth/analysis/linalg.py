from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

RESIDUAL_TOLERANCE = 1e-12


def solve_exact(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[Fraction]:
    """Gaussian elimination over the rationals; `a` must be square and non-singular."""
    n = len(b)
    rows = [list(map(Fraction, row)) + [Fraction(rhs)] for row, rhs in zip(a, b)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            raise RuntimeError(f"Singular linear system (column {col}).")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        head = rows[col]
        inv = 1 / head[col]
        for j in range(col, n + 1):
            head[j] *= inv
        for r in range(n):
            if r != col and rows[r][col] != 0:
                factor = rows[r][col]
                row = rows[r]
                for j in range(col, n + 1):
                    if head[j]:
                        row[j] -= factor * head[j]
    return [rows[i][n] for i in range(n)]


def solve_float(a: Sequence[Sequence[float]], b: Sequence[float]) -> list[float]:
    m = np.array(a, dtype=float)
    v = np.array(b, dtype=float)
    x = np.linalg.solve(m, v)
    residual = float(np.max(np.abs(m @ x - v))) if len(v) else 0.0
    if residual > RESIDUAL_TOLERANCE:
        raise RuntimeError(f"Linear solve residual {residual:.3e} exceeds {RESIDUAL_TOLERANCE:.0e}.")
    return x.tolist()


def solve(a, b, exact: bool = True):
    return solve_exact(a, b) if exact else solve_float(a, b)
