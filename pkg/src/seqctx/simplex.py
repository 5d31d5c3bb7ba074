"""Exact rational primal simplex for ``max c.x  s.t.  A x <= b, x >= 0`` with ``b >= 0``.

The slack basis is feasible from the start, so no phase one is needed.
Pivoting follows Bland's rule: the entering column is the lowest-index
variable with positive reduced cost, and ratio-test ties leave by the
lowest-index basic variable.  Bland's rule cannot cycle, so the loop
terminates; every step is exact ``Fraction`` arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


class Unbounded(ArithmeticError):
    pass


@dataclass(frozen=True)
class LPSolution:
    value: Fraction
    x: tuple[Fraction, ...]
    pivots: int


def maximize(
    c: Sequence, A: Sequence[Sequence], b: Sequence
) -> LPSolution:
    m = len(A)
    n = len(c)
    if len(b) != m or any(len(row) != n for row in A):
        raise ValueError("LP dimensions are inconsistent")
    if any(Fraction(v) < 0 for v in b):
        raise ValueError("right-hand side must be nonnegative")

    # Tableau rows: [A | I | b]; variables 0..n-1 structural, n..n+m-1 slack.
    width = n + m
    rows = []
    for i in range(m):
        row = [Fraction(v) for v in A[i]] + [Fraction(0)] * m + [Fraction(b[i])]
        row[n + i] = Fraction(1)
        rows.append(row)
    # Reduced costs (objective row) and current objective value.
    cost = [Fraction(v) for v in c] + [Fraction(0)] * m
    value = Fraction(0)
    basis = list(range(n, n + m))

    pivots = 0
    while True:
        enter = next((j for j in range(width) if cost[j] > 0), None)
        if enter is None:
            break
        leave = None
        best_ratio = None
        for i in range(m):
            a = rows[i][enter]
            if a > 0:
                ratio = rows[i][-1] / a
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < basis[leave])
                ):
                    best_ratio = ratio
                    leave = i
        if leave is None:
            raise Unbounded("objective is unbounded above")

        prow = rows[leave]
        piv = prow[enter]
        if piv != 1:
            prow = [v / piv for v in prow]
            rows[leave] = prow
        for i in range(m):
            if i != leave:
                f = rows[i][enter]
                if f:
                    row = rows[i]
                    rows[i] = [v - f * p for v, p in zip(row, prow)]
        f = cost[enter]
        cost = [v - f * p for v, p in zip(cost, prow[:-1])]
        value += f * prow[-1]
        basis[leave] = enter
        pivots += 1

    x = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = rows[i][-1]
    return LPSolution(value, tuple(x), pivots)
