"""Dense tableau simplex over exact rationals.

Only the form needed for packing problems is supported:

    maximize c.x  subject to  A x <= b,  x >= 0,  with b >= 0,

so the all-slack basis is feasible from the start and no phase one is
required. Bland's rule picks both entering and leaving variables, which
rules out cycling.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


class UnboundedLP(ArithmeticError):
    pass


@dataclass(frozen=True)
class LPSolution:
    value: Fraction
    x: tuple[Fraction, ...]
    y: tuple[Fraction, ...]  # optimal dual multipliers, one per row
    pivots: int


def solve_packing_lp(c: Sequence, A: Sequence[Sequence], b: Sequence,
                     max_pivots: int = 100_000) -> LPSolution:
    m, n = len(A), len(c)
    if any(len(row) != n for row in A) or len(b) != m:
        raise ValueError("inconsistent LP dimensions")
    c = [Fraction(v) for v in c]
    b = [Fraction(v) for v in b]
    if any(v < 0 for v in b):
        raise ValueError("right-hand side must be nonnegative")

    width = n + m
    # rows: [A | I], rhs separate
    T = [[Fraction(v) for v in row] + [Fraction(int(k == i)) for k in range(m)] for i, row in enumerate(A)]
    rhs = list(b)
    basis = list(range(n, n + m))
    cost = c + [Fraction(0)] * m
    reduced = list(cost)  # c_j - c_B B^-1 A_j; the slack basis has c_B = 0

    pivots = 0
    while True:
        entering = next((j for j in range(width) if reduced[j] > 0), None)
        if entering is None:
            break
        best = None
        for i in range(m):
            a = T[i][entering]
            if a > 0:
                key = (rhs[i] / a, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            raise UnboundedLP("objective is unbounded")
        r = best[1]
        piv = T[r][entering]
        T[r] = [v / piv for v in T[r]]
        rhs[r] /= piv
        for i in range(m):
            f = T[i][entering]
            if i != r and f != 0:
                Ti, Tr = T[i], T[r]
                T[i] = [Ti[k] - f * Tr[k] for k in range(width)]
                rhs[i] -= f * rhs[r]
        f = reduced[entering]
        reduced = [reduced[k] - f * T[r][k] for k in range(width)]
        basis[r] = entering
        pivots += 1
        if pivots > max_pivots:
            raise RuntimeError("pivot budget exhausted")

    x = [Fraction(0)] * width
    for i, j in enumerate(basis):
        x[j] = rhs[i]
    y = tuple(-reduced[n + i] for i in range(m))
    value = sum((ci * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPSolution(value, tuple(x[:n]), y, pivots)
