"""Exact rational feasibility for Ax = b, x >= 0.

Phase-1 simplex over `fractions.Fraction` with Bland's anti-cycling rule;
no floating point anywhere.  Returns a feasible point or None.
"""

from __future__ import annotations

from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def solve_equality_feasibility(A: list, b: list):
    """Find x >= 0 with Ax = b, exactly, or return None.

    A is a list of rows of Fractions; b a list of Fractions.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    # rows with negative right-hand side are negated so artificials start feasible
    T = []
    rhs = []
    for row, bi in zip(A, b):
        if bi < 0:
            T.append([-v for v in row])
            rhs.append(-bi)
        else:
            T.append(list(row))
            rhs.append(bi)

    # columns n..n+m-1 are artificials; basis starts as the artificials
    for i in range(m):
        T[i].extend(ONE if j == i else ZERO for j in range(m))
    basis = list(range(n, n + m))

    # phase-1 objective: minimize the sum of artificials.
    # reduced-cost row for the current (artificial) basis
    cost = [ZERO] * (n + m)
    for j in range(n + m):
        cost[j] = (ONE if j >= n else ZERO) - sum(T[i][j] for i in range(m))
    value = -sum(rhs)

    while True:
        entering = next((j for j in range(n + m) if cost[j] < 0), None)
        if entering is None:
            break
        # Bland: smallest ratio, ties broken by smallest basis variable index
        leaving = None
        best = None
        for i in range(m):
            coeff = T[i][entering]
            if coeff > 0:
                ratio = rhs[i] / coeff
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leaving]):
                    best = ratio
                    leaving = i
        if leaving is None:
            raise AssertionError("phase-1 objective is bounded; unbounded pivot is impossible")
        piv = T[leaving][entering]
        T[leaving] = [v / piv for v in T[leaving]]
        rhs[leaving] /= piv
        for i in range(m):
            if i != leaving and T[i][entering]:
                factor = T[i][entering]
                T[i] = [v - factor * w for v, w in zip(T[i], T[leaving])]
                rhs[i] -= factor * rhs[leaving]
        if cost[entering]:
            factor = cost[entering]
            cost = [v - factor * w for v, w in zip(cost, T[leaving])]
            value -= factor * rhs[leaving]
        basis[leaving] = entering

    if value != 0:
        return None
    x = [ZERO] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = rhs[i]
    return x
