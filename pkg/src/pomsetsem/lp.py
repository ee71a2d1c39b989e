"""Exact feasibility of small linear systems over the rationals.

``feasible`` answers whether ``{x >= 0 : A_ub x <= b_ub, A_eq x = b_eq}`` is
non-empty, by phase one of the tableau simplex method with Bland's rule.  All
arithmetic is in :class:`fractions.Fraction`, so the answer is exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Row = Sequence[Fraction]


def feasible(
    a_ub: Sequence[Row] = (),
    b_ub: Sequence[Fraction] = (),
    a_eq: Sequence[Row] = (),
    b_eq: Sequence[Fraction] = (),
    nvars: int | None = None,
) -> bool:
    if nvars is None:
        rows = list(a_ub) + list(a_eq)
        if not rows:
            return True
        nvars = len(rows[0])
    # standard form: one slack per inequality, then one artificial per row
    n_ub = len(a_ub)
    n_rows = n_ub + len(a_eq)
    if n_rows == 0:
        return True
    width = nvars + n_ub + n_rows
    tableau = []
    for i in range(n_rows):
        if i < n_ub:
            coeffs, rhs = list(a_ub[i]), Fraction(b_ub[i])
        else:
            coeffs, rhs = list(a_eq[i - n_ub]), Fraction(b_eq[i - n_ub])
        row = [Fraction(c) for c in coeffs] + [Fraction(0)] * (width - nvars)
        if i < n_ub:
            row[nvars + i] = Fraction(1)
        if rhs < 0:
            row = [-c for c in row]
            rhs = -rhs
        row[nvars + n_ub + i] = Fraction(1)
        row.append(rhs)
        tableau.append(row)
    basis = [nvars + n_ub + i for i in range(n_rows)]
    first_art = nvars + n_ub

    # objective: minimise the sum of artificials, expressed in reduced costs
    cost = [Fraction(0)] * (width + 1)
    for row in tableau:
        for j in range(width + 1):
            if j < first_art or j == width:
                cost[j] -= row[j]

    while True:
        entering = next((j for j in range(width) if cost[j] < 0), None)
        if entering is None:
            break
        leave = None
        best = None
        for i, row in enumerate(tableau):
            c = row[entering]
            if c > 0:
                ratio = row[width] / c
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:  # unbounded direction; cannot happen for phase one
            break
        _pivot(tableau, cost, leave, entering)
        basis[leave] = entering
    return cost[width] == 0


def _pivot(tableau, cost, r, c):
    prow = tableau[r]
    inv = 1 / prow[c]
    if inv != 1:
        prow[:] = [v * inv for v in prow]
    for i, row in enumerate(tableau):
        if i != r:
            f = row[c]
            if f:
                row[:] = [v - f * p for v, p in zip(row, prow)]
    f = cost[c]
    if f:
        cost[:] = [v - f * p for v, p in zip(cost, prow)]
