"""Exact rational simplex (two-phase, Bland's rule).

Solves max c.x subject to A x = b, x >= 0 with Fraction arithmetic.
Bland's smallest-index rule is used for both entering and leaving
variables, so the method terminates on degenerate problems.  Problem
sizes here are tiny (tens of variables), so the dense tableau is fine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: tuple[Fraction, ...] | None
    value: Fraction | None


def _pivot(tableau: list[list[Fraction]], basis: list[int], row: int, col: int):
    piv = tableau[row][col]
    inv = _ONE / piv
    tableau[row] = [v * inv for v in tableau[row]]
    prow = tableau[row]
    for r, line in enumerate(tableau):
        if r != row and line[col]:
            f = line[col]
            tableau[r] = [a - f * b for a, b in zip(line, prow)]
    basis[row] = col


def _optimize(tableau: list[list[Fraction]], basis: list[int], cost: list[Fraction]) -> str:
    """Run simplex on rows tableau (last entry of each row is the rhs),
    maximizing cost.x.  Mutates tableau/basis; returns 'optimal' or
    'unbounded'."""
    m = len(tableau)
    ncols = len(tableau[0]) - 1
    while True:
        # reduced costs via the basic cost vector
        duals = [cost[basis[r]] for r in range(m)]
        entering = -1
        for j in range(ncols):
            if j in basis:
                continue
            reduced = cost[j] - sum(
                (duals[r] * tableau[r][j] for r in range(m) if tableau[r][j]),
                _ZERO,
            )
            if reduced > 0:
                entering = j
                break  # Bland: smallest improving index
        if entering < 0:
            return "optimal"
        leaving = -1
        best = None
        for r in range(m):
            a = tableau[r][entering]
            if a > 0:
                ratio = tableau[r][-1] / a
                if best is None or ratio < best or (
                    ratio == best and basis[r] < basis[leaving]
                ):
                    best = ratio
                    leaving = r
        if leaving < 0:
            return "unbounded"
        _pivot(tableau, basis, leaving, entering)


def lp_maximize(
    objective: Sequence[Fraction],
    eq_lhs: Sequence[Sequence[Fraction]],
    eq_rhs: Sequence[Fraction],
) -> LPResult:
    """Maximize objective.x subject to eq_lhs x = eq_rhs, x >= 0."""
    n = len(objective)
    rows = [list(map(Fraction, r)) for r in eq_lhs]
    rhs = [Fraction(v) for v in eq_rhs]
    if any(len(r) != n for r in rows):
        raise ValueError("constraint width does not match objective length")
    m = len(rows)
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]

    # phase 1: artificial variable per row
    tableau = [rows[i] + [_ONE if j == i else _ZERO for j in range(m)] + [rhs[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    phase1_cost = [_ZERO] * n + [Fraction(-1)] * m
    _optimize(tableau, basis, phase1_cost)
    infeasibility = sum((tableau[r][-1] for r in range(m) if basis[r] >= n), _ZERO)
    if infeasibility > 0:
        return LPResult("infeasible", None, None)
    # drive leftover artificials out of the basis
    for r in range(m):
        if basis[r] >= n:
            col = next((j for j in range(n) if tableau[r][j]), None)
            if col is not None:
                _pivot(tableau, basis, r, col)
    live = [r for r in range(m) if basis[r] < n]
    tableau = [tableau[r][:n] + [tableau[r][-1]] for r in live]
    basis = [basis[r] for r in live]

    cost = list(map(Fraction, objective))
    status = _optimize(tableau, basis, cost)
    if status != "optimal":
        return LPResult("unbounded", None, None)
    x = [_ZERO] * n
    for r, b in enumerate(basis):
        x[b] = tableau[r][-1]
    value = sum((c * v for c, v in zip(cost, x) if v), _ZERO)
    return LPResult("optimal", tuple(x), value)
