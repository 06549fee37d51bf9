"""Exact linear programming over rationals.

A small two-phase primal simplex working entirely in fractions, sufficient
for the desk-scale programs produced by probabilistic entailment.  Bland's
rule (smallest-index entering column, smallest-index basic variable on
ratio ties) guarantees termination.  Solutions are basic, so optima land on
polytope vertices and can be substituted back exactly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

__all__ = ["Constraint", "solve_lp", "OPTIMAL", "INFEASIBLE", "UNBOUNDED"]

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

LE, GE, EQ = "<=", ">=", "=="

# (coefficients, relation, right-hand side)
Constraint = tuple[Sequence[Fraction], str, Fraction]


def solve_lp(objective: Sequence[Fraction], constraints: Sequence[Constraint],
             maximize: bool = False):
    """Optimize objective . x subject to the constraints and x >= 0.

    Returns (status, value, x) with x a list of rationals; value and x are
    None unless status is OPTIMAL.
    """
    n = len(objective)
    target = [Fraction(v) for v in objective]
    if not maximize:
        target = [-v for v in target]

    # Normalize rows to nonnegative right-hand sides.
    rows_in = []
    for coeffs, rel, rhs in constraints:
        coeffs = [Fraction(c) for c in coeffs]
        rhs = Fraction(rhs)
        if len(coeffs) != n:
            raise ValueError("constraint width does not match the objective")
        if rhs < 0:
            coeffs = [-c for c in coeffs]
            rhs = -rhs
            rel = {LE: GE, GE: LE, EQ: EQ}[rel]
        rows_in.append((coeffs, rel, rhs))

    n_slack = sum(1 for _, rel, _ in rows_in if rel in (LE, GE))
    slack_start = n
    art_start = n + n_slack
    n_art = sum(1 for _, rel, _ in rows_in if rel in (GE, EQ))
    cols = art_start + n_art

    rows: list[list[Fraction]] = []
    basis: list[int] = []
    si, ai = slack_start, art_start
    for coeffs, rel, rhs in rows_in:
        row = coeffs + [Fraction(0)] * (cols - n) + [rhs]
        if rel == LE:
            row[si] = Fraction(1)
            basis.append(si)
            si += 1
        elif rel == GE:
            row[si] = Fraction(-1)
            si += 1
            row[ai] = Fraction(1)
            basis.append(ai)
            ai += 1
        else:
            row[ai] = Fraction(1)
            basis.append(ai)
            ai += 1
        rows.append(row)

    # Phase 1: maximize minus the sum of artificials.
    if n_art:
        obj = [Fraction(0)] * (cols + 1)
        for j in range(art_start, cols):
            obj[j] = Fraction(1)
        for i, b in enumerate(basis):
            if b >= art_start:
                obj = [o - r for o, r in zip(obj, rows[i])]
        status = _iterate(rows, basis, obj)
        if status != OPTIMAL or obj[-1] != 0:
            return INFEASIBLE, None, None
        _expel_artificials(rows, basis, art_start)
        rows = [row[:art_start] + row[-1:] for row in rows]
        cols = art_start

    # Phase 2: the real objective.
    obj = [-t for t in target] + [Fraction(0)] * (cols - n + 1)
    for i, b in enumerate(basis):
        if obj[b] != 0:
            factor = obj[b]
            obj = [o - factor * r for o, r in zip(obj, rows[i])]
    status = _iterate(rows, basis, obj)
    if status != OPTIMAL:
        return UNBOUNDED, None, None

    x = [Fraction(0)] * n
    for i, b in enumerate(basis):
        if b < n:
            x[b] = rows[i][-1]
    value = obj[-1]
    if not maximize:
        value = -value
    return OPTIMAL, value, x


def _iterate(rows, basis, obj) -> str:
    """Run simplex pivots until the objective row has no negative entry."""
    cols = len(obj) - 1
    while True:
        pc = next((j for j in range(cols) if obj[j] < 0), None)
        if pc is None:
            return OPTIMAL
        best: Optional[tuple[Fraction, int, int]] = None
        for i, row in enumerate(rows):
            if row[pc] > 0:
                key = (row[-1] / row[pc], basis[i], i)
                if best is None or key < best:
                    best = key
        if best is None:
            return UNBOUNDED
        _pivot(rows, basis, obj, best[2], pc)


def _pivot(rows, basis, obj, pr: int, pc: int):
    piv = rows[pr][pc]
    rows[pr] = [v / piv for v in rows[pr]]
    for i, row in enumerate(rows):
        if i != pr and row[pc] != 0:
            factor = row[pc]
            rows[i] = [v - factor * p for v, p in zip(row, rows[pr])]
    if obj[pc] != 0:
        factor = obj[pc]
        obj[:] = [v - factor * p for v, p in zip(obj, rows[pr])]
    basis[pr] = pc


def _expel_artificials(rows, basis, art_start: int):
    """Pivot zero-valued artificials out of the basis; drop redundant rows."""
    drop = []
    for i in range(len(rows)):
        if basis[i] >= art_start:
            pc = next((j for j in range(art_start) if rows[i][j] != 0), None)
            if pc is None:
                drop.append(i)
            else:
                dummy = [Fraction(0)] * len(rows[i])
                _pivot(rows, basis, dummy, i, pc)
    for i in reversed(drop):
        del rows[i]
        del basis[i]
