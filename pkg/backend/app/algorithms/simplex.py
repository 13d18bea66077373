"""
Exact rational simplex

Dense tableau over fractions.Fraction with Bland's rule, so it terminates on
degenerate problems and never rounds. Solves

    maximize    c·x
    subject to  A x >= b,  x >= 0

with a phase-1 artificial basis followed by an optional phase 2.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpResult:
    status: str
    x: Optional[Tuple[Fraction, ...]] = None
    value: Optional[Fraction] = None

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE


class SimplexTableau:
    """Canonical-form tableau: basis columns form an identity"""

    def __init__(self, rows: List[List[Fraction]], rhs: List[Fraction], basis: List[int]):
        self.A = rows
        self.b = rhs
        self.basis = basis
        self.m = len(rows)
        self.width = len(rows[0]) if rows else 0

    def pivot(self, i: int, j: int):
        row = self.A[i]
        piv = row[j]
        if piv != 1:
            self.A[i] = row = [value / piv for value in row]
            self.b[i] /= piv
        for k in range(self.m):
            if k == i:
                continue
            f = self.A[k][j]
            if f:
                other = self.A[k]
                self.A[k] = [a - f * r if r else a for a, r in zip(other, row)]
                self.b[k] -= f * self.b[i]
        self.basis[i] = j

    def reduced_costs(self, c: Sequence[Fraction]) -> List[Fraction]:
        costs = list(c)
        for i, var in enumerate(self.basis):
            cb = c[var]
            if cb:
                row = self.A[i]
                costs = [cost - cb * a if a else cost for cost, a in zip(costs, row)]
        return costs

    def bland_step(self, c: Sequence[Fraction], allowed: int) -> str:
        """One pivot of Bland's rule on columns < allowed"""
        costs = self.reduced_costs(c)
        entering = next((j for j in range(allowed) if costs[j] > 0), None)
        if entering is None:
            return OPTIMAL
        best = None
        for i in range(self.m):
            a = self.A[i][entering]
            if a > 0:
                key = (self.b[i] / a, self.basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return UNBOUNDED
        self.pivot(best[1], entering)
        return "go_on"

    def maximize(self, c: Sequence[Fraction], allowed: int) -> str:
        while True:
            status = self.bland_step(c, allowed)
            if status != "go_on":
                return status

    def objective(self, c: Sequence[Fraction]) -> Fraction:
        return sum((c[var] * self.b[i] for i, var in enumerate(self.basis)), Fraction(0))

    def primal(self, count: int) -> Tuple[Fraction, ...]:
        x = [Fraction(0)] * count
        for i, var in enumerate(self.basis):
            if var < count:
                x[var] = self.b[i]
        return tuple(x)


def solve_lp(
    A: Sequence[Sequence[Fraction]],
    b: Sequence[Fraction],
    c: Optional[Sequence[Fraction]] = None,
) -> LpResult:
    """Maximize c·x over {A x >= b, x >= 0}; feasibility only when c is None"""
    m = len(A)
    nx = len(A[0]) if m else (len(c) if c is not None else 0)
    if m == 0:
        if c is not None and any(ci > 0 for ci in c):
            return LpResult(UNBOUNDED)
        return LpResult(OPTIMAL, tuple(Fraction(0) for _ in range(nx)), Fraction(0))

    # columns: x (nx), surplus (m), artificial (one per row with positive rhs)
    needs_artificial = [Fraction(b[i]) > 0 for i in range(m)]
    artificial_count = sum(needs_artificial)
    width = nx + m + artificial_count
    rows: List[List[Fraction]] = []
    rhs: List[Fraction] = []
    basis: List[int] = []
    next_artificial = nx + m
    for i in range(m):
        row = [Fraction(0)] * width
        value = Fraction(b[i])
        if needs_artificial[i]:
            # a_i·x - s_i + t_i = b_i
            for j in range(nx):
                row[j] = Fraction(A[i][j])
            row[nx + i] = Fraction(-1)
            row[next_artificial] = Fraction(1)
            basis.append(next_artificial)
            next_artificial += 1
        else:
            # -a_i·x + s_i = -b_i >= 0
            for j in range(nx):
                row[j] = -Fraction(A[i][j])
            row[nx + i] = Fraction(1)
            value = -value
            basis.append(nx + i)
        rows.append(row)
        rhs.append(value)

    tableau = SimplexTableau(rows, rhs, basis)

    if artificial_count:
        phase1 = [Fraction(0)] * (nx + m) + [Fraction(-1)] * artificial_count
        tableau.maximize(phase1, width)
        if tableau.objective(phase1) < 0:
            return LpResult(INFEASIBLE)
        _drive_out_artificials(tableau, nx + m)

    x_width = nx + m
    if c is None:
        return LpResult(OPTIMAL, tableau.primal(nx), Fraction(0))

    objective = [Fraction(ci) for ci in c] + [Fraction(0)] * (tableau.width - nx)
    status = tableau.maximize(objective, x_width)
    if status == UNBOUNDED:
        return LpResult(UNBOUNDED)
    return LpResult(OPTIMAL, tableau.primal(nx), tableau.objective(objective))


def _drive_out_artificials(tableau: SimplexTableau, real_width: int):
    """Pivot zero-valued artificials out of the basis; drop rows that stay redundant"""
    i = 0
    while i < tableau.m:
        if tableau.basis[i] >= real_width:
            j = next((j for j in range(real_width) if tableau.A[i][j] != 0), None)
            if j is None:
                del tableau.A[i]
                del tableau.b[i]
                del tableau.basis[i]
                tableau.m -= 1
                continue
            tableau.pivot(i, j)
        i += 1
