"""Exact linear programming over the rationals.

A small two-phase primal simplex on Fraction arithmetic.  Bland's rule
guarantees termination; exactness matters because several bounds in this
package are compared with strict gaps of less than one, where floating
point would invite tolerance disputes.

Problems are stated as: minimize c.x subject to A x >= b, x free.
Variables are split into positive and negative parts internally.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from .errors import CoopexError, ValidationError


class LpInfeasibleError(CoopexError):
    pass


class LpUnboundedError(CoopexError):
    pass


@dataclass
class ExactLP:
    """minimize objective.x subject to each (coeffs, rhs) row as coeffs.x >= rhs."""

    objective: List[Fraction]
    rows: List[Tuple[List[Fraction], Fraction]]

    def __post_init__(self):
        n = len(self.objective)
        self.objective = [Fraction(v) for v in self.objective]
        self.rows = [
            ([Fraction(v) for v in coeffs], Fraction(rhs)) for coeffs, rhs in self.rows
        ]
        for coeffs, _ in self.rows:
            if len(coeffs) != n:
                raise ValidationError("constraint width does not match objective")

    def solve(self) -> Tuple[Fraction, List[Fraction]]:
        """Exact optimum (value, solution vector)."""
        n = len(self.objective)
        m = len(self.rows)
        if n == 0:
            if any(rhs > 0 for _, rhs in self.rows):
                raise LpInfeasibleError("positive demand with no variables")
            return Fraction(0), []
        if m == 0:
            if any(self.objective):
                raise LpUnboundedError("unconstrained variable with nonzero cost")
            return Fraction(0), [Fraction(0)] * n
        # split free variables, add surplus: A x+ - A x- - s = b
        nv = 2 * n + m
        A = []
        b = []
        for ri, (coeffs, rhs) in enumerate(self.rows):
            row = [Fraction(0)] * nv
            for j, v in enumerate(coeffs):
                row[j] = v
                row[n + j] = -v
            row[2 * n + ri] = Fraction(-1)
            A.append(row)
            b.append(rhs)
        c = [Fraction(0)] * nv
        for j, v in enumerate(self.objective):
            c[j] = v
            c[n + j] = -v
        value, z = _simplex_standard(A, b, c)
        x = [z[j] - z[n + j] for j in range(n)]
        return value, x


def _simplex_standard(A, b, c):
    """min c.z subject to A z = b, z >= 0; exact two-phase tableau simplex."""
    m = len(A)
    nv = len(c)
    # normalize rows so rhs >= 0, then append artificials
    T = []
    for i in range(m):
        row = list(A[i]) + [b[i]]
        if b[i] < 0:
            row = [-v for v in row]
        T.append(row)
    for i in range(m):
        for j in range(m):
            T[i].insert(nv + j, Fraction(1 if i == j else 0))
    basis = list(range(nv, nv + m))
    phase1 = [Fraction(0)] * nv + [Fraction(1)] * m
    val = _optimize(T, basis, phase1, nv + m)
    if val != 0:
        raise LpInfeasibleError("constraint system has no solution")
    _drive_out_artificials(T, basis, nv)
    # drop artificial columns
    for row in T:
        del row[nv:nv + m]
    phase2 = list(c)
    val = _optimize(T, basis, phase2, nv)
    z = [Fraction(0)] * nv
    for i, bi in enumerate(basis):
        z[bi] = T[i][-1]
    return val, z


def _optimize(T, basis, cost, ncols):
    """Run Bland-rule simplex to optimality in place; returns objective."""
    while True:
        # reduced costs: cost_j - sum_i cost[basis_i] * T[i][j]
        enter = -1
        for j in range(ncols):
            rc = cost[j]
            for i, bi in enumerate(basis):
                if cost[bi] and T[i][j]:
                    rc -= cost[bi] * T[i][j]
            if rc < 0:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        best = None
        for i in range(len(T)):
            if T[i][enter] > 0:
                ratio = T[i][-1] / T[i][enter]
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    best = ratio
                    leave = i
        if leave < 0:
            raise LpUnboundedError("objective unbounded below")
        _pivot(T, basis, leave, enter)
    obj = Fraction(0)
    for i, bi in enumerate(basis):
        if cost[bi]:
            obj += cost[bi] * T[i][-1]
    return obj


def _pivot(T, basis, r, c):
    piv = T[r][c]
    T[r] = [v / piv for v in T[r]]
    for i in range(len(T)):
        if i != r and T[i][c]:
            f = T[i][c]
            T[i] = [a - f * b for a, b in zip(T[i], T[r])]
    basis[r] = c


def _drive_out_artificials(T, basis, nv):
    """Pivot artificial variables out of the basis (or drop redundant rows)."""
    i = 0
    while i < len(T):
        if basis[i] >= nv:
            col = next((j for j in range(nv) if T[i][j] != 0), None)
            if col is None:
                del T[i]
                del basis[i]
                continue
            _pivot(T, basis, i, col)
        i += 1


def solve_min(objective: Sequence, constraints) -> Tuple[Fraction, List[Fraction]]:
    """Convenience wrapper around ExactLP.solve."""
    return ExactLP(list(objective), list(constraints)).solve()
