"""Exact revised simplex (Bland's rule) with FLINT rational basis solves.

Used for programs too large for the dense tableau, either from scratch or
warm-started from a basis proposed by a floating-point solver.  Column
indices ``>= ns`` denote the artificial identity column of row ``id - ns``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import flint

from .program import StandardResult

ZERO = Fraction(0)


def fmpq(v) -> "flint.fmpq":
    if isinstance(v, Fraction):
        return flint.fmpq(v.numerator, v.denominator)
    return flint.fmpq(int(v))


def to_fraction(q) -> Fraction:
    return Fraction(int(q.p), int(q.q))


def basis_matrix(cols: Sequence[dict], m: int, ns: int, basis: Sequence[int]) -> "flint.fmpq_mat":
    entries = [[0] * m for _ in range(m)]
    for k, j in enumerate(basis):
        if j >= ns:
            entries[j - ns][k] = 1
        else:
            for i, v in cols[j].items():
                entries[i][k] = fmpq(v)
    return flint.fmpq_mat(entries)


def solve_column(B, rhs: Sequence) -> list[Fraction]:
    sol = B.solve(flint.fmpq_mat([[fmpq(v)] for v in rhs]))
    return [to_fraction(sol[i, 0]) for i in range(sol.nrows())]


def basis_solution(cols, m, ns, basis, b, cost):
    """x_B and u = B^{-T} c_B for a square basis (flint raises if B is singular)."""
    B = basis_matrix(cols, m, ns, basis)
    xb = solve_column(B, b)
    cb = [cost[j] for j in basis]  # cost covers artificials too
    u = solve_column(B.transpose(), cb)
    return B, xb, u


def reduced_costs(cols, cost, u) -> list[Fraction]:
    return [c - sum((u[i] * v for i, v in col.items() if u[i]), ZERO) for c, col in zip(cost, cols)]


def _iterate(cols, m, ns, b, cost, basis, phase_one: bool, max_pivots: int):
    """Bland pivots in place; returns (status, ray data, pivots, x_B, u)."""
    pivots = 0
    while True:
        B, xb, u = basis_solution(cols, m, ns, basis, b, cost)
        in_basis = set(basis)
        limit = ns + m if phase_one else ns
        q = None
        for j in range(limit):
            if j in in_basis:
                continue
            col = cols[j] if j < ns else {j - ns: Fraction(1)}
            r = cost[j] - sum((u[i] * v for i, v in col.items() if u[i]), ZERO)
            if r > 0:
                q = j
                break
        if q is None:
            return "optimal", None, pivots, xb, u
        colq = cols[q] if q < ns else {q - ns: Fraction(1)}
        dense = [ZERO] * m
        for i, v in colq.items():
            dense[i] = v
        w = solve_column(B, dense)
        r_best, best = None, None
        if not phase_one:
            # basic artificials must stay at zero: any nonzero entry blocks at step 0
            for i, j in enumerate(basis):
                if j >= ns and w[i] != 0:
                    if r_best is None or j < basis[r_best]:
                        r_best, best = i, ZERO
        if r_best is None:
            for i, wi in enumerate(w):
                if wi > 0:
                    ratio = xb[i] / wi
                    if best is None or ratio < best or (ratio == best and basis[i] < basis[r_best]):
                        best, r_best = ratio, i
        if r_best is None:
            return "unbounded", (q, w), pivots, xb, u
        basis[r_best] = q
        pivots += 1
        if pivots > max_pivots:
            raise RuntimeError(f"revised simplex exceeded {max_pivots} pivots")


def solve_revised(cols, m: int, b, cost, ns: int, start=None, max_pivots: int = 100_000) -> StandardResult:
    """Two-phase exact simplex on A x = b (b >= 0), x >= 0, maximizing cost^T x.

    ``start`` is an optional primal-feasible basis (artificials at zero); when
    given, phase one is skipped.
    """
    full = list(cost) + [ZERO] * m
    pivots = 0
    if start is None:
        basis = [ns + i for i in range(m)]
        phase1 = [ZERO] * ns + [Fraction(-1)] * m
        status, _, p1, xb, u = _iterate(cols, m, ns, b, phase1, basis, True, max_pivots)
        pivots += p1
        if any(j >= ns and xb[i] != 0 for i, j in enumerate(basis)):
            return StandardResult("infeasible", u=u, pivots=pivots, basis=tuple(basis))
    else:
        basis = list(start)
    status, extra, p2, xb, u = _iterate(cols, m, ns, b, full, basis, False, max_pivots)
    pivots += p2
    x = [ZERO] * ns
    for i, j in enumerate(basis):
        if j < ns:
            x[j] = xb[i]
    if status == "unbounded":
        q, w = extra
        ray = [ZERO] * ns
        ray[q] = Fraction(1)
        for i, j in enumerate(basis):
            if j < ns:
                ray[j] = -w[i]
        return StandardResult("unbounded", x=x, ray=ray, pivots=pivots, basis=tuple(basis))
    return StandardResult("optimal", x=x, u=u, pivots=pivots, basis=tuple(basis))
