"""Exact solves of large programs from a floating-point basis.

HiGHS proposes an optimal basis; the basis is then solved and checked in
exact rational arithmetic with FLINT.  Nothing HiGHS reports is trusted: a
basis that fails the exact checks is handed to the exact revised simplex,
and the final answer is always re-verified against every original row.

Redundant equality rows are removed first by a rank computation modulo the
prime 2^61 - 1 on the augmented matrix [A | b] (rows independent modulo p
are independent over Q, so exactness of the kept rows is not affected).
Rows dropped by mistake would surface as a failed final verification, which
triggers an exact solve of the unreduced system.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import flint
import highspy
import numpy as np
from scipy.sparse import csc_matrix

from .program import StandardForm, StandardResult
from .revised import basis_matrix, fmpq, solve_column, solve_revised

ZERO = Fraction(0)
PRIME = (1 << 61) - 1


def _mod(v: Fraction) -> int:
    return v.numerator % PRIME * pow(v.denominator, -1, PRIME) % PRIME


def independent_rows(rows: Sequence[dict], rhs: Sequence[Fraction], width: int) -> list[int]:
    """Indices of a maximal independent subset of the rows of [A | b] (rank mod p)."""
    m = len(rows)
    if m == 0:
        return []
    dense = [[0] * m for _ in range(width + 1)]
    for i, row in enumerate(rows):
        for j, v in row.items():
            dense[j][i] = _mod(v)
        if rhs[i]:
            dense[width][i] = _mod(rhs[i])
    R, rank = flint.nmod_mat(dense, PRIME).rref()
    flat = R.entries()
    pivots, col = [], 0
    for r in range(rank):
        base = r * m
        while int(flat[base + col]) == 0:
            col += 1
        pivots.append(col)
    return pivots


def _local_columns(rows: Sequence[dict], width: int) -> list[dict]:
    cols: list[dict] = [dict() for _ in range(width)]
    for i, row in enumerate(rows):
        for j, v in row.items():
            cols[j][i] = v
    return cols


def certify_basis(cols, b, cost, basic_cols, basic_rows):
    """Exact x, u for the basis [A_B | I_rows]; None when it is not optimal and feasible.

    Basic row slacks reported by HiGHS enter as identity columns fixed at 0.
    """
    m = len(b)
    ns = len(cols)
    basis = list(basic_cols) + [ns + r for r in basic_rows]
    if len(basis) != m:
        return None
    try:
        B = basis_matrix(cols, m, ns, basis)
        xb = solve_column(B, b)
        u = solve_column(B.transpose(), [cost[j] if j < ns else ZERO for j in basis])
    except (ZeroDivisionError, ValueError):
        return None
    if any(v < 0 for v in xb[: len(basic_cols)]) or any(v != 0 for v in xb[len(basic_cols):]):
        return None
    for c, col in zip(cost, cols):
        if c - sum((u[i] * v for i, v in col.items() if u[i]), ZERO) > 0:
            return None
    x = [ZERO] * ns
    for j, v in zip(basic_cols, xb):
        x[j] = v
    return x, u, tuple(basis)


def _feasible_start(cols, b, basic_cols, basic_rows):
    m, ns = len(b), len(cols)
    basis = list(basic_cols) + [ns + r for r in basic_rows]
    if len(basis) != m:
        return None
    try:
        xb = solve_column(basis_matrix(cols, m, ns, basis), b)
    except (ZeroDivisionError, ValueError):
        return None
    if any(v < 0 for v in xb[: len(basic_cols)]) or any(v != 0 for v in xb[len(basic_cols):]):
        return None
    return basis


class _HighsModel:
    def __init__(self, cols: Sequence[dict], b: Sequence[Fraction]):
        m, ns = len(b), len(cols)
        indptr, indices, data = [0], [], []
        for col in cols:
            for i in sorted(col):
                indices.append(i)
                data.append(float(col[i]))
            indptr.append(len(indices))
        A = csc_matrix((np.array(data, float), np.array(indices, np.int32), np.array(indptr, np.int32)), shape=(m, ns))
        lp = highspy.HighsLp()
        lp.num_col_ = ns
        lp.num_row_ = m
        lp.col_lower_ = np.zeros(ns)
        lp.col_upper_ = np.full(ns, highspy.kHighsInf)
        rhs = np.array([float(v) for v in b])
        lp.row_lower_ = rhs
        lp.row_upper_ = rhs
        lp.a_matrix_.format_ = highspy.MatrixFormat.kColwise
        lp.a_matrix_.start_ = A.indptr
        lp.a_matrix_.index_ = A.indices
        lp.a_matrix_.value_ = A.data
        lp.sense_ = highspy.ObjSense.kMaximize
        self.lp = lp

    def solve(self, cost: Sequence[Fraction]):
        h = highspy.Highs()
        h.setOptionValue("output_flag", False)
        h.setOptionValue("threads", 1)
        h.setOptionValue("random_seed", 0)
        self.lp.col_cost_ = np.array([float(c) for c in cost])
        h.passModel(self.lp)
        h.run()
        status = h.getModelStatus()
        basis = h.getBasis()
        basic = highspy.HighsBasisStatus.kBasic
        bc = [j for j, s in enumerate(basis.col_status) if s == basic]
        br = [i for i, s in enumerate(basis.row_status) if s == basic]
        return status, bc, br


class GuidedSolver:
    """Reusable exact solver for one constraint system and many objectives."""

    def __init__(self, sf: StandardForm):
        self.sf = sf
        self.ns = sf.num_struct
        self.rows_kept = independent_rows(sf.rows, sf.rhs, self.ns)
        kept = [sf.rows[i] for i in self.rows_kept]
        self.b = [sf.rhs[i] for i in self.rows_kept]
        self.cols = _local_columns(kept, self.ns)
        self.model = _HighsModel(self.cols, self.b)
        self._phase1 = None

    def _expand(self, u: Sequence[Fraction]) -> list[Fraction]:
        full = [ZERO] * self.sf.num_rows
        for i, v in zip(self.rows_kept, u):
            full[i] = v
        return full

    def _phase_one_model(self):
        if self._phase1 is None:
            m = len(self.b)
            cols = self.cols + [{i: Fraction(1)} for i in range(m)]
            self._phase1 = (cols, _HighsModel(cols, self.b))
        return self._phase1

    def solve(self, cost: Sequence[Fraction]) -> StandardResult:
        status, bc, br = self.model.solve(cost)
        hs = highspy.HighsModelStatus
        if status == hs.kOptimal:
            cert = certify_basis(self.cols, self.b, cost, bc, br)
            if cert is not None:
                x, u, basis = cert
                return StandardResult("optimal", x=x, u=self._expand(u), basis=basis)
            start = _feasible_start(self.cols, self.b, bc, br)
            return self._revised(cost, start)
        if status == hs.kInfeasible:
            cols, model = self._phase_one_model()
            m = len(self.b)
            p1_cost = [ZERO] * self.ns + [Fraction(-1)] * m
            st1, bc1, br1 = model.solve(p1_cost)
            if st1 == hs.kOptimal:
                cert = certify_basis(cols, self.b, p1_cost, bc1, br1)
                if cert is not None:
                    x, u, basis = cert
                    if sum((c * v for c, v in zip(p1_cost, x)), ZERO) < 0:
                        return StandardResult("infeasible", u=self._expand(u), basis=basis)
        return self._revised(cost, None)

    def _revised(self, cost, start) -> StandardResult:
        res = solve_revised(self.cols, len(self.b), self.b, cost, self.ns, start=start)
        if res.u is not None:
            res.u = self._expand(res.u)
        return res


def solve_unreduced(sf: StandardForm, cost: Sequence[Fraction]) -> StandardResult:
    """Exact revised simplex on every standard-form row (last-resort path)."""
    cols = _local_columns(sf.rows, sf.num_struct)
    return solve_revised(cols, sf.num_rows, sf.rhs, cost, sf.num_struct)
