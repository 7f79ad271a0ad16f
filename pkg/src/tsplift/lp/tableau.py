"""Dense two-phase tableau simplex over Fractions with Bland's rule."""

from __future__ import annotations

from fractions import Fraction

from .program import StandardForm, StandardResult

ZERO = Fraction(0)
ONE = Fraction(1)


class _Tableau:
    def __init__(self, sf: StandardForm):
        m, ns = sf.num_rows, sf.num_struct
        self.m, self.ns = m, ns
        self.width = ns + m  # structural columns, then one artificial per row
        self.rows = []
        for i, row in enumerate(sf.rows):
            r = [ZERO] * (self.width + 1)
            for j, v in row.items():
                r[j] = v
            r[ns + i] = ONE
            r[-1] = sf.rhs[i]
            self.rows.append(r)
        self.basis = [ns + i for i in range(m)]
        self.pivots = 0

    def reduced_costs(self, cost: list[Fraction]) -> list[Fraction]:
        red = list(cost)
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                row = self.rows[i]
                for j in range(self.width):
                    if row[j]:
                        red[j] -= cb * row[j]
        return red

    def pivot(self, r: int, q: int) -> None:
        prow = self.rows[r]
        inv = ONE / prow[q]
        if inv != 1:
            prow = [v * inv for v in prow]
            self.rows[r] = prow
        nz = [j for j, v in enumerate(prow) if v]
        for i, row in enumerate(self.rows):
            if i != r and row[q]:
                f = row[q]
                for j in nz:
                    row[j] -= f * prow[j]
        self.basis[r] = q
        self.pivots += 1

    def run(self, cost: list[Fraction], allowed: int) -> tuple[str, int | None]:
        """Bland iterations for max cost^T x; columns >= ``allowed`` never enter."""
        while True:
            red = self.reduced_costs(cost)
            q = next((j for j in range(allowed) if red[j] > 0), None)
            if q is None:
                return "optimal", None
            best, r = None, None
            for i, row in enumerate(self.rows):
                if row[q] > 0:
                    ratio = row[-1] / row[q]
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[r]):
                        best, r = ratio, i
            if r is None:
                return "unbounded", q
            self.pivot(r, q)

    def values(self) -> list[Fraction]:
        x = [ZERO] * self.width
        for i, b in enumerate(self.basis):
            x[b] = self.rows[i][-1]
        return x

    def duals(self, cost: list[Fraction]) -> list[Fraction]:
        """u = c_B^T B^{-1}; B^{-1} sits in the artificial columns."""
        u = [ZERO] * self.m
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                row = self.rows[i]
                for k in range(self.m):
                    u[k] += cb * row[self.ns + k]
        return u


def solve_standard_tableau(sf: StandardForm) -> StandardResult:
    t = _Tableau(sf)
    ns, m = t.ns, t.m
    phase1 = [ZERO] * ns + [-ONE] * m
    t.run(phase1, t.width)
    x = t.values()
    if any(x[ns + i] for i in range(m)):
        return StandardResult("infeasible", u=t.duals(phase1), pivots=t.pivots, basis=tuple(t.basis))

    # pivot zero-level artificials out where a structural column allows it
    for i in range(m):
        if t.basis[i] >= ns:
            q = next((j for j in range(ns) if t.rows[i][j]), None)
            if q is not None:
                t.pivot(i, q)

    cost = list(sf.cost) + [ZERO] * m
    status, q = t.run(cost, ns)
    x = t.values()
    if status == "unbounded":
        ray = [ZERO] * t.width
        ray[q] = ONE
        for i, b in enumerate(t.basis):
            ray[b] = -t.rows[i][q]
        return StandardResult("unbounded", x=x[:ns], ray=ray[:ns], pivots=t.pivots, basis=tuple(t.basis))
    return StandardResult("optimal", x=x[:ns], u=t.duals(cost), pivots=t.pivots, basis=tuple(t.basis))
