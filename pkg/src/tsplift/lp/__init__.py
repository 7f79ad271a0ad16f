"""Exact linear programming with self-checking certificates.

``solve_lp`` picks an engine by size:

* ``"tableau"``: dense two-phase simplex over Fractions, Bland's rule;
* ``"revised"``: exact revised simplex, Bland's rule, FLINT basis solves;
* ``"guided"``: HiGHS proposes a basis which is then certified exactly,
  falling back to the revised simplex if certification fails.

Every result is re-verified with :func:`check_certificate` before it is
returned, whatever engine produced it.
"""

from __future__ import annotations

from typing import Sequence

from .guided import GuidedSolver, solve_unreduced
from .program import LinearProgram, LPResult, StandardForm, check_certificate, to_lp_result
from .tableau import solve_standard_tableau

__all__ = ["LinearProgram", "LPResult", "check_certificate", "solve_lp", "prepare", "PreparedProgram"]

TABLEAU_LIMIT = 20_000  # rows x columns below which the dense tableau is used


def _verified(p: LinearProgram, sf: StandardForm, res, method: str) -> LPResult:
    out = to_lp_result(sf, res, method)
    if check_certificate(p, out):
        return out
    # a wrongly dropped row or a bad float basis; solve every row exactly
    out = to_lp_result(sf, solve_unreduced(sf, sf.cost), "revised-full")
    if not check_certificate(p, out):
        raise ArithmeticError("exact simplex produced a result that fails verification")
    return out


def solve_lp(p: LinearProgram, method: str = "auto") -> LPResult:
    """Solve exactly; the returned certificate always passes :func:`check_certificate`."""
    sf = StandardForm(p)
    if method == "auto":
        method = "tableau" if max(sf.num_rows, 1) * sf.num_struct <= TABLEAU_LIMIT else "guided"
    if method == "tableau":
        res = solve_standard_tableau(sf)
    elif method == "revised":
        res = solve_unreduced(sf, sf.cost)
    elif method == "guided":
        res = GuidedSolver(sf).solve(sf.cost)
    else:
        raise ValueError(f"unknown LP method {method!r}")
    return _verified(p, sf, res, method)


class PreparedProgram:
    """A constraint system prepared once and solved for many objectives."""

    def __init__(self, p: LinearProgram):
        self.program = p
        self.sf = StandardForm(p)
        self._solver = GuidedSolver(self.sf)

    def solve(self, objective: Sequence) -> LPResult:
        p = self.program.with_objective(objective)
        sf = self.sf
        cost = sf.map_objective(p.objective)
        sf_view = _CostView(sf, p, cost)
        return _verified(p, sf_view, self._solver.solve(cost), "guided")


class _CostView(StandardForm):
    """The prepared standard form with a replaced objective."""

    def __init__(self, base: StandardForm, p: LinearProgram, cost):
        self.__dict__.update(base.__dict__)
        self.program = p
        self.cost = cost


def prepare(p: LinearProgram) -> PreparedProgram:
    return PreparedProgram(p)
