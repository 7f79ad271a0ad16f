"""Independent reference computations shared by the test modules."""

import itertools
import random
from fractions import Fraction as F

from tsplift.lp import LinearProgram

BOX = 10**9


def random_program(rng: random.Random, max_vars=4, max_rows=4, spread=3, all_nonneg=False):
    nv = rng.randint(1, max_vars)
    num = lambda: F(rng.randint(-spread, spread))
    n_eq = rng.randint(0, min(2, max_rows))
    n_ub = rng.randint(0, max_rows - n_eq)
    eqs = [([num() for _ in range(nv)], num()) for _ in range(n_eq)]
    ubs = [([num() for _ in range(nv)], num()) for _ in range(n_ub)]
    mask = [True] * nv if all_nonneg else [rng.random() < 0.75 for _ in range(nv)]
    return LinearProgram([num() for _ in range(nv)], eqs, ubs, mask)


def _solve_square(rows, rhs):
    """Exact Gaussian elimination; None when singular."""
    n = len(rows)
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c]), None)
        if piv is None:
            return None
        aug[c], aug[piv] = aug[piv], aug[c]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c] / aug[c][c]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[c])]
    return [aug[i][n] / aug[i][i] for i in range(n)]


def _dense(row, nv):
    return [F(row.get(j, 0)) for j in range(nv)]


def _independent(eqs, nv):
    """Drop dependent equality rows; None if the equalities are inconsistent."""
    basis = []
    kept = []
    for row, b in eqs:
        r = list(row) + [b]
        for piv, br in basis:
            if r[piv]:
                f = r[piv] / br[piv]
                r = [x - f * y for x, y in zip(r, br)]
        lead = next((j for j in range(nv) if r[j]), None)
        if lead is None:
            if r[nv]:
                return None
            continue
        basis.append((lead, r))
        kept.append((row, b))
    return kept


def vertex_oracle(p: LinearProgram):
    """(status, optimum) for a program whose variables are all nonnegative.

    Vertices of the feasible set intersected with a large box are found by
    trying every active set; vertices touching the box reveal unboundedness.
    """
    nv = p.num_vars
    assert all(p.nonneg_mask)
    eqs = _independent([(_dense(r, nv), b) for r, b in p.equalities], nv)
    if eqs is None:
        return "infeasible", None
    ineq = [(_dense(r, nv), b, False) for r, b in p.inequalities]
    for j in range(nv):
        unit = [F(int(i == j)) for i in range(nv)]
        ineq.append(([-u for u in unit], F(0), False))
        ineq.append((unit, F(BOX), True))
    inner, boxed = None, None
    for active in itertools.combinations(range(len(ineq)), nv - len(eqs)):
        rows = [r for r, _ in eqs] + [ineq[a][0] for a in active]
        rhs = [b for _, b in eqs] + [ineq[a][1] for a in active]
        x = _solve_square(rows, rhs)
        if x is None:
            continue
        if any(sum(a * v for a, v in zip(r, x)) > b for r, b, _ in ineq):
            continue
        val = sum(c * v for c, v in zip(p.objective, x))
        boxed = val if boxed is None else max(boxed, val)
        if not any(ineq[a][2] for a in active):
            inner = val if inner is None else max(inner, val)
    if boxed is None:
        return "infeasible", None
    if inner is None or boxed > inner:
        return "unbounded", None
    return "optimal", inner
