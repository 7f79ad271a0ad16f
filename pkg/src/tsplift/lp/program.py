"""Linear programs, results, certificate checking and the standard-form map.

Programs are maximization problems

    max  c^T x   s.t.  A_eq x = b_eq,  A_ub x <= b_ub,  x_j >= 0 for masked j.

A result carries its own proof:

* optimal: primal ``x`` plus dual ``(y, z)`` with ``z >= 0``,
  ``(A_eq^T y + A_ub^T z)_j >= c_j`` on masked columns, ``= c_j`` on free
  columns, and ``b_eq^T y + b_ub^T z = c^T x``;
* infeasible: Farkas ``(y, z)`` with ``z >= 0``, the same column conditions
  with ``c`` replaced by 0, and ``b_eq^T y + b_ub^T z < 0``;
* unbounded: a feasible ``x`` and a ray ``r`` with ``A_eq r = 0``,
  ``A_ub r <= 0``, ``r_j >= 0`` on masked columns and ``c^T r > 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from ..errors import MalformedProgramError
from ..rational import to_fraction

ZERO = Fraction(0)
SparseRow = dict  # column -> nonzero Fraction

STATUSES = ("optimal", "infeasible", "unbounded")


def _sparse(row, width: int, where: str) -> SparseRow:
    if isinstance(row, Mapping):
        out = {}
        for j, v in row.items():
            if not isinstance(j, int) or not 0 <= j < width:
                raise MalformedProgramError(f"{where}: column {j!r} outside 0..{width - 1}")
            q = _num(v, where)
            if q:
                out[j] = q
        return out
    row = list(row)
    if len(row) != width:
        raise MalformedProgramError(f"{where}: row has {len(row)} entries, expected {width}")
    return {j: q for j, v in enumerate(row) if (q := _num(v, where))}


def _num(v, where: str) -> Fraction:
    try:
        return v if type(v) is Fraction else to_fraction(v)
    except (TypeError, ValueError) as exc:
        raise MalformedProgramError(f"{where}: {exc}") from exc


class LinearProgram:
    """Maximization LP with equality rows, <= rows and a nonnegativity mask.

    Rows may be dense sequences or sparse ``{column: value}`` mappings; they
    are stored sparse.
    """

    def __init__(self, objective, equalities=(), inequalities=(), nonneg_mask=None):
        objective = list(objective)
        width = len(objective)
        if width == 0:
            raise MalformedProgramError("a program needs at least one variable")
        self.objective = [_num(v, "objective") for v in objective]
        self.num_vars = width
        self.equalities = []
        for idx, item in enumerate(equalities):
            row, rhs = _pair(item, f"equality {idx}")
            self.equalities.append((_sparse(row, width, f"equality {idx}"), _num(rhs, f"equality {idx}")))
        self.inequalities = []
        for idx, item in enumerate(inequalities):
            row, rhs = _pair(item, f"inequality {idx}")
            self.inequalities.append((_sparse(row, width, f"inequality {idx}"), _num(rhs, f"inequality {idx}")))
        if nonneg_mask is None:
            nonneg_mask = [True] * width
        nonneg_mask = [bool(b) for b in nonneg_mask]
        if len(nonneg_mask) != width:
            raise MalformedProgramError(f"nonneg_mask has {len(nonneg_mask)} entries, expected {width}")
        self.nonneg_mask = nonneg_mask

    @property
    def num_rows(self) -> int:
        return len(self.equalities) + len(self.inequalities)

    def with_objective(self, objective) -> "LinearProgram":
        clone = object.__new__(LinearProgram)
        clone.__dict__.update(self.__dict__)
        objective = list(objective)
        if len(objective) != self.num_vars:
            raise MalformedProgramError("objective length changed")
        clone.objective = [_num(v, "objective") for v in objective]
        return clone

    def objective_at(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.objective, x) if c), ZERO)


def _pair(item, where: str):
    try:
        row, rhs = item
    except (TypeError, ValueError) as exc:
        raise MalformedProgramError(f"{where}: expected a (row, rhs) pair") from exc
    return row, rhs


def _dot(row: SparseRow, x: Sequence[Fraction]) -> Fraction:
    return sum((v * x[j] for j, v in row.items()), ZERO)


@dataclass
class LPResult:
    status: str
    primal: list[Fraction] | None = None
    objective_value: Fraction | None = None
    certificate: dict = field(default_factory=dict)
    ray: list[Fraction] | None = None
    method: str = ""
    pivots: int = 0
    basis: tuple[int, ...] = ()

    @property
    def eq_multipliers(self) -> list[Fraction]:
        return self.certificate.get("eq", [])

    @property
    def ub_multipliers(self) -> list[Fraction]:
        return self.certificate.get("ub", [])


def primal_feasible(p: LinearProgram, x: Sequence[Fraction]) -> bool:
    if x is None or len(x) != p.num_vars:
        return False
    if any(m and v < 0 for m, v in zip(p.nonneg_mask, x)):
        return False
    if any(_dot(row, x) != rhs for row, rhs in p.equalities):
        return False
    return all(_dot(row, x) <= rhs for row, rhs in p.inequalities)


def _column_sums(p: LinearProgram, y: Sequence[Fraction], z: Sequence[Fraction]) -> list[Fraction]:
    acc = [ZERO] * p.num_vars
    for (row, _), m in zip(p.equalities, y):
        if m:
            for j, v in row.items():
                acc[j] += v * m
    for (row, _), m in zip(p.inequalities, z):
        if m:
            for j, v in row.items():
                acc[j] += v * m
    return acc


def _multipliers_ok(p: LinearProgram, y, z) -> bool:
    return (
        y is not None
        and z is not None
        and len(y) == len(p.equalities)
        and len(z) == len(p.inequalities)
        and all(v >= 0 for v in z)
    )


def _rhs_value(p: LinearProgram, y, z) -> Fraction:
    return sum((m * rhs for (_, rhs), m in zip(p.equalities, y)), ZERO) + sum(
        (m * rhs for (_, rhs), m in zip(p.inequalities, z)), ZERO
    )


def check_certificate(p: LinearProgram, r: LPResult) -> bool:
    """Re-verify a result from scratch in exact arithmetic."""
    if r.status == "optimal":
        x = r.primal
        y, z = r.certificate.get("eq"), r.certificate.get("ub")
        if not primal_feasible(p, x) or not _multipliers_ok(p, y, z):
            return False
        cols = _column_sums(p, y, z)
        for j, (s, c) in enumerate(zip(cols, p.objective)):
            if p.nonneg_mask[j]:
                if s < c:
                    return False
            elif s != c:
                return False
        value = p.objective_at(x)
        return value == _rhs_value(p, y, z) and r.objective_value == value
    if r.status == "infeasible":
        y, z = r.certificate.get("eq"), r.certificate.get("ub")
        if not _multipliers_ok(p, y, z):
            return False
        cols = _column_sums(p, y, z)
        for j, s in enumerate(cols):
            if p.nonneg_mask[j]:
                if s < 0:
                    return False
            elif s != 0:
                return False
        return _rhs_value(p, y, z) < 0
    if r.status == "unbounded":
        x, ray = r.primal, r.ray
        if not primal_feasible(p, x) or ray is None or len(ray) != p.num_vars:
            return False
        if any(m and v < 0 for m, v in zip(p.nonneg_mask, ray)):
            return False
        if any(_dot(row, ray) != 0 for row, _ in p.equalities):
            return False
        if any(_dot(row, ray) > 0 for row, _ in p.inequalities):
            return False
        return p.objective_at(ray) > 0
    return False


# ---------------------------------------------------------------------------
# standard form


class StandardForm:
    """max c^T x, A x = b, x >= 0 with b >= 0.

    Columns: one per masked variable, two (plus, minus) per free variable,
    then one slack per <= row.  Rows are the equalities then the <= rows,
    each multiplied by ``sign`` = -1 when its right-hand side is negative.
    """

    def __init__(self, p: LinearProgram):
        self.program = p
        col_of: list[tuple[int, int | None]] = []
        cols = 0
        for m in p.nonneg_mask:
            if m:
                col_of.append((cols, None))
                cols += 1
            else:
                col_of.append((cols, cols + 1))
                cols += 2
        self.col_of = col_of
        self.num_struct = cols + len(p.inequalities)
        rows, rhs, signs = [], [], []
        all_rows = [(r, b, None) for r, b in p.equalities] + [
            (r, b, i) for i, (r, b) in enumerate(p.inequalities)
        ]
        for row, b, slack in all_rows:
            sign = -1 if b < 0 else 1
            out: SparseRow = {}
            for j, v in row.items():
                pos, neg = col_of[j]
                out[pos] = sign * v
                if neg is not None:
                    out[neg] = -sign * v
            if slack is not None:
                out[cols + slack] = Fraction(sign)
            rows.append(out)
            rhs.append(sign * b)
            signs.append(sign)
        self.rows = rows
        self.rhs = rhs
        self.signs = signs
        self.num_rows = len(rows)
        self.cost = self.map_objective(p.objective)

    def map_objective(self, objective: Sequence[Fraction]) -> list[Fraction]:
        cost = [ZERO] * self.num_struct
        for j, c in enumerate(objective):
            pos, neg = self.col_of[j]
            cost[pos] = c
            if neg is not None:
                cost[neg] = -c
        return cost

    def columns(self) -> list[dict[int, Fraction]]:
        cols: list[dict[int, Fraction]] = [dict() for _ in range(self.num_struct)]
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                cols[j][i] = v
        return cols

    def original_primal(self, xs: Sequence[Fraction]) -> list[Fraction]:
        out = []
        for pos, neg in self.col_of:
            out.append(xs[pos] - (xs[neg] if neg is not None else 0))
        return out

    def original_multipliers(self, u: Sequence[Fraction]) -> dict:
        n_eq = len(self.program.equalities)
        m = [s * v for s, v in zip(self.signs, u)]
        return {"eq": m[:n_eq], "ub": m[n_eq:]}


@dataclass
class StandardResult:
    status: str
    x: list[Fraction] | None = None
    u: list[Fraction] | None = None  # standard-form row multipliers
    ray: list[Fraction] | None = None
    pivots: int = 0
    basis: tuple[int, ...] = ()


def to_lp_result(sf: StandardForm, res: StandardResult, method: str) -> LPResult:
    p = sf.program
    if res.status == "optimal":
        x = sf.original_primal(res.x)
        return LPResult("optimal", x, p.objective_at(x), sf.original_multipliers(res.u), None, method, res.pivots, res.basis)
    if res.status == "infeasible":
        return LPResult("infeasible", None, None, sf.original_multipliers(res.u), None, method, res.pivots, res.basis)
    x = sf.original_primal(res.x)
    return LPResult("unbounded", x, None, {}, sf.original_primal(res.ray), method, res.pivots, res.basis)
