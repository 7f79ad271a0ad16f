"""Membership oracles for T_n and Q_k, ray maximization and the scaling experiment.

Q_k is handled on the dual side.  For a point y in the affine hull,

    min { <c, y> : f = sum_G lambda_G g_G,  lambda >= 0,  sum lambda = 1,
                   <c, x> = f(x) for every cycle x }

is the smallest value at y of a function in P_k that is linear on X; y lies
in Q_k iff the minimum is >= 0.  The LP dual supplies a signed measure w on
cycles with sum_x w_x x = y and <w, g_G> >= min for every generator G, which
proves the lower bound without reference to the solver.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .combinatorics import PathSubset, count_cycles_containing, cycles_containing, enumerate_path_subsets, num_cycles
from .config import require_dense, require_qk
from .errors import PreconditionError, UnboundedRayError
from .funcspace import (
    SymMatrix,
    affine_hull_check,
    barycenter,
    cycle_incidence,
    cycle_index,
    edges_of,
    evaluate_extension,
    gauge_fix,
)
from .lifting import build_smoothing, pk_vertex_partitions
from .lp import LinearProgram, prepare, solve_lp
from .rational import decimal, format_fraction

ZERO = Fraction(0)

INSIDE, OUTSIDE, NOT_IN_AFFINE_HULL = "inside", "outside", "not_in_affine_hull"


@dataclass
class MembershipVerdict:
    status: str
    inside_witness: dict | None = None
    outside_witness: dict | None = None
    value: Fraction | None = None  # minimum of f(y) for Q_k queries

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "value": None if self.value is None else format_fraction(self.value),
            "inside_witness": _jsonable(self.inside_witness),
            "outside_witness": _jsonable(self.outside_witness),
        }


def _jsonable(obj):
    if obj is None:
        return None
    if isinstance(obj, Fraction):
        return format_fraction(obj)
    if isinstance(obj, SymMatrix):
        return obj.to_json()
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _check_point(n: int, y: SymMatrix) -> None:
    if y.n != n:
        raise PreconditionError(f"point has dimension {y.n}, expected {n}")


# ---------------------------------------------------------------------------
# T_n


def _incidence_rows(n: int) -> list[dict]:
    """Edge rows of the cycle incidence matrix: row e lists the cycles through e."""
    idx = cycle_index(n)
    rows: list[dict] = [dict() for _ in edges_of(n)]
    one = Fraction(1)
    for i, eids in enumerate(idx.edge_ids):
        for e in eids:
            rows[e][i] = one
    return rows


def tsp_membership(n: int, y: SymMatrix) -> MembershipVerdict:
    """Exact feasibility of mu >= 0, sum mu = 1, sum_x mu_x x = y over all cycles."""
    require_dense(n, "T_n membership")
    _check_point(n, y)
    X = num_cycles(n)
    rows = _incidence_rows(n)
    yv = y.vector()
    eqs = [(r, v) for r, v in zip(rows, yv)] + [({i: Fraction(1) for i in range(X)}, Fraction(1))]
    res = solve_lp(LinearProgram([ZERO] * X, eqs, [], [True] * X))
    if res.status == "optimal":
        mu = {i: v for i, v in enumerate(res.primal) if v}
        verdict = MembershipVerdict(INSIDE, inside_witness={"cycle_weights": mu})
    else:
        mult = res.eq_multipliers
        v, delta = mult[:-1], mult[-1]
        c = SymMatrix.from_vector(n, [q / 2 for q in v])
        verdict = MembershipVerdict(OUTSIDE, outside_witness={"matrix": c, "constant": delta})
    if not verify_tsp_verdict(n, y, verdict):
        raise ArithmeticError("T_n membership certificate failed verification")
    return verdict


def verify_tsp_verdict(n: int, y: SymMatrix, verdict: MembershipVerdict) -> bool:
    idx = cycle_index(n)
    if verdict.status == INSIDE:
        mu = verdict.inside_witness["cycle_weights"]
        if any(v < 0 for v in mu.values()) or sum(mu.values(), ZERO) != 1:
            return False
        acc = [ZERO] * len(edges_of(n))
        for i, v in mu.items():
            for e in idx.edge_ids[i]:
                acc[e] += v
        return acc == y.vector()
    if verdict.status == OUTSIDE:
        c, delta = verdict.outside_witness["matrix"], verdict.outside_witness["constant"]
        cv = c.vector()
        if any(2 * sum((cv[e] for e in eids), ZERO) + delta < 0 for eids in idx.edge_ids):
            return False
        return evaluate_extension(c, y) + delta < 0
    return False


def tsp_ray_max(n: int, d: SymMatrix) -> Fraction:
    """max { s : Z + s d in T_n } by one exact LP."""
    require_dense(n, "T_n ray maximization")
    _check_point(n, d)
    X = num_cycles(n)
    rows = _incidence_rows(n)
    dv, zv = d.vector(), barycenter(n).vector()
    eqs = []
    for r, de, ze in zip(rows, dv, zv):
        row = dict(r)
        if de:
            row[X] = -de
        eqs.append((row, ze))
    eqs.append(({i: Fraction(1) for i in range(X)}, Fraction(1)))
    res = solve_lp(LinearProgram([ZERO] * X + [Fraction(1)], eqs, [], [True] * X + [False]))
    if res.status != "optimal":
        raise UnboundedRayError(f"T_n ray maximization returned {res.status}")
    return res.objective_value


# ---------------------------------------------------------------------------
# Q_k


@dataclass
class QkSystem:
    n: int
    k: int
    generators: list[PathSubset]
    heights: list[Fraction]
    gen_cycles: list[tuple[int, ...]]
    cycle_gens: list[tuple[int, ...]]  # inverse of gen_cycles
    solver: object = field(repr=False)

    @property
    def num_generators(self) -> int:
        return len(self.generators)


def pk_generators(n: int, k: int) -> list[PathSubset]:
    out = []
    for pi in pk_vertex_partitions(k):
        if pi.total + pi.num_parts <= n and pi.total <= n - 1:
            out.extend(enumerate_path_subsets(n, pi))
    return out


def qk_system(n: int, k: int) -> QkSystem:
    """The exact Q_k program for (n, k), row-reduced and ready for new objectives."""
    require_qk(n, k)
    return _qk_system(n, k)


@lru_cache(maxsize=4)
def _qk_system(n: int, k: int) -> QkSystem:
    idx = cycle_index(n)
    X = num_cycles(n)
    gens = pk_generators(n, k)
    G, N = len(gens), len(edges_of(n))
    heights, gen_cycles = [], []
    rows: list[dict] = [dict() for _ in range(X)]
    for g, gam in enumerate(gens):
        h = Fraction(X, count_cycles_containing(n, gam.ptype))
        cyc = tuple(sorted(idx.index(x) for x in cycles_containing(n, gam)))
        heights.append(h)
        gen_cycles.append(cyc)
        for i in cyc:
            rows[i][g] = h
    minus_two = Fraction(-2)
    for i, eids in enumerate(idx.edge_ids):
        for e in eids:
            rows[i][G + e] = minus_two
    cycle_gens = [tuple(g for g in r if g < G) for r in rows]
    eqs = [(r, ZERO) for r in rows] + [({g: Fraction(1) for g in range(G)}, Fraction(1))]
    program = LinearProgram([ZERO] * (G + N), eqs, [], [True] * G + [False] * N)
    return QkSystem(n, k, gens, heights, gen_cycles, cycle_gens, prepare(program))


@dataclass
class QkMinimum:
    """min over P_k ∩ L of f(y), with both halves of its proof."""

    value: Fraction
    weights: dict[int, Fraction]  # generator index -> lambda
    matrix: SymMatrix  # gauge-fixed linear extension of the minimizer
    cycle_measure: dict[int, Fraction]  # cycle index -> w

    def active_generators(self, system: QkSystem) -> list[tuple[list[list[int]], Fraction]]:
        return [([list(p) for p in system.generators[g].paths], lam) for g, lam in sorted(self.weights.items())]


def qk_minimum(n: int, k: int, y: SymMatrix) -> QkMinimum:
    """Exact min of f(y) over P_k ∩ L, proved from both sides."""
    _check_point(n, y)
    if len(set(y.row_sums())) != 1:
        # <c, y> is gauge-invariant only when all row sums agree
        raise PreconditionError("Q_k minimization needs a point whose row sums are all equal")
    system = qk_system(n, k)
    G = system.num_generators
    yv = y.vector()
    objective = [ZERO] * G + [-2 * v for v in yv]
    res = system.solver.solve(objective)
    if res.status != "optimal":
        raise ArithmeticError(f"the Q_k program returned {res.status}; it is always feasible and bounded")
    lam = {g: v for g, v in enumerate(res.primal[:G]) if v}
    c = gauge_fix(SymMatrix.from_vector(n, res.primal[G:]))
    w = {i: v for i, v in enumerate(res.eq_multipliers[:-1]) if v}
    out = QkMinimum(-res.objective_value, lam, c, w)
    if not verify_qk_lower_bound(n, k, y, out.cycle_measure, out.value):
        raise ArithmeticError("Q_k dual certificate failed verification")
    if not verify_qk_minimizer(n, k, y, out):
        raise ArithmeticError("Q_k primal minimizer failed verification")
    return out


def verify_qk_lower_bound(n: int, k: int, y: SymMatrix, w: Mapping[int, Fraction], bound: Fraction) -> bool:
    """sum_x w_x x = y and <w, g_G> >= bound for every generator: then f(y) >= bound on P_k ∩ L."""
    system = qk_system(n, k)
    idx = cycle_index(n)
    acc = [ZERO] * len(edges_of(n))
    for i, v in w.items():
        for e in idx.edge_ids[i]:
            acc[e] += v
    if acc != y.vector():
        return False
    # only generators meeting the support of w can be nonzero
    pairing: dict[int, Fraction] = {}
    for i, v in w.items():
        for g in system.cycle_gens[i]:
            pairing[g] = pairing.get(g, ZERO) + v
    if len(pairing) < system.num_generators and bound > 0:
        return False
    return all(system.heights[g] * p >= bound for g, p in pairing.items())


def verify_qk_minimizer(n: int, k: int, y: SymMatrix, m: QkMinimum) -> bool:
    """lambda convex, <c, x> = sum lambda g(x) on every cycle, and <c, y> = value."""
    system = qk_system(n, k)
    if any(v < 0 for v in m.weights.values()) or sum(m.weights.values(), ZERO) != 1:
        return False
    f = [ZERO] * num_cycles(n)
    for g, lam in m.weights.items():
        h = system.heights[g] * lam
        for i in system.gen_cycles[g]:
            f[i] += h
    cv = m.matrix.vector()
    for i, eids in enumerate(cycle_index(n).edge_ids):
        if 2 * sum((cv[e] for e in eids), ZERO) != f[i]:
            return False
    return evaluate_extension(m.matrix, y) == m.value


def qk_membership(n: int, k: int, y: SymMatrix) -> MembershipVerdict:
    _check_point(n, y)
    if not affine_hull_check(y):
        return MembershipVerdict(NOT_IN_AFFINE_HULL)
    res = qk_minimum(n, k, y)
    system = qk_system(n, k)
    minimizer = {"generators": res.active_generators(system), "matrix": res.matrix}
    if res.value >= 0:
        return MembershipVerdict(
            INSIDE,
            inside_witness={"lower_bound": res.value, "cycle_measure": res.cycle_measure, "minimizer": minimizer},
            value=res.value,
        )
    return MembershipVerdict(
        OUTSIDE, outside_witness={"matrix": res.matrix, "constant": ZERO, **minimizer}, value=res.value
    )


def transport_measure(n: int, w: Mapping[int, Fraction], sigma: Mapping[int, int]) -> dict[int, Fraction]:
    """Push a measure on cycles forward along the vertex map sigma."""
    idx = cycle_index(n)
    return {idx.index(idx.cycles[i].relabel(sigma)): v for i, v in w.items()}


# ---------------------------------------------------------------------------
# rays and scaling


def _check_direction(d: SymMatrix) -> None:
    if any(r != 0 for r in d.row_sums()):
        raise PreconditionError("direction must have zero row sums")
    if not d.items():
        raise PreconditionError("direction must be nonzero")


@dataclass
class RayMax:
    t: Fraction
    min_value: Fraction  # min over P_k ∩ L of f(d)
    minimum: QkMinimum


def qk_ray(n: int, k: int, d: SymMatrix) -> RayMax:
    """t* = max { t : Z + t d in Q_k } with its certificates.

    Every f in P_k ∩ L has f(Z) = 1, so f(Z + t d) = 1 + t f(d) and
    t* = -1 / min f(d).
    """
    _check_point(n, d)
    _check_direction(d)
    m = qk_minimum(n, k, d)
    if m.value >= 0:
        raise UnboundedRayError("min f(d) >= 0 over P_k ∩ L: the ray never leaves Q_k")
    return RayMax(-1 / m.value, m.value, m)


def qk_ray_max(n: int, k: int, d: SymMatrix) -> Fraction:
    return qk_ray(n, k, d).t


class LCG:
    """64-bit linear congruential generator (Knuth's MMIX constants)."""

    A = 6364136223846793005
    C = 1442695040888963407
    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = seed & self.MASK

    def next(self) -> int:
        self.state = (self.A * self.state + self.C) & self.MASK
        return self.state >> 33  # high bits; the low bits of an LCG are weak


def project_row_sums_zero(r: SymMatrix) -> SymMatrix:
    """Orthogonal projection onto {d : every row sum is 0}: d_ij = r_ij - a_i - a_j."""
    n = r.n
    R = r.row_sums()
    S = sum(R, ZERO) / (2 * n - 2)
    a = [(Ri - S) / (n - 2) for Ri in R]
    return SymMatrix(n, {(i, j): r[i, j] - a[i - 1] - a[j - 1] for i, j in edges_of(n)})


def random_directions(n: int, count: int, seed: int, spread: int = 10) -> list[SymMatrix]:
    """Entries u/spread with u uniform in [-spread, spread], projected to zero row sums."""
    gen = LCG(seed)
    out = []
    while len(out) < count:
        raw = SymMatrix(n, {e: Fraction(gen.next() % (2 * spread + 1) - spread, spread) for e in edges_of(n)})
        d = project_row_sums_zero(raw)
        if d.items():
            out.append(d)
    return out


@dataclass
class DirectionResult:
    index: int
    direction: SymMatrix
    t_star: Fraction
    scaled: Fraction
    tsp_ray: Fraction
    inside: bool

    @property
    def margin(self) -> Fraction:
        return self.tsp_ray - self.scaled

    @property
    def passed(self) -> bool:
        return self.inside and self.margin >= 0

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "t_star": format_fraction(self.t_star),
            "c_k_t_star": format_fraction(self.scaled),
            "c_k_t_star_decimal": decimal(self.scaled),
            "tsp_ray_max": format_fraction(self.tsp_ray),
            "tsp_margin": format_fraction(self.margin),
            "tsp_margin_decimal": decimal(self.margin),
            "scaled_point_in_T_n": self.inside,
            "passed": self.passed,
            "direction": self.direction.to_json(),
        }


@dataclass
class ScalingReport:
    n: int
    k: int
    seed: int
    c_k: Fraction
    directions: list[DirectionResult]

    @property
    def passed(self) -> bool:
        return all(d.passed for d in self.directions)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "seed": self.seed,
            "c_k": format_fraction(self.c_k),
            "c_k_decimal": decimal(self.c_k),
            "passed": self.passed,
            "directions": [d.to_json() for d in self.directions],
        }


def check_direction(n: int, k: int, c_k: Fraction, d: SymMatrix, index: int = 0) -> DirectionResult:
    t = qk_ray_max(n, k, d)
    scaled = c_k * t
    point = barycenter(n) + d.scale(scaled)
    inside = tsp_membership(n, point).status == INSIDE
    return DirectionResult(index, d, t, scaled, tsp_ray_max(n, d), inside)


def scaling_check(n: int, k: int, num_dirs: int, seed: int) -> ScalingReport:
    """For seeded directions d: Z + c_k t* d must lie in T_n, t* the Q_k ray length."""
    if num_dirs < 1:
        raise PreconditionError("need at least one direction")
    c_k = build_smoothing(n, k).c_k
    dirs = random_directions(n, num_dirs, seed)
    return ScalingReport(n, k, seed, c_k, [check_direction(n, k, c_k, d, i) for i, d in enumerate(dirs)])


def vertex_direction(x) -> SymMatrix:
    """incidence(x) - Z, the direction from the barycenter to a vertex."""
    return cycle_incidence(x) - barycenter(x.n)
