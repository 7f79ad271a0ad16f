"""Averaging operators T_pi, their exact evaluation on g_st, and the smoothing combination.

``eval_T_pi_gst`` never touches X: it enumerates the path subsets inside one
representative cycle and weights each by how many cycles contain it together
with the edge {s, t}.  ``apply_T_pi`` is the definition-faithful brute force
used to cross-check it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Iterable

from .combinatorics import (
    Partition,
    _runs,
    count_cycles_containing,
    count_path_subsets,
    cycle_subset_indices,
    distance_between,
    edge,
    falling_factorial,
    make_distance_cycle,
    max_distance,
    num_cycles,
)
from .errors import PreconditionError, SmoothingInfeasibleError
from .funcspace import CycleFunction, cycle_index, edge_index
from .rational import decimal, format_fraction

EDGE = "edge"
FAMILIES = ("all_ones", "k1", "single")


# ---------------------------------------------------------------------------
# brute force


def apply_T_pi(n: int, pi: Partition, f: CycleFunction) -> CycleFunction:
    """(1/|B_pi|) sum_Gamma alpha_Gamma g_Gamma with alpha_Gamma = (1/a_pi) sum_{x in A_Gamma} f(x).

    Every Gamma of type pi that lies in some cycle is visited through the
    cycles that contain it, so A_Gamma is never built explicitly.
    """
    if f.n != n:
        raise PreconditionError("function and operator disagree on n")
    count_path_subsets(n, pi)  # feasibility check
    idx = cycle_index(n)
    eid = edge_index(n)
    a_pi = count_cycles_containing(n, pi)
    b_pi = count_path_subsets(n, pi)
    height = Fraction(num_cycles(n), a_pi)
    sel_sets = cycle_subset_indices(n, pi.parts)

    keys_per_cycle = []
    alpha: dict[tuple[int, ...], Fraction] = {}
    for x, fx in zip(idx.cycles, f.values):
        el = x.edge_list()
        ids = [eid[e] for e in el]
        keys = [tuple(sorted(ids[i] for i in sel)) for sel in sel_sets]
        keys_per_cycle.append(keys)
        if fx:
            for key in keys:
                alpha[key] = alpha.get(key, Fraction(0)) + fx
    scale = height / (a_pi * b_pi)
    return CycleFunction(n, (scale * sum((alpha.get(k, 0) for k in keys), Fraction(0)) for keys in keys_per_cycle))


def distance_class(x, s: int, t: int):
    d = distance_between(x, s, t)
    return EDGE if d == 0 else d


# ---------------------------------------------------------------------------
# within-cycle evaluation


def _check_room(n: int, pi: Partition) -> None:
    if pi.total > n - pi.num_parts - 2:
        raise PreconditionError(
            f"partition {pi} leaves no room for the s,t configurations at n={n} "
            f"(need total <= n - parts - 2)"
        )


def _normalize_class(n: int, cls) -> int:
    if cls == EDGE or cls == 0:
        return 0
    if not isinstance(cls, int) or isinstance(cls, bool) or not 1 <= cls <= max_distance(n):
        raise PreconditionError(f"distance class {cls!r} outside 1..{max_distance(n)} for n={n}")
    return cls


@lru_cache(maxsize=None)
def _eval_cached(n: int, parts: tuple[int, ...], d: int) -> Fraction:
    pi = Partition(parts)
    k, m = pi.total, pi.num_parts
    a_pi = count_cycles_containing(n, pi)
    b_pi = count_path_subsets(n, pi)
    w_same = a_pi
    w_joined = 2 ** m * factorial(n - k - 2) // 4 if m >= 2 else 0
    w_one = 2 ** (m - 1) * factorial(n - k - 2)
    w_free = 2 ** m * factorial(n - k - 2)

    s_pos, t_pos = 0, d + 1  # positions on y = (1..n); edge i joins positions i, i+1
    total = 0
    for sel in cycle_subset_indices(n, parts):
        if d == 0 and 0 in sel:
            total += w_same
            continue
        status = {}
        for ci, (start, length) in enumerate(_runs(n, sel)):
            end = (start + length) % n
            for off in range(1, length):
                status[(start + off) % n] = ("inner", ci)
            status[start] = ("end", ci)
            status[end] = ("end", ci)
        ss, ts = status.get(s_pos), status.get(t_pos)
        if (ss and ss[0] == "inner") or (ts and ts[0] == "inner"):
            continue
        if ss and ts:
            if ss[1] == ts[1]:
                continue
            total += w_joined
        elif ss or ts:
            total += w_one
        else:
            total += w_free
    return Fraction(num_cycles(n) * (n - 1) * total, 2 * a_pi * a_pi * b_pi)


def eval_T_pi_gst(n: int, pi: Partition, cls) -> Fraction:
    """T_pi(g_st) at a cycle of the given distance class (``"edge"`` or 1..D)."""
    _check_room(n, pi)
    d = _normalize_class(n, cls)
    return _eval_cached(n, pi.parts, d)


def profile_by_enumeration(n: int, pi: Partition) -> "DistanceProfile":
    vals = [eval_T_pi_gst(n, pi, d) for d in range(1, max_distance(n) + 1)]
    return DistanceProfile(n, pi.total, pi, eval_T_pi_gst(n, pi, EDGE), tuple(vals))


# ---------------------------------------------------------------------------
# closed forms


@dataclass(frozen=True)
class DistanceProfile:
    """Values of T_pi(g_st): on edge cycles, then per distance class 1..D."""

    n: int
    k: int
    pi: Partition
    edge_value: Fraction
    class_values: tuple[Fraction, ...]

    def value(self, cls) -> Fraction:
        d = _normalize_class(self.n, cls)
        return self.edge_value if d == 0 else self.class_values[d - 1]

    def is_constant_from(self, d0: int) -> bool:
        tail = self.class_values[max(d0, 1) - 1:]
        return len(set(tail)) <= 1


def family_partition(k: int, family: str) -> Partition:
    if family == "all_ones":
        return Partition((1,) * k)
    if family == "k1":
        return Partition((k - 1, 1))
    if family == "single":
        return Partition((k,))
    raise PreconditionError(f"unknown family {family!r}; expected one of {FAMILIES}")


def check_formula_domain(n: int, k: int, family: str) -> None:
    if family == "k1" and k < 3:
        raise PreconditionError("the (k-1,1) family needs k >= 3")
    if k < 1:
        raise PreconditionError("k must be >= 1")
    _check_room(n, family_partition(k, family))
    if n < 2 * k + 1:
        # the placement counts behind the closed forms assume the arc opposite
        # the k-path still has room; below this they stop counting placements
        raise PreconditionError(f"closed forms hold for n >= 2k+1; got n={n}, k={k}")


def diff_formula(n: int, k: int, family: str, i: int) -> Fraction:
    """Closed form of T_pi(g_st)(y_{i+1}) - T_pi(g_st)(y_i) for pi = (1^k), (k-1,1) or (k)."""
    check_formula_domain(n, k, family)
    if not 1 <= i <= k - 1:
        raise PreconditionError(f"difference index i={i} outside 1..{k - 1}")
    if family == "all_ones":
        num = (-1) ** (i + 1) * (n - 1) * (n - 2 * k) * (n - 2 * k - 1) * falling_factorial(k, i + 1)
        return Fraction(num, 4 * (n - k - 1) * n * falling_factorial(n - k - 1, i + 2))
    if family == "k1":
        if i <= k - 3:
            return -Fraction((n - 1) * (n - k - 3), n * (n - k - 1) ** 2)
        if i == k - 2:
            return Fraction(3 * (n - 1), 2 * n * (n - k - 1) ** 2)
        return Fraction(n - 1, 2 * n * (n - k - 1) ** 2)
    if i <= k - 2:
        return -Fraction(n - 1, n * (n - k - 1))
    return Fraction(0)


def _class_weights(n: int) -> list[Fraction]:
    """Fraction of X in each distance class 1..D (edge class has weight 2/(n-1))."""
    D = max_distance(n)
    w = [Fraction(2, n - 1)] * D
    if n % 2 == 0:
        w[-1] = Fraction(1, n - 1)
    return w


def closed_form_profile(n: int, k: int, family: str) -> DistanceProfile:
    """Class values of T_pi(g_st) from the closed forms, for pi = (k-1,1) or (k).

    The edge value is not given by a separate formula: it is fixed by the
    fact that T_pi preserves the average, so it is solved from the class
    values and the class sizes.
    """
    if family not in ("k1", "single"):
        raise PreconditionError("closed-form profiles exist for the 'k1' and 'single' families")
    check_formula_domain(n, k, family)
    D = max_distance(n)
    vals = []
    for i in range(1, D + 1):
        if family == "single":
            if i <= k - 1:
                v = Fraction((n - 1) * (n - k - i - 1), n * (n - k - 1))
            else:
                v = Fraction((n - 1) * (n - 2 * k), n * (n - k - 1))
        else:
            pre = Fraction(n - 1, 2 * n * (n - k - 1) ** 2)
            if i <= k - 2:
                v = pre * (2 * n * n - (4 * k + 2 * i + 6) * n + 2 * k * k + 2 * i * k + 6 * i + 6 * k + 4)
            elif i == k - 1:
                v = pre * (2 * n * n - (6 * k + 2) * n + 4 * k * k + 8 * k - 5)
            else:
                v = pre * (2 * n * n - (6 * k + 2) * n + 4 * k * k + 8 * k - 4)
        vals.append(v)
    rest = sum((w * v for w, v in zip(_class_weights(n), vals)), Fraction(0))
    edge_value = (1 - rest) * Fraction(n - 1, 2)
    return DistanceProfile(n, k, family_partition(k, family), edge_value, tuple(vals))


# ---------------------------------------------------------------------------
# generator families


def smoothing_partitions(k: int) -> list[Partition]:
    """pi* = (1^{2k}) first, then (l-1, 1) for 3 <= l <= 2k, then (l) for 2 <= l <= 2k+1."""
    if k < 1:
        raise PreconditionError("k must be >= 1")
    out = [Partition((1,) * (2 * k))]
    out += [Partition((l - 1, 1)) for l in range(3, 2 * k + 1)]
    out += [Partition((l,)) for l in range(2, 2 * k + 2)]
    seen: list[Partition] = []
    for p in out:
        if p not in seen:
            seen.append(p)
    return seen


def pk_vertex_partitions(k: int) -> list[Partition]:
    """Types of the g_Gamma spanning P_k: single paths up to 2k+1, (l,1) up to l = 2k-1, and (1^{2k})."""
    if k < 1:
        raise PreconditionError("k must be >= 1")
    out = [Partition((l,)) for l in range(1, 2 * k + 2)]
    out += [Partition((l, 1)) for l in range(1, 2 * k)]
    out.append(Partition((1,) * (2 * k)))
    seen: list[Partition] = []
    for p in out:
        if p not in seen:
            seen.append(p)
    return seen


# ---------------------------------------------------------------------------
# smoothing


@dataclass(frozen=True)
class SmoothingMap:
    n: int
    k: int
    partitions: tuple[Partition, ...]
    coefficients: tuple[Fraction, ...]
    v_edge: Fraction
    v_rest: Fraction
    c_k: Fraction
    class_values: tuple[Fraction, ...] = field(repr=False)

    @property
    def lambda_star(self) -> Fraction:
        return self.coefficients[0]

    @property
    def in_regime(self) -> bool:
        return self.k ** 3 <= self.n

    def coefficient(self, pi: Partition) -> Fraction:
        return self.coefficients[self.partitions.index(pi)]

    def checks(self) -> dict[str, bool]:
        n, c = self.n, self.c_k
        return {
            "coefficients_nonnegative": all(x >= 0 for x in self.coefficients),
            "coefficients_sum_to_one": sum(self.coefficients) == 1,
            "two_valued": all(v == self.v_rest for v in self.class_values),
            "edge_value_matches": self.v_edge == (1 - c) + c * Fraction(n - 1, 2),
            "rest_value_matches": self.v_rest == 1 - c,
            "probability_identity": Fraction(2, n - 1) * self.v_edge + (1 - Fraction(2, n - 1)) * self.v_rest == 1,
            "c_k_in_open_unit_interval": 0 < c < 1,
            "lambda_star_at_least_quarter": self.lambda_star >= Fraction(1, 4),
        }

    def to_json(self) -> dict:
        dev = self.c_k - Fraction(self.k, self.n)
        return {
            "n": self.n,
            "k": self.k,
            "partitions": [list(p.parts) for p in self.partitions],
            "coefficients": [format_fraction(c) for c in self.coefficients],
            "lambda_star": format_fraction(self.lambda_star),
            "v_edge": format_fraction(self.v_edge),
            "v_rest": format_fraction(self.v_rest),
            "c_k": format_fraction(self.c_k),
            "c_k_decimal": decimal(self.c_k),
            "k_over_n": format_fraction(Fraction(self.k, self.n)),
            "deviation": format_fraction(dev),
            "deviation_decimal": decimal(dev),
            "in_regime": self.in_regime,
            "checks": self.checks(),
        }


def combined_profile(n: int, partitions: Iterable[Partition], coefficients: Iterable[Fraction]):
    """Edge value and class values of sum_pi lambda_pi T_pi(g_st)."""
    partitions, coefficients = list(partitions), list(coefficients)
    D = max_distance(n)
    edge_v = sum((c * eval_T_pi_gst(n, p, EDGE) for p, c in zip(partitions, coefficients)), Fraction(0))
    cls = tuple(
        sum((c * eval_T_pi_gst(n, p, d) for p, c in zip(partitions, coefficients)), Fraction(0))
        for d in range(1, D + 1)
    )
    return edge_v, cls


def build_smoothing(n: int, k: int) -> SmoothingMap:
    """Convex lambda over the family making every non-edge class of T(g_st) equal, lambda_{pi*} maximal."""
    from .lp import LinearProgram, solve_lp

    if k < 1:
        raise PreconditionError("k must be >= 1")
    if n < 4 * k + 4:
        raise PreconditionError(f"smoothing needs n >= 4k+4 = {4 * k + 4}, got n={n}")
    parts = smoothing_partitions(k)
    values = {p: [eval_T_pi_gst(n, p, d) for d in range(1, 2 * k + 2)] for p in parts}
    eqs = [([values[p][d + 1] - values[p][d] for p in parts], Fraction(0)) for d in range(2 * k)]
    eqs.append(([Fraction(1)] * len(parts), Fraction(1)))
    objective = [Fraction(1)] + [Fraction(0)] * (len(parts) - 1)
    res = solve_lp(LinearProgram(objective, eqs, [], [True] * len(parts)))
    if res.status != "optimal":
        raise SmoothingInfeasibleError(
            f"no convex combination equalizes classes 1..{2 * k + 1} at n={n}, k={k} (LP status {res.status})"
        )
    lam = tuple(res.primal)
    v_edge, cls = combined_profile(n, parts, lam)
    v_rest = cls[0]
    c_k = 2 * (v_edge - v_rest) / (n - 1)
    return SmoothingMap(n, k, tuple(parts), lam, v_edge, v_rest, c_k, cls)
