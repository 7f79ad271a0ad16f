"""Certificates placing the edge-bound and subtour facets on the boundary of P_k.

Each certificate is a convex combination of generators g_Gamma, the
gauge-fixed linear extension of the combination, and the constant ``kappa``
with combination(x) = kappa * phi(x) on every cycle, where phi is x_ij,
1 - x_ij or cut(x, U) - 2 depending on the kind.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .combinatorics import (
    Cycle,
    Partition,
    PathSubset,
    count_cycles_containing,
    cycles_containing,
    edge,
    enumerate_cycles,
    num_cycles,
)
from .errors import PreconditionError
from .funcspace import CycleFunction, SymMatrix, cycle_index, linear_extension
from .lifting import pk_vertex_partitions
from .rational import format_fraction

LOWER, UPPER, SUBTOUR = "lower_bound_edge", "upper_bound_edge", "subtour"
ZERO = Fraction(0)


@dataclass
class FacetCertificate:
    kind: str
    params: tuple
    combination: list[tuple[PathSubset, Fraction]]
    extension: SymMatrix | None
    constant: Fraction
    n: int

    def function(self) -> CycleFunction:
        return combination_function(self.n, self.combination)

    def to_json(self) -> dict:
        key = "edge" if self.kind != SUBTOUR else "U"
        return {
            "kind": self.kind,
            "params": {key: list(self.params)},
            "generators": [
                {"paths": [list(p) for p in gam.paths], "weight": format_fraction(w)} for gam, w in self.combination
            ],
            "extension": None if self.extension is None else self.extension.to_json(),
            "constant": format_fraction(self.constant),
        }


def combination_function(n: int, combination: Sequence[tuple[PathSubset, Fraction]]) -> CycleFunction:
    idx = cycle_index(n)
    X = num_cycles(n)
    vals = [ZERO] * X
    for gam, w in combination:
        h = w * Fraction(X, count_cycles_containing(n, gam.ptype))
        for x in cycles_containing(n, gam):
            vals[idx.index(x)] += h
    return CycleFunction(n, vals)


def cut_size(x: Cycle, U) -> int:
    U = set(U)
    return sum((i in U) != (j in U) for i, j in x.edges)


def _check_edge(n: int, i: int, j: int) -> None:
    if i == j:
        raise PreconditionError("an edge needs two distinct vertices")
    if not (1 <= i <= n and 1 <= j <= n):
        raise PreconditionError(f"vertices {i}, {j} outside 1..{n}")


def facet_f_ij(n: int, i: int, j: int) -> FacetCertificate:
    """The single generator g_{ij}; it equals (n-1)/2 * x_ij on X."""
    _check_edge(n, i, j)
    gam = PathSubset(n, frozenset([edge(i, j)]))
    comb_ = [(gam, Fraction(1))]
    f = combination_function(n, comb_)
    return FacetCertificate(LOWER, edge(i, j), comb_, linear_extension(f), Fraction(n - 1, 2), n)


def facet_f_ij_prime(n: int, i: int, j: int) -> FacetCertificate:
    """Uniform mixture over the two-edge paths a - i - b with a, b outside {i, j}."""
    _check_edge(n, i, j)
    if n < 5:
        raise PreconditionError("the cherry family at i needs n >= 5")
    others = [v for v in range(1, n + 1) if v not in (i, j)]
    family = [PathSubset(n, frozenset([edge(a, i), edge(i, b)])) for a, b in itertools.combinations(others, 2)]
    w = Fraction(1, comb(n - 2, 2))
    comb_ = [(gam, w) for gam in family]
    f = combination_function(n, comb_)
    # on a cycle without {i,j} exactly one cherry is present
    height = Fraction(num_cycles(n), count_cycles_containing(n, Partition((2,))))
    return FacetCertificate(UPPER, edge(i, j), comb_, linear_extension(f), w * height, n)


def subtour_family(n: int, U: Sequence[int], length: int) -> list[PathSubset]:
    """Paths with `length` edges, both endpoints outside U and every interior vertex in U."""
    Uset = set(U)
    inside = sorted(Uset)
    outside = [v for v in range(1, n + 1) if v not in Uset]
    out = []
    for a, b in itertools.combinations(outside, 2):
        for mid in itertools.permutations(inside, length - 1):
            seq = (a,) + mid + (b,)
            out.append(PathSubset(n, frozenset(edge(seq[t], seq[t + 1]) for t in range(length))))
    return out


def _check_subset(n: int, k: int, U) -> tuple[int, ...]:
    U = tuple(sorted(set(U)))
    if any(not 1 <= v <= n for v in U):
        raise PreconditionError(f"U must be a subset of 1..{n}")
    if not 2 <= len(U) <= 2 * k:
        raise PreconditionError(f"|U| = {len(U)} outside 2..2k = 2..{2 * k}")
    if n - len(U) < 2:
        raise PreconditionError("the complement of U needs at least two vertices")
    return U


def h_U_terms(n: int, U: Sequence[int]) -> list[tuple[PathSubset, Fraction]]:
    """Unnormalized h_U: weight (|U|-i)/|U| * c_i on each path of X_i, c_i = 2 a_(i+1) / |X|."""
    u = len(U)
    X = num_cycles(n)
    terms = []
    for i in range(1, u):
        c_i = Fraction(2 * count_cycles_containing(n, Partition((i + 1,))), X)
        w = Fraction(u - i, u) * c_i
        terms.extend((gam, w) for gam in subtour_family(n, U, i + 1))
    return terms


def facet_h_U(n: int, k: int, U: Sequence[int]) -> FacetCertificate:
    """h_U = cut(x, U) - 2 on X, rescaled to a convex combination."""
    U = _check_subset(n, k, U)
    terms = h_U_terms(n, U)
    scale = sum((w for _, w in terms), ZERO)
    comb_ = [(gam, w / scale) for gam, w in terms]
    f = combination_function(n, comb_)
    return FacetCertificate(SUBTOUR, U, comb_, linear_extension(f), 1 / scale, n)


def _phi(cert: FacetCertificate, x: Cycle) -> int:
    if cert.kind == LOWER:
        return int(tuple(cert.params) in x.edges)
    if cert.kind == UPPER:
        return 1 - int(tuple(cert.params) in x.edges)
    if cert.kind == SUBTOUR:
        return cut_size(x, cert.params) - 2
    raise PreconditionError(f"unknown certificate kind {cert.kind!r}")


def verify_facet(cert: FacetCertificate, n: int, k: int) -> bool:
    """Convexity, admissible generator types, linearity and the kind identity, over all of X."""
    if cert.n != n or not cert.combination:
        return False
    weights = [w for _, w in cert.combination]
    if any(w < 0 for w in weights) or sum(weights, ZERO) != 1:
        return False
    allowed = set(pk_vertex_partitions(k))
    if any(gam.n != n or gam.ptype not in allowed for gam, _ in cert.combination):
        return False
    f = combination_function(n, cert.combination)
    if cert.extension is None:
        return False
    idx = cycle_index(n)
    cv = cert.extension.vector()
    for x, eids, fx in zip(idx.cycles, idx.edge_ids, f.values):
        if 2 * sum((cv[e] for e in eids), ZERO) != fx:
            return False
        if fx != cert.constant * _phi(cert, x):
            return False
    return True


def all_certificates(n: int, k: int, max_u: int) -> list[FacetCertificate]:
    """f_ij and f'_ij for every edge, then h_U for every U with 2 <= |U| <= max_u."""
    if max_u > 2 * k:
        raise PreconditionError(f"max_u = {max_u} exceeds 2k = {2 * k}; h_U is only built for |U| <= 2k")
    certs = []
    for i, j in itertools.combinations(range(1, n + 1), 2):
        certs.append(facet_f_ij(n, i, j))
        certs.append(facet_f_ij_prime(n, i, j))
    for size in range(2, max_u + 1):
        for U in itertools.combinations(range(1, n + 1), size):
            certs.append(facet_h_U(n, k, U))
    return certs


def zero_set(f: CycleFunction) -> list[Cycle]:
    cycles = enumerate_cycles(f.n)
    return [x for x, v in zip(cycles, f.values) if v == 0]
