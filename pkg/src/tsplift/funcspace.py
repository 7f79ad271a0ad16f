"""Exact functions on the cycle set X and the matrices they pair with.

The pairing between a symmetric matrix ``c`` and a point ``y`` runs over
both triangles, ``<c, y> = sum_{i != j} c_ij y_ij``, so an edge counts
twice.  Every constant in the package is computed under this convention.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

from .combinatorics import (
    Cycle,
    Edge,
    PathSubset,
    count_cycles_containing,
    cycles_containing,
    edge,
    enumerate_cycles,
    num_cycles,
)
from .config import require_dense
from .errors import PreconditionError
from .rational import format_fraction, to_fraction

ZERO = Fraction(0)


def edges_of(n: int) -> list[Edge]:
    """The n(n-1)/2 edges of K_n in lexicographic order."""
    return list(itertools.combinations(range(1, n + 1), 2))


@lru_cache(maxsize=16)
def edge_index(n: int) -> dict[Edge, int]:
    return {e: idx for idx, e in enumerate(edges_of(n))}


# ---------------------------------------------------------------------------
# cycle index


class CycleIndex:
    """Cached enumeration of X with per-cycle edge ids (dense, cap-checked)."""

    def __init__(self, n: int):
        self.n = n
        self.cycles: tuple[Cycle, ...] = tuple(enumerate_cycles(n))
        self.position = {c.order: i for i, c in enumerate(self.cycles)}
        eid = edge_index(n)
        self.edge_ids: tuple[tuple[int, ...], ...] = tuple(
            tuple(sorted(eid[e] for e in c.edge_list())) for c in self.cycles
        )

    def __len__(self) -> int:
        return len(self.cycles)

    def index(self, x: Cycle) -> int:
        if x.n != self.n:
            raise PreconditionError(f"cycle on {x.n} vertices used with n={self.n}")
        return self.position[x.order]


@lru_cache(maxsize=4)
def _cycle_index(n: int) -> CycleIndex:
    return CycleIndex(n)


def cycle_index(n: int) -> CycleIndex:
    require_dense(n, "cycle function table")
    return _cycle_index(n)


# ---------------------------------------------------------------------------
# cycle functions


class CycleFunction:
    """Dense table of exact rationals over X, in canonical cycle order."""

    __slots__ = ("n", "values")

    def __init__(self, n: int, values: Iterable):
        vals = tuple(v if isinstance(v, Fraction) else to_fraction(v) for v in values)
        expected = num_cycles(n)
        if len(vals) != expected:
            raise PreconditionError(f"a function on X needs {expected} values for n={n}, got {len(vals)}")
        self.n = n
        self.values = vals

    @classmethod
    def from_callable(cls, n: int, fn: Callable[[Cycle], object]) -> "CycleFunction":
        return cls(n, (fn(x) for x in cycle_index(n).cycles))

    @classmethod
    def constant(cls, n: int, value=1) -> "CycleFunction":
        return cls(n, [Fraction(value)] * num_cycles(n))

    @classmethod
    def from_sparse(cls, n: int, support: Mapping[int, Fraction]) -> "CycleFunction":
        vals = [ZERO] * num_cycles(n)
        for i, v in support.items():
            vals[i] = Fraction(v)
        return cls(n, vals)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, key: int | Cycle) -> Fraction:
        if isinstance(key, Cycle):
            key = cycle_index(self.n).index(key)
        return self.values[key]

    def __call__(self, x: Cycle) -> Fraction:
        return self[x]

    def __eq__(self, other) -> bool:
        return isinstance(other, CycleFunction) and self.n == other.n and self.values == other.values

    def __hash__(self) -> int:
        return hash((self.n, self.values))

    def _check(self, other: "CycleFunction") -> None:
        if not isinstance(other, CycleFunction) or other.n != self.n:
            raise PreconditionError("cycle functions on different vertex counts")

    def __add__(self, other: "CycleFunction") -> "CycleFunction":
        self._check(other)
        return CycleFunction(self.n, (a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "CycleFunction") -> "CycleFunction":
        self._check(other)
        return CycleFunction(self.n, (a - b for a, b in zip(self.values, other.values)))

    def scale(self, q) -> "CycleFunction":
        q = to_fraction(q)
        return CycleFunction(self.n, (q * v for v in self.values))

    def support(self) -> list[int]:
        return [i for i, v in enumerate(self.values) if v != 0]

    def distinct_values(self) -> list[Fraction]:
        return sorted(set(self.values))

    def __repr__(self) -> str:
        return f"CycleFunction(n={self.n}, distinct={len(set(self.values))})"


def average(f: CycleFunction) -> Fraction:
    return sum(f.values, ZERO) / len(f.values)


def g_gamma(n: int, gamma: PathSubset) -> CycleFunction:
    """|X|/a_pi on cycles through every edge of gamma, 0 elsewhere (average 1)."""
    if gamma.n != n:
        raise PreconditionError("path subset lives in a different K_n")
    idx = cycle_index(n)
    height = Fraction(num_cycles(n), count_cycles_containing(n, gamma.ptype))
    return CycleFunction.from_sparse(n, {idx.index(x): height for x in cycles_containing(n, gamma)})


def g_st(n: int, s: int, t: int) -> CycleFunction:
    """(n-1)/2 on cycles through the edge {s, t}."""
    if s == t:
        raise PreconditionError("g_st needs s != t")
    return g_gamma(n, PathSubset(n, frozenset([edge(s, t)])))


# ---------------------------------------------------------------------------
# symmetric matrices


class SymMatrix:
    """Symmetric n x n exact matrix with zero diagonal, stored by upper-triangle pairs."""

    __slots__ = ("n", "_entries")

    def __init__(self, n: int, entries: Mapping[Edge, object] | None = None):
        if n < 2:
            raise PreconditionError(f"matrix dimension must be >= 2, got {n}")
        self.n = n
        clean: dict[Edge, Fraction] = {}
        for (i, j), v in (entries or {}).items():
            if not (1 <= i <= n and 1 <= j <= n):
                raise PreconditionError(f"index pair {(i, j)} outside 1..{n}")
            if i == j:
                if to_fraction(v) != 0:
                    raise PreconditionError("diagonal entries must be zero")
                continue
            q = to_fraction(v)
            if q:
                clean[edge(i, j)] = clean.get(edge(i, j), ZERO) + q
        self._entries = {e: v for e, v in clean.items() if v}

    # construction helpers
    @classmethod
    def from_vector(cls, n: int, vec: Sequence) -> "SymMatrix":
        es = edges_of(n)
        if len(vec) != len(es):
            raise PreconditionError(f"edge vector for n={n} needs {len(es)} entries")
        return cls(n, dict(zip(es, vec)))

    @classmethod
    def constant(cls, n: int, value) -> "SymMatrix":
        return cls(n, {e: value for e in edges_of(n)})

    def vector(self) -> list[Fraction]:
        return [self._entries.get(e, ZERO) for e in edges_of(self.n)]

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if i == j:
            return ZERO
        return self._entries.get(edge(i, j), ZERO)

    def items(self):
        return sorted(self._entries.items())

    def row_sum(self, i: int) -> Fraction:
        return sum((self[i, j] for j in range(1, self.n + 1) if j != i), ZERO)

    def row_sums(self) -> list[Fraction]:
        sums = [ZERO] * (self.n + 1)
        for (i, j), v in self._entries.items():
            sums[i] += v
            sums[j] += v
        return sums[1:]

    def _check(self, other: "SymMatrix") -> None:
        if not isinstance(other, SymMatrix) or other.n != self.n:
            raise PreconditionError("matrix dimension mismatch")

    def __add__(self, other: "SymMatrix") -> "SymMatrix":
        self._check(other)
        out = dict(self._entries)
        for e, v in other._entries.items():
            out[e] = out.get(e, ZERO) + v
        return SymMatrix(self.n, out)

    def __sub__(self, other: "SymMatrix") -> "SymMatrix":
        return self + other.scale(-1)

    def scale(self, q) -> "SymMatrix":
        q = to_fraction(q)
        return SymMatrix(self.n, {e: q * v for e, v in self._entries.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, SymMatrix) and self.n == other.n and self._entries == other._entries

    def __hash__(self) -> int:
        return hash((self.n, tuple(sorted(self._entries.items()))))

    def __repr__(self) -> str:
        return f"SymMatrix(n={self.n}, nonzeros={len(self._entries)})"

    # JSON
    def to_json(self) -> dict:
        return {"n": self.n, "entries": [[i, j, format_fraction(v)] for (i, j), v in self.items()]}

    @classmethod
    def from_json(cls, data: dict) -> "SymMatrix":
        if not isinstance(data, dict) or "n" not in data:
            raise PreconditionError("matrix JSON must be an object with keys 'n' and 'entries'")
        n = data["n"]
        if not isinstance(n, int) or isinstance(n, bool):
            raise PreconditionError("'n' must be an integer")
        entries: dict[Edge, Fraction] = {}
        for item in data.get("entries", []):
            if not isinstance(item, list) or len(item) != 3:
                raise PreconditionError(f"entry {item!r} is not a [i, j, value] triple")
            i, j, v = item
            if not all(isinstance(t, int) and not isinstance(t, bool) for t in (i, j)):
                raise PreconditionError(f"entry {item!r} has non-integer indices")
            if edge(i, j) in entries:
                raise PreconditionError(f"pair {(i, j)} listed twice")
            try:
                entries[edge(i, j)] = to_fraction(v)
            except (TypeError, ValueError) as exc:
                raise PreconditionError(str(exc)) from exc
        return cls(n, entries)

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def loads(cls, text: str) -> "SymMatrix":
        return cls.from_json(json.loads(text))


def evaluate_extension(c: SymMatrix, y: SymMatrix) -> Fraction:
    """Pairing over both triangles: 2 * sum_{i<j} c_ij y_ij."""
    if c.n != y.n:
        raise PreconditionError(f"dimension mismatch: {c.n} vs {y.n}")
    small, big = (c, y) if len(c._entries) <= len(y._entries) else (y, c)
    return 2 * sum((v * big._entries.get(e, ZERO) for e, v in small._entries.items()), ZERO)


def barycenter(n: int) -> SymMatrix:
    if n < 3:
        raise PreconditionError(f"need n >= 3, got {n}")
    return SymMatrix.constant(n, Fraction(2, n - 1))


def affine_hull_check(y: SymMatrix) -> bool:
    """True iff every row sums to 2 (the degree equations)."""
    return all(r == 2 for r in y.row_sums())


def cycle_incidence(x: Cycle) -> SymMatrix:
    return SymMatrix(x.n, {e: 1 for e in x.edges})


def gauge_fix(c: SymMatrix) -> SymMatrix:
    """Representative with equal row sums, moving only along c_ij -> c_ij + a_i + a_j with sum(a) = 0."""
    n = c.n
    if n < 3:
        return c
    rows = c.row_sums()
    mean = sum(rows, ZERO) / n
    a = [(mean - r) / (n - 2) for r in rows]
    return SymMatrix(n, {(i, j): c[i, j] + a[i - 1] + a[j - 1] for i, j in edges_of(n)})


# ---------------------------------------------------------------------------
# linear extensions


def _rank_rows(rows: Iterable[tuple[int, list[Fraction]]], width: int):
    """Greedy exact row selection; returns the indices of independent rows."""
    basis: list[tuple[int, list[Fraction]]] = []  # (pivot column, reduced row)
    chosen = []
    for idx, row in rows:
        r = list(row)
        for piv, b in basis:
            if r[piv]:
                f = r[piv] / b[piv]
                r = [x - f * y for x, y in zip(r, b)]
        lead = next((j for j, v in enumerate(r) if v), None)
        if lead is not None:
            basis.append((lead, r))
            chosen.append(idx)
        if len(basis) == width:
            break
    return chosen


def _invert(m: list[list[Fraction]]) -> list[list[Fraction]]:
    size = len(m)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(size)] for i, row in enumerate(m)]
    for col in range(size):
        piv = next((r for r in range(col, size) if aug[r][col]), None)
        if piv is None:
            raise ArithmeticError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(size):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[size:] for row in aug]


@lru_cache(maxsize=8)
def _extension_solver(n: int):
    """Spanning cycles and the exact inverse that maps their values to a gauge-fixed matrix.

    The restriction map c -> (<c, x>)_x has kernel {a_i + a_j : sum(a) = 0},
    so a maximal independent set of cycle rows plus n - 1 equal-row-sum rows
    form a square nonsingular system.
    """
    idx = cycle_index(n)
    width = len(edges_of(n))
    inc_rows = []
    for i, eids in enumerate(idx.edge_ids):
        r = [Fraction(0)] * width
        for e in eids:
            r[e] = Fraction(2)
        inc_rows.append((i, r))
    chosen = _rank_rows(inc_rows, width)
    es = edges_of(n)
    gauge_rows = []
    for v in range(1, n):
        r = [Fraction(0)] * width
        for e_id, (i, j) in enumerate(es):
            r[e_id] += (i == v) + (j == v) - (i == v + 1) - (j == v + 1)
        gauge_rows.append(r)
    system = [inc_rows[i][1] for i in chosen] + gauge_rows
    if len(system) != width:
        raise ArithmeticError("unexpected rank of the cycle incidence system")
    return tuple(chosen), _invert(system)


def linear_extension(f: CycleFunction) -> SymMatrix | None:
    """Gauge-fixed matrix c with <c, x> = f(x) on every cycle, or None if f is not linear."""
    n = f.n
    idx = cycle_index(n)
    chosen, inv = _extension_solver(n)
    rhs = [f.values[i] for i in chosen] + [ZERO] * (n - 1)
    vec = [sum((a * b for a, b in zip(row, rhs) if b), ZERO) for row in inv]
    for i, eids in enumerate(idx.edge_ids):
        if 2 * sum((vec[e] for e in eids), ZERO) != f.values[i]:
            return None
    return SymMatrix.from_vector(n, vec)


def restrict(c: SymMatrix) -> CycleFunction:
    """The function x -> <c, x> on X."""
    n = c.n
    vec = c.vector()
    return CycleFunction(n, (2 * sum((vec[e] for e in eids), ZERO) for eids in cycle_index(n).edge_ids))
