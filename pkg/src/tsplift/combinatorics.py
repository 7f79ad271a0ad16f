"""Hamiltonian cycles, path subsets and partitions of K_n.

Vertices are labelled 1..n.  An edge is the tuple ``(i, j)`` with ``i < j``.
All counts are exact Python integers.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial, prod
from typing import Iterable, Iterator, Mapping, Sequence

from .config import require_dense
from .errors import PreconditionError

Edge = tuple[int, int]


def edge(i: int, j: int) -> Edge:
    if i == j:
        raise PreconditionError(f"loop edge {{{i},{j}}}")
    return (i, j) if i < j else (j, i)


def falling_factorial(n: int, m: int) -> int:
    """n (n-1) ... (n-m+1); the empty product is 1."""
    if m < 0:
        raise PreconditionError(f"falling factorial length must be >= 0, got {m}")
    return prod(range(n - m + 1, n + 1)) if m else 1


# ---------------------------------------------------------------------------
# partitions


@dataclass(frozen=True, order=True)
class Partition:
    """Non-increasing tuple of positive parts (a path-length profile)."""

    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        parts = tuple(int(p) for p in self.parts)
        if any(p < 1 for p in parts):
            raise PreconditionError(f"partition parts must be >= 1: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise PreconditionError(f"partition parts must be non-increasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, *parts: int) -> "Partition":
        """Build from parts in any order."""
        return cls(tuple(sorted(parts, reverse=True)))

    @property
    def total(self) -> int:
        return sum(self.parts)

    @property
    def num_parts(self) -> int:
        return len(self.parts)

    @property
    def multiplicities(self) -> dict[int, int]:
        return dict(sorted(Counter(self.parts).items()))

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


def integer_partitions(j: int) -> Iterator[Partition]:
    """All partitions of ``j`` in reverse lexicographic order."""

    def rec(remaining: int, largest: int) -> Iterator[tuple[int, ...]]:
        if remaining == 0:
            yield ()
            return
        for p in range(min(remaining, largest), 0, -1):
            for rest in rec(remaining - p, p):
                yield (p,) + rest

    if j < 0:
        raise PreconditionError("cannot partition a negative integer")
    for parts in rec(j, j):
        yield Partition(parts)


def _check_feasible(n: int, pi: Partition) -> None:
    if pi.num_parts == 0:
        raise PreconditionError("the empty partition has no path subsets")
    if pi.total + pi.num_parts > n:
        raise PreconditionError(f"partition {pi} needs {pi.total + pi.num_parts} vertices, K_{n} has {n}")
    if pi.total > n - 1:
        raise PreconditionError(f"partition {pi} has more than n-1 = {n - 1} edges")


# ---------------------------------------------------------------------------
# cycles


@dataclass(frozen=True, order=True)
class Cycle:
    """A Hamiltonian cycle stored as its canonical vertex order.

    Canonical means ``order[0] == 1`` and ``order[1] < order[-1]``.  Use
    :func:`canonicalize` to build one from an arbitrary traversal.
    """

    order: tuple[int, ...]
    _edges: frozenset = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self) -> None:
        order = tuple(self.order)
        n = len(order)
        if n < 3 or sorted(order) != list(range(1, n + 1)):
            raise PreconditionError(f"{order} is not a permutation of 1..n with n >= 3")
        if order[0] != 1 or order[1] > order[-1]:
            raise PreconditionError(f"{order} is not in canonical form; use canonicalize()")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "_edges", frozenset(edge(order[i], order[(i + 1) % n]) for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.order)

    @property
    def edges(self) -> frozenset:
        return self._edges

    def edge_list(self) -> list[Edge]:
        """Edges in traversal order; edge ``i`` joins ``order[i]`` and ``order[i+1]``."""
        n = self.n
        return [edge(self.order[i], self.order[(i + 1) % n]) for i in range(n)]

    def contains(self, edges: Iterable[Edge]) -> bool:
        return all(e in self._edges for e in edges)

    def relabel(self, sigma: Mapping[int, int] | Sequence[int]) -> "Cycle":
        """Image under the vertex map ``v -> sigma[v]`` (a sequence is read 1-based)."""
        if not isinstance(sigma, Mapping):
            sigma = {v + 1: w for v, w in enumerate(sigma)}
        return canonicalize([sigma[v] for v in self.order])


def canonicalize(perm: Sequence[int]) -> Cycle:
    """Rotate so that 1 comes first, then reflect so that order[1] < order[-1]."""
    perm = tuple(int(v) for v in perm)
    n = len(perm)
    if n < 3 or sorted(perm) != list(range(1, n + 1)):
        raise PreconditionError(f"{perm} is not a permutation of 1..n with n >= 3")
    k = perm.index(1)
    rotated = perm[k:] + perm[:k]
    if rotated[1] > rotated[-1]:
        rotated = (1,) + tuple(reversed(rotated[1:]))
    return Cycle(rotated)


def num_cycles(n: int) -> int:
    if n < 3:
        raise PreconditionError(f"Hamiltonian cycles need n >= 3, got {n}")
    return factorial(n - 1) // 2


@lru_cache(maxsize=8)
def _cycles_tuple(n: int) -> tuple[Cycle, ...]:
    out = []
    for tail in itertools.permutations(range(2, n + 1)):
        if tail[0] < tail[-1]:
            out.append(Cycle((1,) + tail))
    return tuple(out)


def enumerate_cycles(n: int) -> list[Cycle]:
    """All (n-1)!/2 canonical cycles in lexicographic order.

    The position in this list is the global cycle index used by dense
    function tables.
    """
    num_cycles(n)
    require_dense(n, "cycle enumeration")
    return list(_cycles_tuple(n))


def distance_between(y: Cycle, s: int, t: int) -> int:
    """Number of intermediate vertices on the shorter arc between ``s`` and ``t``."""
    if s == t:
        raise PreconditionError("distance needs two distinct vertices")
    n = y.n
    if not (1 <= s <= n and 1 <= t <= n):
        raise PreconditionError(f"vertices {s}, {t} outside 1..{n}")
    gap = (y.order.index(t) - y.order.index(s)) % n - 1
    return min(gap, n - 2 - gap)


def max_distance(n: int) -> int:
    return (n - 2) // 2


def make_distance_cycle(n: int, d: int) -> tuple[Cycle, int, int]:
    """Representative (1, 2, ..., n) with s = 1 and t = d + 2."""
    if n < 3:
        raise PreconditionError(f"need n >= 3, got {n}")
    if not 0 <= d <= max_distance(n):
        raise PreconditionError(f"distance {d} outside 0..{max_distance(n)} for n={n}")
    return Cycle(tuple(range(1, n + 1))), 1, d + 2


# ---------------------------------------------------------------------------
# path subsets


def _components(n: int, edges: frozenset) -> list[tuple[int, ...]]:
    """Vertex sequences of the paths formed by ``edges``; raises if not a path forest."""
    adj: dict[int, list[int]] = {}
    for i, j in edges:
        if not (1 <= i <= n and 1 <= j <= n) or i == j:
            raise PreconditionError(f"edge {(i, j)} is not an edge of K_{n}")
        adj.setdefault(i, []).append(j)
        adj.setdefault(j, []).append(i)
    if any(len(nb) > 2 for nb in adj.values()):
        raise PreconditionError("a vertex has degree > 2; not a path subset")
    seen: set[int] = set()
    paths = []
    for start in sorted(adj):
        if start in seen or len(adj[start]) != 1:
            continue
        seq = [start]
        seen.add(start)
        prev, cur = None, start
        while True:
            nxt = [v for v in adj[cur] if v != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            seq.append(cur)
            seen.add(cur)
        if seq[0] > seq[-1]:
            seq.reverse()
        paths.append(tuple(seq))
    if len(seen) != len(adj):
        raise PreconditionError("the edges contain a cycle; not a path subset")
    return sorted(paths)


@dataclass(frozen=True)
class PathSubset:
    """Vertex-disjoint simple paths in K_n, given by their edge set."""

    n: int
    edges: frozenset
    paths: tuple[tuple[int, ...], ...] = field(default=None, compare=False, repr=False)
    ptype: Partition = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        edges = frozenset(edge(*e) for e in self.edges)
        paths = _components(self.n, edges)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "paths", tuple(paths))
        object.__setattr__(self, "ptype", Partition.of(*(len(p) - 1 for p in paths)))

    @classmethod
    def from_paths(cls, n: int, paths: Iterable[Sequence[int]]) -> "PathSubset":
        es = []
        for p in paths:
            es.extend(edge(p[i], p[i + 1]) for i in range(len(p) - 1))
        if len(set(es)) != len(es):
            raise PreconditionError("repeated edge in path list")
        return cls(n, frozenset(es))

    @property
    def vertices(self) -> frozenset:
        return frozenset(v for p in self.paths for v in p)

    def degree(self, v: int) -> int:
        return sum(v in e for e in self.edges)

    def path_of(self, v: int) -> int | None:
        for idx, p in enumerate(self.paths):
            if v in p:
                return idx
        return None

    def sort_key(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.edges))


def count_path_subsets(n: int, pi: Partition) -> int:
    """|B_pi| = n_(k+m) / (2^m prod_i m_i!)."""
    _check_feasible(n, pi)
    denom = 2 ** pi.num_parts * prod(factorial(c) for c in pi.multiplicities.values())
    return falling_factorial(n, pi.total + pi.num_parts) // denom


def count_cycles_containing(n: int, pi: Partition) -> int:
    """a_pi = 2^(m-1) (n-k-1)!: cycles through a fixed path subset of type pi.

    The boundary k + m = n (paths covering every vertex) is included.
    """
    _check_feasible(n, pi)
    return 2 ** (pi.num_parts - 1) * factorial(n - pi.total - 1)


def count_placements_in_path(n: int, mults: Mapping[int, int] | Sequence[int]) -> int:
    """Ways to place vertex-disjoint paths in an n-vertex path.

    ``mults`` maps a length ``i`` to the number ``m_i`` of paths of that
    length; a sequence is read as ``[m_1, m_2, ...]``.  Placements that do not
    fit return 0.
    """
    if not isinstance(mults, Mapping):
        mults = {i + 1: m for i, m in enumerate(mults)}
    if any(m < 0 for m in mults.values()) or any(i < 1 for i in mults):
        raise PreconditionError(f"bad multiplicity list {dict(mults)}")
    edges_used = sum(i * m for i, m in mults.items())
    blocks = sum(mults.values())
    if n - edges_used < blocks:
        return 0
    return falling_factorial(n - edges_used, blocks) // prod(factorial(m) for m in mults.values())


def enumerate_path_subsets(n: int, pi: Partition) -> list[PathSubset]:
    """Every path subset of K_n of type ``pi``, sorted by edge list."""
    _check_feasible(n, pi)
    parts = pi.parts
    found: list[PathSubset] = []

    def rec(idx: int, used: frozenset, prev_seq: tuple[int, ...] | None, acc: list[tuple[int, ...]]) -> None:
        if idx == len(parts):
            found.append(PathSubset.from_paths(n, acc))
            return
        length = parts[idx]
        same_as_prev = idx > 0 and parts[idx - 1] == length
        free = [v for v in range(1, n + 1) if v not in used]
        for seq in itertools.permutations(free, length + 1):
            if seq[0] > seq[-1]:
                continue
            if same_as_prev and seq <= prev_seq:
                continue
            rec(idx + 1, used | set(seq), seq, acc + [seq])

    rec(0, frozenset(), None, [])
    found.sort(key=PathSubset.sort_key)
    return found


@lru_cache(maxsize=256)
def cycle_subset_indices(n: int, parts: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """Index sets ``S`` of edges of an n-cycle whose runs have the given type.

    Edge ``i`` of a cycle joins positions ``i`` and ``i+1 (mod n)``.  The
    result depends only on ``n`` and the type, so it is shared by all cycles.
    """
    k = sum(parts)
    target = tuple(sorted(parts, reverse=True))
    out = []
    if k >= n:
        return ()
    for sel in itertools.combinations(range(n), k):
        if _run_type(n, sel) == target:
            out.append(sel)
    return tuple(out)


def _runs(n: int, sel: Sequence[int]) -> list[tuple[int, int]]:
    """Maximal cyclic runs ``(start, length)`` of the selected edge indices."""
    s = set(sel)
    out = []
    for a in sorted(s):
        if (a - 1) % n in s:
            continue
        length, i = 0, a
        while i in s:
            length += 1
            i = (i + 1) % n
        out.append((a, length))
    return out


def _run_type(n: int, sel: Sequence[int]) -> tuple[int, ...]:
    if len(sel) >= n:
        return ()
    return tuple(sorted((length for _, length in _runs(n, sel)), reverse=True))


def enumerate_path_subsets_within(y: Cycle, pi: Partition) -> list[PathSubset]:
    """Path subsets of type ``pi`` made of edges of ``y`` (edge subsets of y, filtered)."""
    if pi.total > y.n:
        raise PreconditionError(f"partition {pi} has more edges than the cycle")
    el = y.edge_list()
    return [PathSubset(y.n, frozenset(el[i] for i in sel)) for sel in cycle_subset_indices(y.n, pi.parts)]


def cycles_containing(n: int, gamma: PathSubset) -> Iterator[Cycle]:
    """Cycles of K_n through every edge of ``gamma``, built block by block.

    The first path is fixed in one orientation; the other paths (two
    orientations each) and the uncovered vertices are arranged in every
    order.  Each arrangement closes to a distinct cycle.
    """
    if gamma.n != n:
        raise PreconditionError("path subset lives in a different K_n")
    if not gamma.edges:
        yield from enumerate_cycles(n)
        return
    first, *others = gamma.paths
    singles = [(v,) for v in range(1, n + 1) if v not in gamma.vertices]
    blocks = [tuple(p) for p in others] + singles
    n_paths = len(others)
    for order in itertools.permutations(range(len(blocks))):
        for flips in itertools.product((False, True), repeat=n_paths):
            seq = list(first)
            for b in order:
                blk = blocks[b]
                if b < n_paths and flips[b]:
                    blk = blk[::-1]
                seq.extend(blk)
            yield canonicalize(seq)
