import itertools
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from tsplift.combinatorics import (
    Cycle,
    Partition,
    PathSubset,
    canonicalize,
    count_cycles_containing,
    count_path_subsets,
    count_placements_in_path,
    cycles_containing,
    distance_between,
    edge,
    enumerate_cycles,
    enumerate_path_subsets,
    enumerate_path_subsets_within,
    falling_factorial,
    integer_partitions,
    make_distance_cycle,
    num_cycles,
)
from tsplift.config import dense_cap
from tsplift.errors import PreconditionError, ResourceCapError


def brute_cycles(n):
    """Edge sets of all Hamiltonian cycles, from raw permutations."""
    seen = set()
    for p in itertools.permutations(range(1, n + 1)):
        seen.add(frozenset(edge(p[i], p[(i + 1) % n]) for i in range(n)))
    return seen


def brute_path_subsets(n, parts):
    """All edge sets of K_n that are vertex-disjoint paths with the given lengths."""
    k = sum(parts)
    all_edges = list(itertools.combinations(range(1, n + 1), 2))
    out = []
    for sel in itertools.combinations(all_edges, k):
        try:
            g = PathSubset(n, frozenset(sel))
        except PreconditionError:
            continue
        if g.ptype == Partition.of(*parts):
            out.append(g)
    return out


@pytest.mark.parametrize("n,m,value", [(5, 0, 1), (8, 3, 336), (6, 6, 720)])
def test_falling_factorial(n, m, value):
    assert falling_factorial(n, m) == value


@pytest.mark.parametrize("n,count", [(3, 1), (4, 3), (5, 12), (7, 360)])
def test_cycle_counts(n, count):
    assert num_cycles(n) == count
    assert len(enumerate_cycles(n)) == count


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
def test_enumeration_matches_permutations(n):
    cycles = enumerate_cycles(n)
    assert {x.edges for x in cycles} == brute_cycles(n)
    assert cycles == sorted(cycles, key=lambda x: x.order)


def test_small_cycle_lists():
    assert [x.order for x in enumerate_cycles(3)] == [(1, 2, 3)]


@pytest.mark.parametrize(
    "perm,canon",
    [((2, 3, 1), (1, 2, 3)), ((1, 4, 3, 2), (1, 2, 3, 4)), ((3, 2, 1, 4), (1, 2, 3, 4))],
)
def test_canonicalize(perm, canon):
    assert canonicalize(perm).order == canon


@given(st.permutations(list(range(1, 9))), st.integers(0, 7), st.booleans())
def test_canonical_form_ignores_rotation_and_reflection(perm, shift, flip):
    p = perm[shift:] + perm[:shift]
    if flip:
        p = p[::-1]
    assert canonicalize(p) == canonicalize(perm)
    c = canonicalize(perm).order
    assert c[0] == 1 and c[1] < c[-1]


def test_canonicalize_rejects_non_permutations():
    with pytest.raises(PreconditionError):
        canonicalize((1, 2, 2))


def test_enumeration_respects_dense_cap():
    with dense_cap(6):
        with pytest.raises(ResourceCapError):
            enumerate_cycles(7)


@pytest.mark.parametrize(
    "order,s,t,d",
    [((1, 2, 3, 4, 5), 1, 2, 0), ((1, 2, 3, 4, 5), 1, 3, 1), (tuple(range(1, 9)), 1, 5, 3)],
)
def test_distance_between(order, s, t, d):
    assert distance_between(Cycle(order), s, t) == d


@pytest.mark.parametrize("n,d,s,t", [(8, 0, 1, 2), (8, 3, 1, 5), (9, 1, 1, 3)])
def test_make_distance_cycle(n, d, s, t):
    y, s2, t2 = make_distance_cycle(n, d)
    assert (y.order, s2, t2) == (tuple(range(1, n + 1)), s, t)
    assert distance_between(y, s2, t2) == d


@pytest.mark.parametrize(
    "n,parts,count",
    [(5, (1,), 10), (8, (1, 1), 210), (6, (2,), 60), (8, (2, 1), 1680)],
)
def test_path_subset_counts(n, parts, count):
    pi = Partition(parts)
    assert count_path_subsets(n, pi) == count
    assert len(enumerate_path_subsets(n, pi)) == count


@pytest.mark.parametrize("n,parts", [(5, (1,)), (5, (2,)), (6, (1, 1)), (6, (2, 1)), (6, (3,)), (7, (1, 1, 1))])
def test_path_subsets_against_brute_force(n, parts):
    got = {g.edges for g in enumerate_path_subsets(n, Partition(parts))}
    assert got == {g.edges for g in brute_path_subsets(n, parts)}


@pytest.mark.parametrize("n,parts,count", [(5, (1,), 5), (6, (1, 1), 9), (6, (5,), 6)])
def test_within_cycle_counts(n, parts, count):
    y = Cycle(tuple(range(1, n + 1)))
    inside = enumerate_path_subsets_within(y, Partition(parts))
    assert len(inside) == count
    assert all(g.edges <= y.edges for g in inside)


@given(st.permutations(list(range(1, 8))), st.sampled_from([(1,), (2,), (1, 1), (2, 1), (3, 2)]))
@settings(max_examples=30, deadline=None)
def test_within_cycle_is_a_filter(perm, parts):
    y = canonicalize(perm)
    pi = Partition(parts)
    expected = {g.edges for g in enumerate_path_subsets(7, pi) if g.edges <= y.edges}
    assert {g.edges for g in enumerate_path_subsets_within(y, pi)} == expected


@pytest.mark.parametrize("n,parts,count", [(6, (2, 1), 4), (5, (4,), 1), (7, (1,), 120)])
def test_count_cycles_containing(n, parts, count):
    assert count_cycles_containing(n, Partition(parts)) == count


@pytest.mark.parametrize(
    "n,paths,count",
    [(4, [(1, 2)], 2), (5, [(1, 2, 3, 4, 5)], 1), (6, [(1, 2), (3, 4)], 12), (7, [(1, 2, 3), (5, 6)], 12)],
)
def test_cycles_containing(n, paths, count):
    g = PathSubset.from_paths(n, paths)
    got = list(cycles_containing(n, g))
    assert len(got) == count == len(set(got))
    assert {x.edges for x in got} == {c for c in brute_cycles(n) if g.edges <= c}


@given(st.integers(5, 8), st.data())
@settings(max_examples=25, deadline=None)
def test_containing_formula_against_scan(n, data):
    parts = data.draw(st.sampled_from([p for p in [(1,), (2,), (1, 1), (3,), (2, 1), (1, 1, 1)] if sum(p) + len(p) <= n]))
    family = enumerate_path_subsets(n, Partition(parts))
    g = family[data.draw(st.integers(0, len(family) - 1))]
    m, k = len(parts), sum(parts)
    scan = sum(g.edges <= x.edges for x in enumerate_cycles(n))
    assert scan == count_cycles_containing(n, g.ptype) == 2 ** (m - 1) * factorial(n - k - 1)


@pytest.mark.parametrize("n,mults,count", [(10, {1: 1}, 9), (6, {1: 2}, 6), (7, {1: 1, 2: 1}, 12)])
def test_count_placements(n, mults, count):
    assert count_placements_in_path(n, mults) == count


def test_placements_accept_lists():
    assert count_placements_in_path(7, [1, 1]) == 12


def test_placements_that_do_not_fit():
    assert count_placements_in_path(4, {3: 1, 1: 1}) == 0


def test_partitions_of_four():
    got = sorted(p.parts for p in integer_partitions(4))
    assert got == sorted([(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)])


def test_partition_order():
    assert Partition.of(1, 2) == Partition((2, 1))
    assert Partition.of(1, 2, 1).multiplicities == {2: 1, 1: 2}
    with pytest.raises(PreconditionError):
        Partition((1, 2))


def test_path_subset_rejects_cycles_and_branches():
    with pytest.raises(PreconditionError):
        PathSubset(4, frozenset([(1, 2), (2, 3), (1, 3)]))
    with pytest.raises(PreconditionError):
        PathSubset(5, frozenset([(1, 2), (1, 3), (1, 4)]))


def test_relabel_maps_edges():
    x = Cycle((1, 2, 3, 4, 5))
    y = x.relabel({1: 2, 2: 1, 3: 3, 4: 4, 5: 5})
    assert y.edges == frozenset({(1, 2), (1, 3), (3, 4), (4, 5), (2, 5)})
