import json
from fractions import Fraction as F

import pytest

from tsplift.combinatorics import Cycle, PathSubset, enumerate_cycles
from tsplift.errors import PreconditionError
from tsplift.funcspace import SymMatrix, barycenter, cycle_incidence, evaluate_extension, restrict
from tsplift.membership import (
    INSIDE,
    LCG,
    NOT_IN_AFFINE_HULL,
    OUTSIDE,
    check_direction,
    project_row_sums_zero,
    qk_membership,
    qk_minimum,
    qk_ray,
    qk_ray_max,
    random_directions,
    scaling_check,
    transport_measure,
    tsp_membership,
    tsp_ray_max,
    verify_qk_lower_bound,
    verify_tsp_verdict,
    vertex_direction,
)


def repaired_point(n, i, j, value):
    """Z moved along the row-sum-free projection of e_ij until entry (i, j) hits value."""
    d = project_row_sums_zero(SymMatrix(n, {(i, j): 1}))
    Z = barycenter(n)
    return Z + d.scale((value - Z[i, j]) / d[i, j])


# T_n


def test_cycle_is_inside_tsp():
    x = Cycle((1, 3, 5, 2, 4, 6))
    v = tsp_membership(6, cycle_incidence(x))
    assert v.status == INSIDE
    assert list(v.inside_witness["cycle_weights"].values()) == [1]


def test_barycenter_is_inside_tsp():
    v = tsp_membership(6, barycenter(6))
    assert v.status == INSIDE
    assert verify_tsp_verdict(6, barycenter(6), v)


def test_overshoot_is_outside_tsp():
    x = cycle_incidence(Cycle((1, 2, 3, 4, 5, 6)))
    Z = barycenter(6)
    y = Z + (x - Z).scale(F(101, 100))
    v = tsp_membership(6, y)
    assert v.status == OUTSIDE
    c, delta = v.outside_witness["matrix"], v.outside_witness["constant"]
    assert all(evaluate_extension(c, cycle_incidence(z)) + delta >= 0 for z in enumerate_cycles(6))
    assert evaluate_extension(c, y) + delta < 0


def test_tampered_tsp_verdict_fails():
    y = barycenter(6)
    v = tsp_membership(6, y)
    w = dict(v.inside_witness["cycle_weights"])
    first = next(iter(w))
    w[first] += F(1, 100)
    v.inside_witness["cycle_weights"] = w
    assert not verify_tsp_verdict(6, y, v)


def test_tsp_ray_to_vertex_is_one():
    x = Cycle((1, 2, 3, 4, 5, 6))
    assert tsp_ray_max(6, vertex_direction(x)) == 1


# Q_k


def test_barycenter_has_minimum_one():
    v = qk_membership(6, 1, barycenter(6))
    assert v.status == INSIDE and v.value == 1


def test_vertex_inside_qk_with_dual_proof():
    x = Cycle((1, 4, 2, 5, 3, 6))
    y = cycle_incidence(x)
    v = qk_membership(6, 1, y)
    assert v.status == INSIDE and v.value >= 0
    w = v.inside_witness["cycle_measure"]
    assert verify_qk_lower_bound(6, 1, y, w, v.value)
    assert not verify_qk_lower_bound(6, 1, y, w, v.value + 1)


def test_transported_measure_proves_other_vertices():
    base = enumerate_cycles(6)[0]
    m = qk_minimum(6, 1, cycle_incidence(base))
    for x in enumerate_cycles(6):
        sigma = dict(zip(base.order, x.order))
        w = transport_measure(6, m.cycle_measure, sigma)
        assert verify_qk_lower_bound(6, 1, cycle_incidence(x), w, m.value)


def test_not_in_affine_hull():
    y = barycenter(6) + SymMatrix(6, {(1, 2): F(1, 7)})
    assert qk_membership(6, 1, y).status == NOT_IN_AFFINE_HULL


def test_minimum_needs_equal_row_sums():
    with pytest.raises(PreconditionError):
        qk_minimum(6, 1, SymMatrix(6, {(1, 2): 1}))


def test_heavy_edge_is_cut_by_cherries():
    y = repaired_point(8, 1, 2, F(11, 10))
    assert y[1, 2] == F(11, 10) and min(v for _, v in y.items()) > 0
    v = qk_membership(8, 1, y)
    assert v.status == OUTSIDE and v.value == F(-7, 50)
    gens = v.outside_witness["generators"]
    # the minimizer is the cherry mixture centred at 2 avoiding vertex 1
    assert len(gens) == 15 and all(w == F(1, 15) for _, w in gens)
    for paths, _ in gens:
        g = PathSubset.from_paths(8, paths)
        assert g.degree(2) == 2 and 1 not in g.vertices
    c = v.outside_witness["matrix"]
    assert min(restrict(c).values) >= 0
    assert evaluate_extension(c, y) < 0


def test_ray_towards_vertex():
    x = Cycle((1, 2, 3, 4, 5, 6))
    d = vertex_direction(x)
    assert qk_ray_max(6, 1, d) >= 1
    assert qk_ray_max(6, 1, d.scale(-1)) > 0


def test_ray_boundary_certificate():
    d = random_directions(6, 1, seed=3)[0]
    ray = qk_ray(6, 1, d)
    boundary = barycenter(6) + d.scale(ray.t)
    f = ray.minimum
    # the minimizer vanishes at the boundary point and its dual proves nothing lower exists
    assert evaluate_extension(f.matrix, boundary) == 0
    assert sum(f.weights.values()) == 1


def test_ray_rejects_bad_directions():
    with pytest.raises(PreconditionError):
        qk_ray_max(6, 1, SymMatrix(6))
    with pytest.raises(PreconditionError):
        qk_ray_max(6, 1, SymMatrix(6, {(1, 2): 1}))


# directions


def test_lcg_sequence():
    g = LCG(42)
    state = 42
    for _ in range(5):
        state = (6364136223846793005 * state + 1442695040888963407) % 2**64
        assert g.next() == state >> 33


def test_directions_are_deterministic_and_balanced():
    a = random_directions(8, 3, seed=42)
    b = random_directions(8, 3, seed=42)
    assert a == b
    assert all(r == 0 for d in a for r in d.row_sums())
    assert random_directions(8, 1, seed=43) != a[:1]


def test_projection_is_orthogonal():
    r = SymMatrix.from_vector(6, [F(i % 5 - 2, 3) for i in range(15)])
    p = project_row_sums_zero(r)
    assert project_row_sums_zero(p) == p
    q = random_directions(6, 1, seed=9)[0]
    assert evaluate_extension(r - p, q) == 0


# scaling


def test_vertex_direction_scaling_stays_inside():
    x = Cycle((1, 3, 5, 7, 2, 4, 6, 8))
    from tsplift.lifting import build_smoothing

    c = build_smoothing(8, 1).c_k
    res = check_direction(8, 1, c, vertex_direction(x))
    assert res.passed and res.scaled <= 1


def test_scaling_report_is_reproducible():
    a = scaling_check(8, 1, 1, 7)
    b = scaling_check(8, 1, 1, 7)
    assert a.passed
    assert json.dumps(a.to_json()) == json.dumps(b.to_json())
    assert {"t_star", "c_k_t_star", "tsp_margin"} <= set(a.to_json()["directions"][0])


def test_qk_instance_cap():
    from tsplift.config import set_qk_cap
    from tsplift.errors import ResourceCapError

    with pytest.raises(ResourceCapError):
        qk_membership(8, 2, barycenter(8))
    set_qk_cap(5)
    try:
        with pytest.raises(ResourceCapError):
            qk_membership(6, 1, barycenter(6))
    finally:
        set_qk_cap(None)
    assert qk_membership(6, 1, barycenter(6)).status == INSIDE
