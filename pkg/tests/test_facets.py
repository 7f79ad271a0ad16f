from fractions import Fraction as F
from math import comb

import pytest

from tsplift.combinatorics import Cycle, enumerate_cycles
from tsplift.errors import PreconditionError
from tsplift.facets import (
    SUBTOUR,
    FacetCertificate,
    all_certificates,
    cut_size,
    facet_f_ij,
    facet_f_ij_prime,
    facet_h_U,
    h_U_terms,
    verify_facet,
    zero_set,
)
from tsplift.funcspace import cycle_incidence, evaluate_extension


def brute_cut(x, U):
    order = x.order
    return sum((order[i] in U) != (order[(i + 1) % len(order)] in U) for i in range(len(order)))


def test_lower_edge_zero_set():
    cert = facet_f_ij(5, 1, 2)
    zs = zero_set(cert.function())
    assert len(zs) == 6
    assert all((1, 2) not in x.edges for x in zs)
    assert verify_facet(cert, 5, 1)


def test_lower_edge_extension():
    n = 7
    cert = facet_f_ij(n, 2, 5)
    for x in enumerate_cycles(n):
        assert evaluate_extension(cert.extension, cycle_incidence(x)) == F(n - 1, 2) * ((2, 5) in x.edges)


def test_upper_edge_on_six_vertices():
    cert = facet_f_ij_prime(6, 1, 2)
    f = cert.function()
    nonzero = {v for v in f.values if v}
    assert len(nonzero) == 1
    for x, v in zip(enumerate_cycles(6), f.values):
        assert (v != 0) == ((1, 2) not in x.edges)
        if v:
            # exactly one cherry of the mixture sits inside x
            assert sum(g.edges <= x.edges for g, _ in cert.combination) == 1
    assert verify_facet(cert, 6, 1)


def test_upper_edge_constant():
    assert facet_f_ij_prime(8, 3, 7).constant == F(7, 5)


def test_upper_edge_needs_five_vertices():
    with pytest.raises(PreconditionError):
        facet_f_ij_prime(4, 1, 2)


def test_subtour_pair():
    cert = facet_h_U(8, 2, (1, 2))
    f = cert.function()
    for x, v in zip(enumerate_cycles(8), f.values):
        assert v == cert.constant * (brute_cut(x, {1, 2}) - 2)
    assert verify_facet(cert, 8, 2)


def test_subtour_tight_and_cut():
    cert = facet_h_U(8, 2, (1, 2, 3))
    f = cert.function()
    tight = Cycle((1, 2, 3, 4, 5, 6, 7, 8))
    assert f[tight] == 0
    x = Cycle((1, 4, 2, 5, 3, 6, 7, 8))
    assert cut_size(x, {1, 2, 3}) == brute_cut(x, {1, 2, 3}) == 6
    assert f[x] == 4 * cert.constant


def test_subtour_constant():
    assert facet_h_U(8, 2, (1, 2, 3, 4)).constant == F(7, 18)


def test_perturbed_upper_weights_fail():
    cert = facet_f_ij_prime(6, 1, 2)
    comb_ = list(cert.combination)
    (g0, w0), (g1, w1) = comb_[0], comb_[1]
    comb_[0], comb_[1] = (g0, w0 + F(1, 100)), (g1, w1 - F(1, 100))
    bad = FacetCertificate(cert.kind, cert.params, comb_, cert.extension, cert.constant, 6)
    assert not verify_facet(bad, 6, 1)


def test_wrong_subtour_weights_fail():
    U = (1, 2, 3)
    terms = h_U_terms(8, U)
    # flatten the level weights: the value identity breaks on some tight cycle
    flat = [(g, F(1, len(terms))) for g, _ in terms]
    cert = facet_h_U(8, 2, U)
    bad = FacetCertificate(SUBTOUR, cert.params, flat, cert.extension, cert.constant, 8)
    assert not verify_facet(bad, 8, 2)


def test_generators_outside_pk_fail():
    cert = facet_h_U(8, 2, (1, 2, 3, 4))
    assert verify_facet(cert, 8, 2)
    assert not verify_facet(cert, 8, 1)


def test_subset_bounds():
    with pytest.raises(PreconditionError):
        facet_h_U(8, 1, (1, 2, 3))
    with pytest.raises(PreconditionError):
        facet_h_U(8, 2, (1,))
    with pytest.raises(PreconditionError):
        facet_h_U(5, 2, (1, 2, 3, 4))
    with pytest.raises(PreconditionError):
        all_certificates(8, 1, 4)


def test_certificate_count_small():
    certs = all_certificates(6, 1, 2)
    assert len(certs) == 6 * 5 + comb(6, 2)
    assert all(verify_facet(c, 6, 1) for c in certs)


def test_certificate_json():
    data = facet_h_U(6, 1, (2, 5)).to_json()
    assert data["kind"] == SUBTOUR and data["params"] == {"U": [2, 5]}
    assert sum(F(g["weight"]) for g in data["generators"]) == 1
