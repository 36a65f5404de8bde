import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cubicsod.mukai import (
    BData,
    CounterexampleFound,
    CycleClass,
    EulerLattice,
    b0_summands,
    b_invariance,
    chi_B0,
    chi_B0_bott,
    chi_P2,
    delta_parity,
    gram_twisted,
    gram_untwisted,
    hecke_parity,
    iter_pairs,
    null_vectors,
    pair_search,
    pair_search_naive,
    parity_certificate,
    search_report,
)

HALF = Fraction(1, 2)


def brute_nulls(lat, n):
    r = range(-n, n + 1)
    return [v for v in itertools.product(r, repeat=3) if lat.chi(v, v) == 0]


# ---- Gram matrices ----------------------------------------------------------


def test_gram_twisted_half_half():
    assert [list(r) for r in gram_twisted(BData(HALF, HALF)).gram] == [[6, -1, 2], [-1, -2, 0], [2, 0, 0]]


def test_gram_twisted_other_square():
    assert [list(r) for r in gram_twisted(BData(HALF, Fraction(3, 2))).gram] == [[2, -1, 2], [-1, -2, 0], [2, 0, 0]]


@given(st.integers(-6, 6), st.integers(-6, 6))
def test_gram_symmetric_and_only_bh_entry_odd(bh2, bsq2):
    lat = gram_twisted(BData(Fraction(bh2, 2), Fraction(bsq2, 2)))
    m = lat.matrix
    assert (m == m.T).all()
    assert all(set(ij) == {0, 1} for ij in lat.odd_entries())


def test_non_half_integral_rejected():
    with pytest.raises(ValueError):
        BData(Fraction(1, 3), HALF)


def test_untwisted_pairing():
    lat = gram_untwisted()
    assert lat.chi((1, 0, 1), (1, 0, 1)) == 2
    assert lat.chi((1, 0, 1), (0, 0, 1)) == 1
    assert lat.chi((0, 0, 1), (0, 0, 1)) == 0


def test_non_symmetric_rejected():
    with pytest.raises(ValueError):
        EulerLattice(((0, 1, 0), (0, 0, 0), (0, 0, 0)), "twisted")


# ---- searches ---------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("lat", [gram_twisted(), gram_untwisted(), gram_twisted(BData(0, 0))], ids=["twisted", "untwisted", "b0"])
def test_search_agrees_with_double_loop(lat, n):
    assert pair_search(lat, n) == pair_search_naive(lat, n)
    assert pair_search(lat, n, prune=False) == pair_search_naive(lat, n)


@pytest.mark.parametrize("n", [0, 1, 4])
def test_null_vectors_match_brute_force(n):
    lat = gram_twisted()
    got = sorted(tuple(int(c) for c in v) for v in null_vectors(lat, n))
    assert got == sorted(brute_nulls(lat, n))


def test_twisted_box_25_has_no_pair():
    assert pair_search(gram_twisted(), 25) is None


def test_empty_box():
    assert pair_search(gram_untwisted(), 0) is None


def test_untwisted_pair_at_box_one():
    lat = gram_untwisted()
    pairs = list(iter_pairs(lat, 1))
    assert ((1, 0, 1), (0, 0, 1)) in pairs
    assert pairs[0] == pair_search(lat, 1)
    assert pairs == sorted(pairs)
    brute = sorted(
        (v1, v2) for v1 in itertools.product(range(-1, 2), repeat=3) for v2 in brute_nulls(lat, 1) if lat.chi(v1, v2) == 1
    )
    assert pairs == brute


def test_untwisted_box_two_finds_pair():
    assert pair_search(gram_untwisted(), 2) is not None


def test_parallel_search_matches_serial():
    lat = gram_untwisted()
    assert pair_search(lat, 3, workers=2) == pair_search(lat, 3)
    assert pair_search(gram_twisted(), 6, workers=2) is None


# ---- parity certificate -----------------------------------------------------


def test_parity_certificate_box_25():
    rep = parity_certificate(gram_twisted(), 25)
    assert rep.ok and rep.odd_y_count == 0 and rep.null_vector_count > 1


def test_parity_small_cases():
    lat = gram_twisted()
    assert lat.chi((0, 0, 1), (0, 0, 1)) == 0
    for z in range(-10, 11):
        assert lat.chi((1, 0, z), (1, 0, z)) == 6 + 4 * z != 0


def test_parity_needs_half_classes():
    with pytest.raises(ValueError):
        parity_certificate(gram_untwisted(), 2)
    with pytest.raises(ValueError):
        parity_certificate(gram_twisted(BData(0, 0)), 2)


def test_odd_null_vector_is_reported():
    # a lattice with the right tag but a broken Gram matrix: (0,1,0) is isotropic
    fake = EulerLattice(((6, -1, 2), (-1, 0, 0), (2, 0, 0)), "twisted", BData(HALF, HALF))
    with pytest.raises(CounterexampleFound):
        parity_certificate(fake, 1)


def test_search_report_shape():
    rep = search_report(gram_twisted(), 3)
    assert set(rep) == {"lattice", "box", "found", "null_vector_count", "parity_ok"}
    assert rep["found"] is False and rep["parity_ok"] is True
    rep = search_report(gram_untwisted(), 1)
    assert rep["found"] and rep["pair"] and rep["parity_ok"] is None


# ---- B-field invariants -----------------------------------------------------


def test_b_invariance_examples():
    b = BData(HALF, HALF)
    assert b_invariance(b, 3, 4) == (HALF, HALF)
    assert b_invariance(b, mode="half_h") == (HALF, HALF)
    assert b_invariance(BData(0, 0), 3, 4)[0] == 0


@given(st.integers(-10, 10), st.integers(-10, 10), st.integers(-10, 10))
def test_b_invariance_grid(uh, usq, two_bu):
    assert b_invariance(BData(HALF, HALF), uh, usq, two_bu=two_bu) == (HALF, HALF)
    assert b_invariance(BData(HALF, Fraction(3, 2)), uh, usq, two_bu=two_bu)[1] == HALF


def test_chi_b0():
    assert b0_summands() == (0, -1, -1, -1, -2, -2, -2, -3)
    assert chi_P2(-1) == chi_P2(-2) == 0
    assert chi_P2(0) + chi_P2(-3) == 2
    assert chi_B0() == 2 == chi_B0_bott()


def test_hecke_parity():
    assert hecke_parity(0, 3) == 1
    assert hecke_parity(1, 0) == 1
    assert hecke_parity(0, 2) == 0
    with pytest.raises(ValueError):
        hecke_parity(0, -1)


def test_delta_values():
    assert delta_parity(CycleClass(1, 0)) == -2
    assert delta_parity(CycleClass(0, 1)) == 2
    assert delta_parity(CycleClass(0, 0)) == 0


@given(st.integers(-100, 100), st.integers(-100, 100))
def test_delta_even(a, b):
    d = delta_parity(CycleClass(a, b))
    assert d == -2 * a + 2 * b and d % 2 == 0
