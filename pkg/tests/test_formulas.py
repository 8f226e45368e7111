from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lcykit.cli import sample_points
from lcykit.enumerate import enumerate_lcy
from lcykit.formulas import (
    FFunction,
    GFunction,
    a_pow_g,
    all_f,
    all_g,
    compositions,
    count_m2_by_region,
    count_m2_general,
    count_m2_toric,
    count_m3_toric,
    count_minimal,
    kkp_upper_bound,
    lemma_relation_check,
    lemma_relation_sides,
    m2_region,
    m3_region,
    phi,
    psi,
    restrictive_coefficient,
    restrictive_count_general,
    restrictive_count_toric,
    toric_region_member,
)
from lcykit.lattice import LatticeError, Space, SymplecticClass

F = Fraction
M2_GRID = sample_points(2, 20)
M3_GRID = sample_points(3, 12)


def test_function_domains():
    with pytest.raises(ValueError):
        GFunction(3, (0,))
    with pytest.raises(ValueError):
        FFunction((2, 4))
    assert len(all_g(4)) == 8 and len(all_f(4, 2)) == 8
    assert [len(list(compositions(n))) for n in range(5)] == [1, 1, 2, 4, 8]


def test_phi_by_hand():
    # g = 0 contributes f(i-1) - (step + 1); g = 1 contributes step + 1
    f = FFunction((2, 3))
    assert phi(f, GFunction(2, (0,))) == 0
    assert phi(f, GFunction(2, (1,))) == 2
    assert phi(FFunction((2, 2)), GFunction(2, (0,))) == 1


def test_lemma_relation_frozen_values():
    assert lemma_relation_sides(2, 2) == (4, 4)
    assert lemma_relation_sides(3, 2) == (6, 6)
    assert lemma_relation_sides(2, 3) == (2 * (2 * 3 + 2 * 2), 2 * (2 * 3 + 2 * 2))


@pytest.mark.parametrize("a", [2, 3, 4])
@pytest.mark.parametrize("l", [2, 3, 4, 5, 6])
def test_lemma_relation(a, l):
    assert lemma_relation_check(a, l)


def test_lemma_relation_degenerate_length_one():
    # with l = 1 the left side is a single term and the factor 2 breaks it
    assert lemma_relation_sides(2, 1) == (1, 2)


def test_psi_is_plain_ceiling():
    w = SymplecticClass.blowup([F(1, 2), F(1, 4), F(1, 8)])
    assert psi(w, GFunction(3, (0, 0))) == 1
    assert psi(w, GFunction(3, (1, 1))) == 1
    w = SymplecticClass.blowup([F(1, 4), F(1, 4) - F(1, 100), F(1, 100)])
    assert psi(w, GFunction(3, (1, 1))) == 0


def test_minimal_counts():
    assert count_minimal(Space.blowup(0)) == 3
    assert count_minimal(Space.quadric(), SymplecticClass.quadric(F(3, 2))) == 9
    assert count_minimal(Space.blowup(1), SymplecticClass.blowup([F(2, 3)])) == 10
    with pytest.raises(LatticeError):
        count_minimal(Space.blowup(2))


def test_m2_labels():
    assert str(m2_region(F(1, 3), F(1, 3))) == "OM"
    assert str(m2_region(F(2, 5), F(1, 5))) == "Q0Q1P1"
    assert str(m2_region(F(3, 5), F(3, 10))) == "P1P2Q1"
    assert count_m2_general(F(2, 5), F(1, 5)) == 26


@given(st.sampled_from(M2_GRID))
def test_m2_formula_against_enumerator(w):
    r = enumerate_lcy(2, w)
    assert r.count == count_m2_general(*w.delta)
    assert r.toric_count == count_m2_toric(*w.delta)
    lab = m2_region(*w.delta)
    assert count_m2_by_region(lab) == (r.count, r.toric_count)


@given(st.sampled_from(M3_GRID))
def test_m3_toric_against_enumerator(w):
    r = enumerate_lcy(3, w, toric_only=True)
    assert r.toric_count == count_m3_toric(*w.delta) == m3_region(*w.delta).value


def test_m3_example_point():
    lab = m3_region(F(1, 2), F(1, 4), F(1, 8))
    assert (lab.region, lab.value) == (2, 10)
    assert m3_region(F(6, 15), F(5, 15), F(4, 15)).value == 4


def test_restrictive_coefficient_matches_sum():
    for g in all_g(3):
        twice = 2 + a_pow_g(2, g) + a_pow_g(4, g) + 2 * a_pow_g(3, g)
        assert restrictive_coefficient(g) * 2 == twice


def test_restrictive_flags():
    w = SymplecticClass.blowup([F(1, 2), F(1, 4), F(1, 8)])
    assert restrictive_count_general(w).flag == "exact"
    w = SymplecticClass.blowup([F(2, 5), F(1, 5), F(3, 20), F(1, 10)])
    assert restrictive_count_toric(w).flag == "upper_bound"


def test_kkp_bound_value():
    assert kkp_upper_bound(3, F(6, 15), F(5, 15)) == 10
    assert kkp_upper_bound(2, F(2, 5), F(1, 5)) == 2


def test_toric_region_predicate():
    assert toric_region_member(3, SymplecticClass.blowup([F(1, 3)] * 3))
    assert not toric_region_member(4, SymplecticClass.blowup([F(1, 5)] * 4))
    assert not toric_region_member(5, SymplecticClass.blowup([F(1, 2)] + [F(1, 4)] * 4))
    assert toric_region_member(5, SymplecticClass.blowup([F(2, 5), F(1, 5), F(3, 20), F(1, 10), F(1, 20)]))
