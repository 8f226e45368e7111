from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lcykit.lattice import (
    E,
    H,
    HomologyClass,
    LatticeError,
    Space,
    SymplecticClass,
    area,
    c1,
    ceil_fraction,
    dot,
    format_rational,
    genus,
    intersect,
    is_c1_nef,
    is_interior,
    is_reduced,
    is_restrictive,
    max_l,
    parse_rational,
    reflect,
    reflection_generators,
)

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=60)
coeff_lists = st.lists(st.integers(-6, 6), min_size=4, max_size=4)
M3 = Space.blowup(3)


def test_parse_rational_accepts_integers_and_ratios():
    assert parse_rational("3") == 3
    assert parse_rational("-2/6") == Fraction(-1, 3)


@pytest.mark.parametrize("text", ["0.4", "1e3", "1/0", "", "a/b"])
def test_parse_rational_rejects(text):
    with pytest.raises(LatticeError):
        parse_rational(text)


@given(fractions)
def test_format_parse_round_trip(x):
    assert parse_rational(format_rational(x)) == x


@given(fractions)
def test_ceil_fraction_is_least_integer_above(x):
    c = ceil_fraction(x)
    assert c - 1 < x <= c


@given(coeff_lists, coeff_lists)
def test_pairing_symmetric(u, v):
    assert dot(M3, u, v) == dot(M3, v, u)


def test_basic_intersections_and_genus():
    assert intersect(H(M3), H(M3)) == 1
    assert intersect(E(M3, 1), E(M3, 1)) == -1
    assert genus(c1(M3)) == 1
    assert genus(H(M3) - E(M3, 1)) == 0
    q = Space.quadric()
    assert dot(q, (1, 0), (0, 1)) == 1 and dot(q, (1, 1), (1, 1)) == 2


@given(coeff_lists)
def test_reflection_is_an_involution_and_isometry(v):
    a = HomologyClass(M3, tuple(v))
    m = H(M3) - E(M3, 1) - E(M3, 2) - E(M3, 3)
    r = reflect(a, m)
    assert reflect(r, m) == a
    assert intersect(r, r) == intersect(a, a)
    assert intersect(r, c1(M3)) == intersect(a, c1(M3))


def test_area_convention():
    w = SymplecticClass.blowup([Fraction(1, 2), Fraction(1, 3)])
    assert area(w, H(w.space)) == 1
    assert area(w, E(w.space, 2)) == Fraction(1, 3)
    assert w.total_area() == 3 - Fraction(5, 6)


def test_cone_predicates():
    w = SymplecticClass.blowup([Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)])
    assert is_reduced(w) and is_interior(w) and is_restrictive(w) and is_c1_nef(w)
    wall = SymplecticClass.blowup([Fraction(1, 3)] * 3)
    assert is_reduced(wall) and not is_interior(wall)
    assert len(reflection_generators(wall)) == 4
    assert not is_reduced(SymplecticClass.blowup([Fraction(1, 4), Fraction(1, 3)]))


def test_max_l_env(monkeypatch):
    monkeypatch.setenv("LCY_MAX_L", "7")
    assert max_l() == 7
