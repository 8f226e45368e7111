from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lcykit.delzant import (
    CF,
    IDENTITY,
    DelzantError,
    DelzantPolygon,
    boundary_data,
    build_polygon,
    cf_admissible,
    cf_eval,
    chop_corner,
    def_taut,
    expected_area,
    generating_set,
    gs_solve,
    in_c_set,
    intersection_matrix,
    is_delzant,
    monodromy,
    phi_map,
    phi_preimages,
    polygon_of,
    polygon_svg,
    same_boundary_data,
)
from lcykit.enumerate import enumerate_lcy
from lcykit.lattice import SymplecticClass

F = Fraction
W4 = SymplecticClass.blowup([F(2, 5), F(1, 5), F(3, 20), F(1, 10)])
TORIC4 = enumerate_lcy(4, W4, toric_only=True).toric
UNIMODULAR = [((1, 0), (0, 1)), ((0, -1), (1, 0)), ((1, 1), (0, 1)), ((1, 0), (-2, 1)), ((2, 1), (1, 1)), ((-1, 0), (0, 1))]


def test_standard_triangle():
    p = build_polygon((1, 1, 1), (1, 1, 1))
    assert p.vertices == ((0, 0), (0, -1), (1, -1)) or set(p.vertices) == {(0, 0), (0, -1), (1, -1)}
    assert p.area() == F(1, 2)
    assert boundary_data(p) == ((1, 1, 1), (1, 1, 1))


def test_unit_square():
    p = DelzantPolygon(((0, 0), (1, 0), (1, 1), (0, 1)))
    assert boundary_data(p) == ((0, 0, 0, 0), (1, 1, 1, 1))


def test_non_toric_data_rejected():
    with pytest.raises(DelzantError):
        build_polygon((1, 1, 2), (1, 1, 1))
    with pytest.raises(DelzantError):
        generating_set((1, 1))
    assert not is_delzant(DelzantPolygon(((0, 0), (2, 0), (0, 1))))


@given(st.sampled_from(TORIC4), st.sampled_from(UNIMODULAR), st.integers(-3, 3), st.integers(-3, 3),
       st.integers(0, 10))
def test_boundary_data_is_affine_invariant(c, m, tx, ty, r):
    p = polygon_of(c, W4)
    q = p.transform(m, (F(tx, 2), F(ty, 3))).rotate_start(r % p.k)
    assert is_delzant(q)
    assert same_boundary_data(boundary_data(p), boundary_data(q))
    assert q.area() == p.area() == expected_area(W4)


@given(st.sampled_from(TORIC4))
def test_monodromy_trivial_on_toric_sequences(c):
    s, _ = boundary_data(polygon_of(c, W4))
    assert monodromy(s) == IDENTITY


@given(st.sampled_from(TORIC4), st.integers(0, 10))
def test_corner_chop_is_toric_blow_up(c, i):
    p = polygon_of(c, W4)
    i %= p.k
    s, a = boundary_data(p)
    eps = min(a[i], a[(i + 1) % p.k]) / 3
    q = chop_corner(p, i, eps)
    s2, _ = boundary_data(q)
    assert len(s2) == len(s) + 1 and sorted(s2).count(-1) >= 1
    assert sum(s2) == sum(s) - 3
    assert q.area() == p.area() - eps * eps / 2


@given(st.sampled_from(TORIC4))
def test_gs_positive(c):
    rep = gs_solve(c, W4)
    assert rep.solvable and rep.positive


def test_gs_lp_route_agrees_on_degenerate_matrix():
    # the square has a singular intersection matrix; the LP route must still
    # find a positive solution
    w = SymplecticClass.quadric(F(2))
    c = enumerate_lcy(w.space, w, toric_only=True).toric[0]
    assert intersection_matrix(c)
    assert gs_solve(c, w, use_polygon=False).positive
    assert gs_solve(c, w, use_polygon=True).positive


def test_continued_fractions():
    assert cf_eval([2, 2]) == F(3, 2)
    assert cf_eval([1, 1]) == 0
    assert cf_eval([1, 1, 1]).infinite
    assert cf_eval([3]) == CF(3, 1)
    assert cf_admissible([1, 2, 2])
    assert not cf_admissible([1, 1, 1])


@given(st.lists(st.integers(2, 6), min_size=1, max_size=6))
def test_cf_of_large_entries_exceeds_one(b):
    assert cf_eval(b).value() > 1


def test_c_set_and_phi():
    assert in_c_set((1, 1, 1)) and not in_c_set((1, 1, 0))
    assert phi_map((2, 1, 3, 2, 1, 3), (1, 2, 0, 0, 2, 0)) == (1, -2, -3, -3, -2, -3, -2)
    assert phi_map((3, 1, 3, 1, 3, 1), (0, 2, 0, 1, 0, 2)) == (1, -2, -3, -3, -2, -3, -2)


@given(st.lists(st.integers(2, 4), min_size=2, max_size=5))
def test_preimages_map_back(p):
    seq = (1, 1 - p[0]) + tuple(-x for x in p[1:-1]) + (1 - p[-1],)
    for n, a in phi_preimages(seq):
        assert phi_map(n, a) == seq


def test_def_taut_example():
    r = def_taut((1, -2, -3, -3, -2, -3, -2))
    assert r.taut is False and len(r.preimages) >= 2


@pytest.mark.parametrize("seq", [(1, 1), (1, 3), (-1, -2), (0, 4), (0, -5), (1, 1, 1), (1, 1, -3), (3, 1)])
def test_always_taut_families(seq):
    assert def_taut(seq).taut is True


def test_undecided_when_no_rule():
    assert def_taut((5, 5)).taut is None


def test_svg_is_static_markup():
    p = build_polygon((1, 1, 1), (1, 1, 1))
    text = polygon_svg(p, (1, 1, 1), ("1", "1", "1"))
    assert text.startswith("<svg") and "viewBox" in text and "<polygon" in text
