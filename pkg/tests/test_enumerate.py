from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lcykit.cli import sample_points
from lcykit.config import validate
from lcykit.enumerate import (
    enumerate_lcy,
    raw_cycles,
    smoothing_closure,
    stability_check,
)
from lcykit.lattice import LatticeError, Space, SymplecticClass, area

F = Fraction
MINIMAL = [SymplecticClass.blowup([]), SymplecticClass.quadric(F(1)), SymplecticClass.quadric(F(5, 2)),
           SymplecticClass.blowup([F(1, 3)]), SymplecticClass.blowup([F(3, 4)])]


def _arg(w):
    return w.space if w.space.is_quadric else w.l


def test_cp2_list():
    r = enumerate_lcy(0, SymplecticClass.blowup([]))
    assert sorted(str(c) for c in r.configs) == ["(3H)", "(H, 2H)", "(H, H, H)"]
    assert r.all == r.configs and r.toric_count == 1


@pytest.mark.parametrize("w", MINIMAL, ids=str)
def test_family_lists_agree_with_search(w):
    a = enumerate_lcy(_arg(w), w, method="families")
    b = enumerate_lcy(_arg(w), w, method="search")
    assert a.keys() == b.keys()


@given(st.sampled_from(sample_points(3, 8)))
def test_every_config_is_valid_and_positive(w):
    r = enumerate_lcy(3, w)
    assert r.elliptic is not None
    for c in r.configs:
        ok, msgs = validate(c, w)
        assert ok, msgs
        assert all(area(w, a) > 0 for a in c.classes)


@given(st.sampled_from(sample_points(3, 8)))
def test_toric_only_matches_filtered_full(w):
    full = enumerate_lcy(3, w)
    tor = enumerate_lcy(3, w, toric_only=True)
    assert [c.key() for c in tor.toric] == [c.key() for c in full.toric]


def test_workers_do_not_change_result():
    w = SymplecticClass.blowup([F(2, 5), F(1, 5), F(3, 20), F(1, 10)])
    assert raw_cycles(w, workers=1) == raw_cycles(w, workers=3)


def test_wall_quotient_identifies_orbits():
    w = SymplecticClass.blowup([F(1, 3), F(1, 3)])
    r = enumerate_lcy(2, w)
    assert r.generators
    assert r.count < r.raw_count
    assert not r.reflection_misses


def test_non_nef_class_is_empty(monkeypatch):
    monkeypatch.setenv("LCY_MAX_L", "10")
    w = SymplecticClass.blowup([F(1, 3)] * 10)
    r = enumerate_lcy(10, w)
    assert r.count == 0 and r.elliptic is None


def test_cap_enforced(monkeypatch):
    monkeypatch.setenv("LCY_MAX_L", "2")
    with pytest.raises(LatticeError):
        enumerate_lcy(3, SymplecticClass.blowup([F(1, 2), F(1, 4), F(1, 8)]))


def test_smoothing_closure_contains_inputs():
    w = SymplecticClass.blowup([F(2, 5), F(1, 5)])
    r = enumerate_lcy(2, w)
    closure = smoothing_closure(r.toric)
    assert {c.canonical() for c in r.toric} <= closure
    assert len(closure) == r.count


def test_stability_on_same_chamber():
    a = SymplecticClass.blowup([F(2, 5), F(1, 5)])
    b = SymplecticClass.blowup([F(41, 100), F(19, 100)])
    assert stability_check(a, b)


def test_space_mismatch():
    with pytest.raises(LatticeError):
        enumerate_lcy(Space.blowup(1), SymplecticClass.blowup([F(1, 2), F(1, 4)]))
