from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lcykit.config import (
    ConfigError,
    CyclicConfig,
    canonical_tuple,
    charge,
    dihedral_images,
    germ,
    is_toric,
    non_toric_blow_up,
    reduce_once,
    self_intersection_seq,
    smoothing,
    toric_blow_up,
    validate,
)
from lcykit.enumerate import enumerate_lcy
from lcykit.lattice import Space, SymplecticClass

W3 = SymplecticClass.blowup([Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)])
RES3 = enumerate_lcy(3, W3)
TORIC3 = RES3.toric
ALL3 = RES3.configs


@given(st.lists(st.integers(0, 9), min_size=1, max_size=7), st.integers(0, 20), st.booleans())
def test_canonical_tuple_is_dihedral_invariant(items, r, flip):
    k = len(items)
    rot = items[r % k:] + items[:r % k]
    if flip:
        rot = rot[::-1]
    assert canonical_tuple(rot) == canonical_tuple(items)
    assert canonical_tuple(items) in dihedral_images(items)


def test_cp2_triangle():
    c = CyclicConfig.of(Space.blowup(0), [(1,), (1,), (1,)])
    ok, msgs = validate(c, SymplecticClass.blowup([]))
    assert ok, msgs
    assert is_toric(c) and charge(c) == 0
    assert self_intersection_seq(c) == [1, 1, 1]


def test_bad_pattern_reported():
    c = CyclicConfig.of(Space.blowup(0), [(1,), (1,)])
    ok, msgs = validate(c)
    assert not ok and msgs


@given(st.sampled_from(ALL3), st.integers(0, 10))
def test_smoothing_keeps_validity(c, i):
    if c.k < 2:
        return
    s = smoothing(c, i % c.k)
    ok, msgs = validate(s, W3)
    assert ok, msgs
    assert s.total() == c.total() and s.k == c.k - 1


@given(st.sampled_from(TORIC3), st.integers(0, 10))
def test_toric_blow_up_keeps_charge_zero(c, i):
    b = toric_blow_up(c, i % c.k)
    assert b.k == c.k + 1
    ok, msgs = validate(b)
    assert ok, msgs
    assert charge(b) == 0


@given(st.sampled_from(TORIC3), st.integers(0, 10))
def test_non_toric_blow_up_raises_charge(c, i):
    b = non_toric_blow_up(c, i % c.k)
    assert b.k == c.k and charge(b) == charge(c) + 1


@given(st.sampled_from(ALL3))
def test_germ_terminates_on_m1_or_terminal_pair(c):
    g, gw, cases = germ(c, W3)
    assert cases
    assert g.space.l <= 1 or cases[-1] == "c"
    if gw is not None and g.space.l <= 1 and cases[-1] != "c":
        ok, msgs = validate(g, gw)
        assert ok, msgs


def test_reduce_once_needs_blowups():
    with pytest.raises(ConfigError):
        reduce_once(CyclicConfig.of(Space.blowup(0), [(1,), (1,), (1,)]))


def test_json_round_trip():
    c = TORIC3[0]
    assert CyclicConfig.from_json(c.to_json()) == c
