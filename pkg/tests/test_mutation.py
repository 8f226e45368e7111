from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lcykit.delzant import DelzantPolygon, boundary_data, build_polygon, polygon_of
from lcykit.lattice import SymplecticClass
from lcykit.mutation import (
    MutationRejected,
    data_key,
    is_connected,
    mutation_graph,
    mutation_path,
    realization_report,
    reversal_failures,
    shear_matrix,
    toric_mutate,
)

F = Fraction
W2 = SymplecticClass.blowup([F(2, 5), F(1, 5)])
W3 = SymplecticClass.blowup([F(6, 15), F(5, 15), F(4, 15)])
W4 = SymplecticClass.blowup([F(2, 5), F(1, 5), F(3, 20), F(1, 10)])
G4 = mutation_graph(4, W4)
UNIMODULAR = [((1, 0), (0, 1)), ((0, -1), (1, 0)), ((1, 1), (0, 1)), ((1, 0), (-2, 1)), ((2, 1), (1, 1))]


def test_rectangle_to_trapezoid():
    p = DelzantPolygon(((0, 0), (2, 0), (2, 1), (0, 1)))
    q, move = toric_mutate(p, 1)
    assert move.direction == (-1, 1)
    assert set(q.vertices) == {(0, 0), (3, 0), (1, 1), (0, 1)}
    assert q.area() == p.area()


def test_ray_through_vertex_is_rejected():
    p = DelzantPolygon(((0, 0), (1, 0), (1, 1), (0, 1)))
    with pytest.raises(MutationRejected, match="forbidden"):
        toric_mutate(p, 0)


@pytest.mark.parametrize("w", [(1, 0), (1, 1), (2, -1), (-3, 2)])
def test_shear_is_unimodular_and_fixes_direction(w):
    for sign in (1, -1):
        (a, b), (c, d) = shear_matrix(w, sign)
        assert a * d - b * c == 1
        assert (a * w[0] + b * w[1], c * w[0] + d * w[1]) == w


def test_cp2_triangle_has_no_mutation():
    p = build_polygon((1, 1, 1), (1, 1, 1))
    for v in range(3):
        with pytest.raises(MutationRejected):
            toric_mutate(p, v)


@pytest.mark.parametrize("w, nodes", [(SymplecticClass.quadric(F(2)), 2), (W2, 2), (W3, 4)], ids=str)
def test_example_graphs(w, nodes):
    g = mutation_graph(w.space if w.space.is_quadric else w.l, w)
    assert len(g.nodes) == nodes and is_connected(g)


def test_graph_moves_are_reversible():
    assert not reversal_failures(G4)


def test_nodes_have_distinct_data():
    keys = [data_key(sa) for sa in G4.data]
    assert len(set(keys)) == len(keys)


@given(st.sampled_from(range(len(G4.nodes))), st.sampled_from(UNIMODULAR), st.integers(-4, 4), st.integers(0, 9))
def test_mutation_independent_of_placement(i, m, t, r):
    p = polygon_of(G4.nodes[i], W4)
    q = p.transform(m, (F(t, 3), F(-t, 5))).rotate_start(r % p.k)
    direct = set()
    for v in range(p.k):
        try:
            direct.add(data_key(boundary_data(toric_mutate(p, v)[0])))
        except MutationRejected:
            pass
    moved = set()
    for v in range(q.k):
        try:
            moved.add(data_key(boundary_data(toric_mutate(q, v)[0])))
        except MutationRejected:
            pass
    assert direct == moved


@given(st.sampled_from(range(len(G4.nodes))), st.integers(0, 9))
def test_accepted_mutations_preserve_area(i, v):
    p = polygon_of(G4.nodes[i], W4)
    try:
        q, _ = toric_mutate(p, v)
    except MutationRejected:
        return
    assert q.area() == p.area()


def test_paths_and_dot():
    path = mutation_path(G4, 0, len(G4.nodes) - 1)
    assert path
    assert G4.to_dot().startswith("graph mutations {")


def test_worker_count_does_not_change_graph():
    assert mutation_graph(4, W4, workers=2).edges() == G4.edges()


def test_realization_reports():
    assert not realization_report(0, SymplecticClass.blowup([])).uncovered
    assert not realization_report(2, W2).uncovered
    rep = realization_report(3, W3)
    assert rep.toric == 4 and rep.uncovered
