import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from obsmorph.drawing import (Drawing, GraphError, Instance, PlaneGraph, PointOnDrawing,
                              check_necessary_compatibility, cycle_graph, free_vertices, is_shifted_version,
                              locate_point, locate_points, shifted, validate_drawing)
from obsmorph.generators import random_forest_drawings, random_point, random_shift_instance

SQUARE = [(0, 0), (4, 0), (4, 4), (0, 4)]


def square_with_diagonal():
    g = PlaneGraph.from_coordinates(4, ((0, 1), (1, 2), (2, 3), (0, 3), (0, 2)), SQUARE)
    return Drawing(g, tuple(SQUARE))


def kinds(d):
    return {i.kind for i in validate_drawing(d)}


def test_faces_of_square_with_diagonal():
    d = square_with_diagonal()
    assert len(d.graph.faces) == 3
    assert validate_drawing(d) == []
    assert sorted(len(f.darts) for f in d.graph.faces) == [3, 3, 4]


def test_euler_formula_on_random_forests():
    rng = random.Random(1)
    for _ in range(10):
        g, d, _ = random_forest_drawings(rng, 12)
        # one boundary walk per component that has an edge
        assert len(g.faces) == sum(1 for c in g.components if len(c) > 1)
        assert validate_drawing(d) == []


def test_crossing_and_coincidence_are_reported():
    g = PlaneGraph(4, ((0, 2), (1, 3)), ((2,), (3,), (0,), (1,)), (0, 2))
    assert "edge-crossing" in kinds(Drawing(g, ((0, 0), (4, 0), (4, 4), (0, 4))))
    assert "vertex-coincidence" in kinds(Drawing(g, ((0, 0), (0, 0), (4, 4), (0, 4))))


def test_vertex_on_edge_and_rotation_mismatch():
    g = PlaneGraph(3, ((0, 1),), ((1,), (0,), ()), (0, 1))
    assert "vertex-on-edge" in kinds(Drawing(g, ((0, 0), (4, 0), (2, 0))))
    d = square_with_diagonal()
    rot = list(d.graph.rotation)
    rot[0] = tuple(reversed(rot[0]))
    bad = PlaneGraph(4, d.graph.edges, tuple(rot), d.graph.outer)
    assert "rotation-mismatch" in kinds(Drawing(bad, d.pos))


def test_graph_construction_errors():
    with pytest.raises(GraphError, match="loop"):
        PlaneGraph(2, ((0, 0),), ((0,), ()))
    with pytest.raises(GraphError, match="multi-edge"):
        PlaneGraph(2, ((0, 1), (1, 0)), ((1,), (0,)))
    with pytest.raises(GraphError, match="rotation"):
        PlaneGraph(2, ((0, 1),), ((), (0,)))


def test_point_location():
    d = square_with_diagonal()
    inner = {locate_point(d, (3, 1)), locate_point(d, (1, 3))}
    assert len(inner) == 2 and d.graph.outer_face not in inner
    assert locate_point(d, (10, 10)) == d.graph.outer_face
    with pytest.raises(PointOnDrawing):
        locate_point(d, (2, 2))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_batched_location_agrees_with_exact(seed):
    rng = random.Random(seed)
    g, d, _, _, _ = random_shift_instance(rng, 6, 0)
    pts = [random_point(rng, 40, 4) for _ in range(40)]
    pts = [p for p in pts if p not in d.pos]
    try:
        batched = locate_points(d, pts)
    except PointOnDrawing:
        return
    assert batched == [locate_point(d, p) for p in pts]


def test_compatibility_detects_face_change():
    g = cycle_graph(4, SQUARE)
    a = Drawing(g, tuple(SQUARE))
    b = Drawing(g, tuple((x + 10, y) for x, y in SQUARE))
    assert check_necessary_compatibility(Instance(g, a, a, ((1, 1),))) == []
    assert [m.obstacle for m in check_necessary_compatibility(Instance(g, a, b, ((1, 1),)))] == [0]


def test_shift_helpers():
    g = cycle_graph(4, SQUARE)
    d = Drawing(g, tuple(SQUARE))
    for k in range(1, 4):
        assert is_shifted_version(d, shifted(d, k)) == k
    assert is_shifted_version(d, d) is None


def test_free_vertices_are_straight_degree_two():
    pos = [(0, 0), (2, 0), (4, 0), (2, 3)]
    g = cycle_graph(4, pos)
    assert free_vertices(Drawing(g, tuple(pos))) == {1}


def test_positions_are_canonical_rationals():
    g = cycle_graph(3, SQUARE[:3])
    d = Drawing(g, ((Fraction(2, 2), 0), (4, 0), (4, 4)))
    assert type(d.pos[0][0]) is int
