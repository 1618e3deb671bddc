import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from obsmorph.drawing import Drawing, PlaneGraph
from obsmorph.generators import random_step
from obsmorph.verify import (Morph, MorphError, confirm_violation, sample_check, verify_linear_step,
                             verify_morph)

seeds = st.integers(0, 10 ** 9)


def edge_and_vertex(vertex_pos):
    g = PlaneGraph(3, ((0, 1),), ((1,), (0,), ()), (0, 1))
    return Drawing(g, ((0, 0), (2, 0), vertex_pos))


def test_identity_step_is_ok():
    d = edge_and_vertex((1, 1))
    assert verify_linear_step(d, d) is None


def test_vertex_sweeps_through_edge():
    a, b = edge_and_vertex((1, 1)), edge_and_vertex((1, -1))
    v = verify_linear_step(a, b)
    assert v.kind == "vertex-on-edge" and v.time == Fraction(1, 2)
    assert confirm_violation(v, a, b)


def test_edge_sweeps_over_obstacle():
    g = PlaneGraph(2, ((0, 1),), ((1,), (0,)), (0, 1))
    a, b = Drawing(g, ((0, 1), (2, 1))), Drawing(g, ((0, -1), (2, -1)))
    v = verify_linear_step(a, b, [(1, 0)])
    assert v.kind == "obstacle-on-edge" and v.time == Fraction(1, 2)
    assert confirm_violation(v, a, b, [(1, 0)])


def test_middle_drawing_on_obstacle():
    a = edge_and_vertex((1, 1))
    m = Morph(a.graph, (a, edge_and_vertex((5, 5)), edge_and_vertex((1, 2))))
    v = verify_morph(m, [(5, 5)])
    assert v.kind == "obstacle-on-vertex" and v.step == 0 and v.time == 1
    assert confirm_violation(v, m.drawings[0], m.drawings[1], [(5, 5)])


def test_irrational_contact_time_is_exact():
    # the vertex meets the rotating edge's line when t^2 = 1/2
    g = PlaneGraph(3, ((0, 1),), ((1,), (0,), ()), (0, 1))
    a = Drawing(g, ((-4, 0), (4, 0), (0, -1)))
    b = Drawing(g, ((-4, 0), (4, 0), (0, 1)))
    v = verify_linear_step(a, b)
    assert v.time == Fraction(1, 2) and confirm_violation(v, a, b)


def test_morph_construction_errors():
    a = edge_and_vertex((1, 1))
    other = Drawing(PlaneGraph(1, (), ((),)), ((0, 0),))
    with pytest.raises(MorphError):
        Morph(a.graph, (a, other))
    with pytest.raises(MorphError):
        Morph(a.graph, (a, edge_and_vertex((1, 2)))).then(Morph(a.graph, (edge_and_vertex((1, 3)),)))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_time_reversal(seed):
    a, b, obs = random_step(random.Random(seed))
    assert (verify_linear_step(a, b, obs) is None) == (verify_linear_step(b, a, obs) is None)


@settings(max_examples=60, deadline=None)
@given(seeds, st.data())
def test_removing_obstacles_keeps_ok(seed, data):
    a, b, obs = random_step(random.Random(seed))
    if verify_linear_step(a, b, obs) is None and obs:
        keep = data.draw(st.lists(st.sampled_from(obs), unique=True))
        assert verify_linear_step(a, b, keep) is None


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_witnesses_confirm_and_sampling_agrees(seed):
    a, b, obs = random_step(random.Random(seed))
    v = verify_linear_step(a, b, obs)
    if v is None:
        assert sample_check(a, b, obs, 500) is None
    else:
        assert 0 <= v.time <= 1
        assert confirm_violation(v, a, b, obs)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 3))
def test_concatenation(seed, k):
    rng = random.Random(seed)
    a, b, obs = random_step(rng)
    ds = [a] + [a.replace({v: (p[0] + rng.randint(-2, 2), p[1] + rng.randint(-2, 2))
                           for v, p in enumerate(a.pos)}) for _ in range(k)]
    ok_steps = all(verify_linear_step(x, y, obs) is None for x, y in zip(ds, ds[1:]))
    assert (verify_morph(Morph(a.graph, tuple(ds)), obs) is None) == ok_steps


def test_wide_window_is_found_by_sampling():
    # the free vertex slides along the edge's line and sits on the edge for half the step
    a, b = edge_and_vertex((-1, 0)), edge_and_vertex((3, 0))
    hit = sample_check(a, b, (), 10_000)
    assert hit is not None and hit.kind == "vertex-on-edge"
    assert verify_linear_step(a, b) is not None
    assert sample_check(a, a, (), 10_000) is None
