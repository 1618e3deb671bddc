from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from obsmorph.drawing import Drawing, Instance, check_necessary_compatibility, free_vertices, locate_point, \
    obstacle_issues, validate_drawing
from obsmorph.exact import P
from obsmorph.fixtures import (FixtureError, c4_three_control, fixture_by_name, gen_blocked_c3_five,
                               gen_blocked_c4_three, gen_blocked_even_cycle, gen_fox_c8, probe_config)
from obsmorph.search import GridConfig, GridError, canonical_state_key, grid_search_morph
from obsmorph.triangle import strictly_inside
from obsmorph.verify import verify_morph


def assert_sound(inst):
    for d in (inst.start, inst.end):
        assert validate_drawing(d) == [] and obstacle_issues(d, inst.obstacles) == []
    assert check_necessary_compatibility(inst) == []


@pytest.mark.parametrize("name", ["c4-three", "c3-five", "even-cycle:6", "even-cycle:14", "fox:2"])
def test_fixtures_are_valid(name):
    assert_sound(fixture_by_name(name))


def test_c4_three_obstacle_split():
    inst = gen_blocked_c4_three()
    outer = inst.graph.outer_face
    faces = [locate_point(inst.start, o) for o in inst.obstacles]
    assert sorted(f == outer for f in faces) == [False, False, True]


def test_c3_five_has_three_inner_obstacles():
    inst = gen_blocked_c3_five()
    assert len(inst.obstacles) == 5
    assert sum(strictly_inside(inst.start.pos, o) for o in inst.obstacles) == 3


@pytest.mark.parametrize("n", [6, 8, 14])
def test_even_cycle_obstacle_counts(n):
    inst = gen_blocked_even_cycle(n)
    outer = inst.graph.outer_face
    inner = sum(locate_point(inst.start, o) != outer for o in inst.obstacles)
    assert (inner, len(inst.obstacles) - inner) == (2, 5)


@pytest.mark.parametrize("n", [4, 5, 7])
def test_even_cycle_rejects_bad_lengths(n):
    with pytest.raises(FixtureError):
        gen_blocked_even_cycle(n)


def test_fox_target_has_two_free_vertices_and_pitch_scaling():
    coarse, fine = gen_fox_c8(2), gen_fox_c8(1)
    assert len(free_vertices(coarse.end)) >= 2
    assert 3 <= len(fine.obstacles) / len(coarse.obstacles) <= 5


def test_unknown_fixture_name():
    with pytest.raises(FixtureError, match="unknown"):
        fixture_by_name("nope")


@given(st.lists(st.integers(0, 143), min_size=1, max_size=6, unique=True))
def test_state_keys_are_injective_per_order(idx):
    key = canonical_state_key(idx, 144)
    assert key == sum(i * 144 ** k for k, i in enumerate(idx))


def test_grid_config_indexing():
    cfg = GridConfig(P(-2, 0), Fraction(1, 2), 8, 4, (0,))
    for k in range(cfg.point_count):
        assert cfg.index_of(cfg.point(k)) == k
    assert cfg.index_of((Fraction(1, 3), 0)) is None
    with pytest.raises(GridError):
        GridConfig(P(0, 0), Fraction(1), 4, 4, tuple(range(7)))


def test_control_is_found_and_verified():
    inst = c4_three_control()
    res = grid_search_morph(inst, probe_config("c4-three-control", inst))
    assert res.found
    assert res.morph.first == inst.start and res.morph.last == inst.end
    assert verify_morph(res.morph, inst.obstacles) is None


def test_small_blocked_probe_exhausts():
    inst = gen_blocked_c4_three()
    res = grid_search_morph(inst, probe_config("c4-three", inst))
    assert not res.found and res.states_explored > 0
    assert "not-found-at-resolution" in res.to_json()["outcome"]


def test_search_rejects_moving_pinned_vertex():
    inst = gen_blocked_c4_three()
    with pytest.raises(GridError, match="pinned"):
        grid_search_morph(inst, GridConfig(P(0, 0), Fraction(1), 12, 12, (0, 1)))


def test_search_trivial_instance():
    inst = gen_blocked_c3_five()
    same = Instance(inst.graph, inst.start, inst.start, inst.obstacles)
    res = grid_search_morph(same, GridConfig(P(-40, -8), Fraction(1), 80, 72, (0,)))
    assert res.found and res.morph.steps == 0
    assert isinstance(res.morph.first, Drawing)
