import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from obsmorph.cycles import NoFreeVertex, cycle_shift_morph
from obsmorph.drawing import Drawing, Instance, cycle_graph, shifted
from obsmorph.forest import NotAForest, forest_morph
from obsmorph.generators import (random_convex_ish_cycle, random_forest_drawings, random_obstacles,
                                 random_shift_instance, random_triangle_instance)
from obsmorph.pinning import pin_frame_transform, small_obstacle_morph
from obsmorph.triangle import UnsupportedConfiguration, triangle_case, triangle_compatible_morph
from obsmorph.verify import Morph, verify_morph

seeds = st.integers(0, 10 ** 9)
few_examples = settings(max_examples=8, deadline=None)


@few_examples
@given(seeds, st.integers(1, 12), st.integers(0, 10))
def test_forest_morph_verifies(seed, n, k):
    rng = random.Random(seed)
    g, d1, d2 = random_forest_drawings(rng, n)
    obs = random_obstacles(rng, [d1, d2], k, 32)
    m = forest_morph(g, d1, d2, obs, seed=seed)
    assert m.first == d1 and m.last == d2
    assert verify_morph(m, obs) is None


def test_forest_morph_rejects_cycles():
    g, d = random_convex_ish_cycle(random.Random(0), 5)
    with pytest.raises(NotAForest):
        forest_morph(g, d, d)


@few_examples
@given(seeds, st.integers(4, 10), st.integers(0, 6))
def test_cycle_shift_uses_n_steps_per_unit(seed, n, k):
    g, d, target, obs, offset = random_shift_instance(random.Random(seed), n, k)
    m = cycle_shift_morph(d, offset, obs)
    assert m.last == target
    assert m.steps == n * min(offset, n - offset)
    assert verify_morph(m, obs) is None


def test_cycle_shift_needs_a_free_vertex():
    g, d = random_convex_ish_cycle(random.Random(2), 6)
    with pytest.raises(NoFreeVertex):
        cycle_shift_morph(d, 1)


@few_examples
@given(seeds, st.integers(1, 2))
def test_small_obstacle_forest(seed, k):
    rng = random.Random(seed)
    g, d1, d2 = random_forest_drawings(rng, rng.randint(1, 8))
    obs = random_obstacles(rng, [d1, d2], k, 32)
    m = small_obstacle_morph(Instance(g, d1, d2, obs), seed=seed)
    assert m.first == d1 and m.last == d2
    assert verify_morph(m, obs) is None


def test_pinned_vertices_stay_put():
    rng = random.Random(11)
    g, d1, d2 = random_forest_drawings(rng, 6)
    obs = random_obstacles(rng, [d1, d2], 2, 32)
    aug = g.with_isolated(2)
    m = forest_morph(aug, Drawing(aug, d1.pos + obs), Drawing(aug, d2.pos + obs))
    pinned = pin_frame_transform(m, [g.n, g.n + 1])
    assert all(d.pos[g.n:] == tuple(obs) for d in pinned.drawings)


def test_small_obstacle_cycle_shift():
    g, d, target, obs, _ = random_shift_instance(random.Random(5), 7, 2)
    m = small_obstacle_morph(Instance(g, d, target, obs))
    assert m.last == target and verify_morph(m, obs) is None


@pytest.mark.parametrize("inside", range(5))
def test_triangle_cases(inside):
    rng = random.Random(100 + inside)
    done = 0
    while done < 3:
        inst = random_triangle_instance(rng, inside, rng.randint(0, 4 - inside))
        assert triangle_case(inst) == inside
        try:
            m = triangle_compatible_morph(inst, seed=done)
        except UnsupportedConfiguration:
            continue
        assert m.first == inst.start and m.last == inst.end
        assert verify_morph(m, inst.obstacles) is None
        done += 1


def test_triangle_rejects_face_change():
    t1 = ((0, 0), (8, 0), (0, 8))
    t2 = ((20, 0), (28, 0), (20, 8))
    g = cycle_graph(3, t1)
    with pytest.raises(ValueError, match="changes face"):
        triangle_compatible_morph(Instance(g, Drawing(g, t1), Drawing(g, t2), ((1, 1),)))


def test_identity_morphs_have_no_steps():
    g, d = random_convex_ish_cycle(random.Random(4), 3)
    assert triangle_compatible_morph(Instance(g, d, d)).steps == 0
    assert isinstance(shifted(d, 1), Drawing)
    assert Morph(g, (d,)).steps == 0
