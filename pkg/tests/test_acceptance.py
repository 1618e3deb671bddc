"""End-to-end acceptance runs at full size.

Each test carries a ``criterion`` marker; the terminal summary prints one
PASS/FAIL line per criterion.
"""
import math
import os
import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from obsmorph import io
from obsmorph.cnf import ALL_SIGNS_UNSAT, SAMPLE_FORMULA, UNSAT, dpll_solve, random_formula, serialize_dimacs
from obsmorph.cycles import cycle_shift_morph
from obsmorph.drawing import Drawing, Instance, check_necessary_compatibility, obstacle_issues, validate_drawing
from obsmorph.fixtures import c4_three_control, fixture_by_name, probe_config
from obsmorph.forest import forest_morph
from obsmorph.generators import (random_forest_drawings, random_obstacles, random_shift_instance, random_step,
                                 random_triangle_instance)
from obsmorph.pinning import pin_frame_transform, restrict, small_obstacle_morph
from obsmorph.reduction import reduce
from obsmorph.search import grid_search_morph
from obsmorph.triangle import UnsupportedConfiguration, triangle_case, triangle_compatible_morph
from obsmorph.verify import sample_check, verify_linear_step, verify_morph
from obsmorph.witness import NOT_CERTIFIED, STEP_CONSTANT, decide_and_witness, step_bound

# obstacle count per n*m stays inside this band for every n, m <= 5
OBSTACLES_PER_NM = (1500, 4500)
# total coordinate bits <= BIT_CONSTANT * n*m*log2(n*m + 2)
BIT_CONSTANT = 32000


def detail(request, text):
    request.node.user_properties.append(("detail", text))


def coordinate_bits(inst):
    pts = list(inst.start.pos) + list(inst.end.pos) + list(inst.obstacles)
    return sum(Fraction(c).numerator.bit_length() + Fraction(c).denominator.bit_length() for p in pts for c in p)


@pytest.mark.criterion(1, "exact verifier never accepts a step the sampler rejects")
def test_verifier_agrees_with_sampler(request):
    rng = random.Random(1)
    t0 = time.time()
    disagreements, violating = [], 0
    for i in range(1000):
        a, b, obs = random_step(rng, max_vertices=8, max_obstacles=6, box=32)
        ok = verify_linear_step(a, b, obs) is None
        hit = sample_check(a, b, obs, 10_000)
        violating += not ok
        if ok and hit is not None:
            disagreements.append((i, hit))
    elapsed = time.time() - t0
    detail(request, f"1000 steps, {violating} violating, {len(disagreements)} disagreements, {elapsed:.0f}s")
    assert not disagreements
    assert elapsed < 300


def random_sat_formulas(count, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        f = random_formula(rng, rng.randint(1, 4), rng.randint(1, 4))
        if dpll_solve(f) != UNSAT:
            out.append(f)
    return out


@pytest.mark.criterion(2, "decide emits a verified witness ending at the target drawing")
def test_decide_witnesses(request):
    worst = 0
    t0 = time.time()
    for f in [SAMPLE_FORMULA] + random_sat_formulas(20, 2):
        start = time.time()
        dec = decide_and_witness(f)
        inst = dec.reduction.instance
        assert dec.status == "SAT"
        assert dec.morph.first == inst.start and dec.morph.last.pos == inst.end.pos
        assert dec.morph.steps <= STEP_CONSTANT * max(1, f.n + f.m) == step_bound(f)
        assert verify_morph(dec.morph, inst.obstacles) is None
        assert time.time() - start < 600
        worst = max(worst, dec.morph.steps / max(1, f.n + f.m))
    detail(request, f"21 formulas, max steps/(n+m) = {worst:.1f} <= {STEP_CONSTANT}, {time.time() - t0:.0f}s")


@pytest.mark.criterion(3, "reduction structure for every n, m <= 5")
def test_reduction_structure(request):
    bits = {}
    ratios = []
    for n in range(1, 6):
        for m in range(1, 6):
            f = random_formula(random.Random(1000 * n + m), n, m)
            out = reduce(f)
            inst = out.instance
            assert inst.graph.is_connected()
            moved = [v for v in range(inst.graph.n) if inst.start.pos[v] != inst.end.pos[v]]
            assert len(moved) == 4
            ratio = len(inst.obstacles) / (n * m)
            ratios.append(ratio)
            assert OBSTACLES_PER_NM[0] <= ratio <= OBSTACLES_PER_NM[1]
            assert check_necessary_compatibility(inst) == []
            bits[n, m] = coordinate_bits(inst)
            assert bits[n, m] <= BIT_CONSTANT * n * m * math.log2(n * m + 2)
    for n in range(1, 6):
        for m in range(1, 6):
            if n > 1:
                assert bits[n - 1, m] <= bits[n, m]
            if m > 1:
                assert bits[n, m - 1] <= bits[n, m]
    detail(request, f"25 formulas, obstacles/(nm) in [{min(ratios):.0f}, {max(ratios):.0f}], bits monotone")


@pytest.mark.criterion(4, "unsatisfiable formula gives a valid instance and no witness")
def test_unsat_verdict(request):
    dec = decide_and_witness(ALL_SIGNS_UNSAT)
    inst = dec.reduction.instance
    assert dec.status == "UNSAT" and dec.morph is None
    for d in (inst.start, inst.end):
        assert validate_drawing(d) == [] and obstacle_issues(d, inst.obstacles) == []
    assert dec.statement == NOT_CERTIFIED and "not machine-certified" in dec.statement
    detail(request, f"{inst.graph.n} vertices, {len(inst.obstacles)} obstacles")


@pytest.mark.criterion(5, "forest morphs with up to 10 obstacles")
def test_forest_morphs(request):
    rng = random.Random(5)
    t0 = time.time()
    for i in range(50):
        g, d1, d2 = random_forest_drawings(rng, rng.randint(1, 12))
        obs = random_obstacles(rng, [d1, d2], rng.randint(0, 10), 32)
        m = forest_morph(g, d1, d2, obs, seed=i)
        assert m.first == d1 and m.last == d2
        assert verify_morph(m, obs) is None
    elapsed = time.time() - t0
    detail(request, f"50 forests, {elapsed:.1f}s")
    assert elapsed < 120


@pytest.mark.criterion(6, "cycle shifts take n steps per unit shift")
def test_cycle_shifts(request):
    rng = random.Random(6)
    for _ in range(50):
        n = rng.randint(4, 10)
        g, d, target, obs, offset = random_shift_instance(rng, n, rng.randint(1, 8))
        m = cycle_shift_morph(d, offset, obs)
        units = min(offset, n - offset)
        assert m.last == target
        assert m.steps == n * units
        assert verify_morph(m, obs) is None
    detail(request, "50 cycles, n in [4, 10]")


@pytest.mark.criterion(7, "one or two obstacles via pinned frames")
def test_small_obstacle_provider(request):
    rng = random.Random(7)
    for i in range(25):
        g, d1, d2 = random_forest_drawings(rng, rng.randint(1, 10))
        obs = random_obstacles(rng, [d1, d2], rng.randint(1, 2), 32)
        m = small_obstacle_morph(Instance(g, d1, d2, obs), seed=i)
        assert verify_morph(m, obs) is None and m.first == d1 and m.last == d2
        aug = g.with_isolated(len(obs))
        raw = forest_morph(aug, Drawing(aug, d1.pos + obs), Drawing(aug, d2.pos + obs), seed=i)
        pinned = pin_frame_transform(raw, list(range(g.n, g.n + len(obs))))
        assert all(d.pos[g.n:] == obs for d in pinned.drawings)
        assert restrict(pinned, g.n).drawings == m.drawings
    for _ in range(25):
        g, d, target, obs, _ = random_shift_instance(rng, rng.randint(4, 10), rng.randint(1, 2))
        m = small_obstacle_morph(Instance(g, d, target, obs))
        assert verify_morph(m, obs) is None and m.last == target
    detail(request, "25 forests and 25 cycles")


@pytest.mark.criterion(8, "triangle morphs for 0 to 4 inner obstacles")
def test_triangle_morphs(request):
    rng = random.Random(8)
    accepted = {k: 0 for k in range(5)}
    rejected = {k: 0 for k in range(5)}
    for inside in range(5):
        while accepted[inside] < 10:
            inst = random_triangle_instance(rng, inside, rng.randint(0, 4 - inside))
            assert triangle_case(inst) == inside
            try:
                m = triangle_compatible_morph(inst, seed=accepted[inside])
            except UnsupportedConfiguration:
                rejected[inside] += 1
                assert rejected[inside] < 100
                continue
            assert m.first == inst.start and m.last == inst.end
            assert verify_morph(m, inst.obstacles) is None
            accepted[inside] += 1
    detail(request, f"accepted {accepted}, rejected as non-generic {rejected}")


PROBES = ["c4-three", "c3-five", "even-cycle:6", "fox:1"]


@pytest.mark.criterion(9, "blocking probes exhaust their grids; the control is found")
def test_blocking_probes(request):
    notes = []
    for name in PROBES:
        inst = fixture_by_name(name)
        t0 = time.time()
        res = grid_search_morph(inst, probe_config(name, inst))
        elapsed = time.time() - t0
        notes.append(f"{name}: {res.outcome} after {res.states_explored} states, {elapsed:.0f}s")
        assert not res.found
        assert elapsed < 600
    ctrl = c4_three_control()
    res = grid_search_morph(ctrl, probe_config("c4-three-control", ctrl))
    notes.append(f"control: {res.outcome}")
    detail(request, "; ".join(notes))
    assert res.found and verify_morph(res.morph, ()) is None


def _cli(args, cwd):
    env = dict(os.environ, PYTHONHASHSEED="random")
    p = subprocess.run([sys.executable, "-m", "obsmorph.cli"] + args, cwd=cwd, env=env, capture_output=True)
    return p.returncode, p.stdout


@pytest.mark.criterion(10, "every CLI verb is byte-deterministic")
def test_cli_determinism(request, tmp_path):
    rng = random.Random(10)
    g, d1, d2 = random_forest_drawings(rng, 8)
    forest = Instance(g, d1, d2, random_obstacles(rng, [d1, d2], 4, 32))
    small = Instance(g, d1, d2, random_obstacles(rng, [d1, d2], 2, 32))
    cg, cd, ct, cobs, offset = random_shift_instance(rng, 6, 3)
    tri = random_triangle_instance(rng, 2, 1)
    files = {"forest.json": forest, "small.json": small, "cycle.json": Instance(cg, cd, ct, cobs),
             "tri.json": tri, "c4.json": fixture_by_name("c4-three"), "ctrl.json": c4_three_control()}
    for name, inst in files.items():
        (tmp_path / name).write_text(io.dumps(io.instance_to_json(inst)))
    (tmp_path / "f.cnf").write_text(serialize_dimacs(SAMPLE_FORMULA))
    _cli(["decide", "f.cnf", "--instance", "red.json", "--morph", "wit.json"], tmp_path)
    verbs = {
        "validate": ["validate", "c4.json"],
        "verify": ["verify", "red.json", "wit.json"],
        "compat": ["compat", "c4.json"],
        "morph-forest": ["morph-forest", "forest.json"],
        "morph-cycle-shift": ["morph-cycle-shift", "cycle.json", "--offset", str(offset)],
        "morph-small-obstacles": ["morph-small-obstacles", "small.json"],
        "morph-triangle": ["morph-triangle", "tri.json"],
        "fixture": ["fixture", "--name", "even-cycle:8"],
        "reduce": ["reduce", "f.cnf"],
        "witness": ["witness", "f.cnf", "--assignment", "auto"],
        "decide": ["decide", "f.cnf"],
        "search": ["search", "ctrl.json", "--grid", "12x12", "--origin", "0,0", "--movable", "0,1,2,3"],
        "render": ["render", "cycle.json", "--frames-per-step", "2"],
    }
    bad = []
    for verb, args in verbs.items():
        first, second = _cli(args, tmp_path), _cli(args, tmp_path)
        if first != second or first[0] != 0 or not first[1]:
            bad.append(f"{verb} (exit {first[0]}/{second[0]})")
    detail(request, f"{len(verbs)} verbs run twice, {len(bad)} differ or fail")
    assert not bad, bad
