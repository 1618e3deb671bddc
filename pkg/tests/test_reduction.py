import itertools

import pytest

from obsmorph.cnf import SAMPLE_FORMULA, Assignment, CnfFormula
from obsmorph.drawing import check_necessary_compatibility, obstacle_issues, validate_drawing
from obsmorph.reduction import reduce
from obsmorph.verify import _Obstacles, verify_morph
from obsmorph.witness import (NOT_CERTIFIED, WitnessError, _sync_steps, activation, decide_and_witness,
                              step_bound, sync_probe, synthesize_witness)
from obsmorph._geom import MorphFailed


@pytest.fixture(scope="module")
def sample():
    return reduce(SAMPLE_FORMULA)


def test_sample_placement_counts(sample):
    g = sample.grid
    assert (g.n_rows, g.n_cols) == (6, 9)
    counts = {k: g.kind_count(k) for k in ("variable", "literal", "clause", "sync", "split", "crossing")}
    assert counts == {"variable": 3, "literal": 9, "clause": 3, "sync": 1, "split": 9, "crossing": 45}


def test_one_split_per_column_in_its_literal_row(sample):
    g = sample.grid
    for j, lit in enumerate(g.column_literal):
        rows = [r for r in range(g.n_rows) if g.placement[("cell", r, j)] == "split"]
        assert rows == [g.row_of_literal[(abs(lit), 1 if lit > 0 else -1)]]


def test_dependencies_form_a_shallow_dag(sample):
    g = sample.grid
    assert all(d in g.placement for deps in g.dependencies.values() for d in deps)
    f = sample.formula
    assert g.depth() <= 4 * (f.n + 3 * f.m) + 8


def test_sample_drawings_are_valid_and_compatible(sample):
    inst = sample.instance
    for d in (inst.start, inst.end):
        assert validate_drawing(d) == []
        assert obstacle_issues(d, inst.obstacles) == []
    assert check_necessary_compatibility(inst) == []
    assert inst.graph.is_connected()


def test_start_and_target_differ_on_the_sync_cycle_only(sample):
    inst = sample.instance
    moved = {v for v in range(inst.graph.n) if inst.start.pos[v] != inst.end.pos[v]}
    assert {sample.roles[v][1] for v in moved} == {"v1", "v2", "v3", "v4"}


def test_sample_witness(sample):
    a = Assignment((False, True, False))
    m = synthesize_witness(sample, a)
    assert m.first == sample.instance.start and m.last == sample.instance.end
    assert m.steps <= step_bound(SAMPLE_FORMULA)
    assert verify_morph(m, sample.instance.obstacles) is None


def test_falsifying_assignments_stall(sample):
    obs = _Obstacles.of(sample.instance.obstacles)
    for vals in itertools.product((False, True), repeat=3):
        a = Assignment(vals)
        if SAMPLE_FORMULA.satisfied_by(a):
            continue
        with pytest.raises(WitnessError, match="stalled"):
            activation(sample, a, obs)
        with pytest.raises(WitnessError, match="does not satisfy"):
            synthesize_witness(sample, a)


def test_sync_shift_is_blocked_before_release(sample):
    obs = _Obstacles.of(sample.instance.obstacles)
    with pytest.raises(MorphFailed):
        _sync_steps(sample, sample.instance.start, obs)


def test_sync_probe_finds_no_shift_at_rest(sample):
    res = sync_probe(sample)
    assert not res.found and res.states_explored > 0


def test_unsat_decision_carries_statement():
    f = CnfFormula(1, ((1, 1, 1), (-1, -1, -1)))
    dec = decide_and_witness(f)
    assert dec.status == "UNSAT" and dec.morph is None
    assert dec.statement == NOT_CERTIFIED and "not machine-certified" in dec.statement
    assert validate_drawing(dec.reduction.instance.start) == []


@pytest.mark.parametrize("f", [CnfFormula(0, ()), CnfFormula(2, ()), CnfFormula(1, ((1, 1, 1),)),
                               CnfFormula(2, ((-1, -1, -1), (2, -2, 1)))])
def test_small_and_degenerate_formulas(f):
    dec = decide_and_witness(f)
    inst = dec.reduction.instance
    assert dec.status == "SAT"
    assert verify_morph(dec.morph, inst.obstacles) is None
    assert dec.morph.last == inst.end
    assert check_necessary_compatibility(inst) == []


def test_reduction_is_deterministic():
    a, b = reduce(SAMPLE_FORMULA).instance, reduce(SAMPLE_FORMULA).instance
    assert a.start == b.start and a.obstacles == b.obstacles and a.graph.rotation == b.graph.rotation
