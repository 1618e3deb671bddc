import hashlib
import json
import random

import pytest
from click.testing import CliRunner
from hypothesis import given, settings
from hypothesis import strategies as st

from obsmorph import io
from obsmorph.cli import main
from obsmorph.cnf import SAMPLE_FORMULA, serialize_dimacs
from obsmorph.cycles import cycle_shift_morph
from obsmorph.drawing import Drawing, Instance, PlaneGraph
from obsmorph.fixtures import gen_blocked_c4_three
from obsmorph.generators import random_shift_instance, random_step
from obsmorph.render import RenderError, RenderSpec, frames, render_drawing, render_morph
from obsmorph.verify import Morph


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def c4_json():
    return io.dumps(io.instance_to_json(gen_blocked_c4_three()))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_instance_json_round_trip_is_byte_identical(seed):
    a, b, obs = random_step(random.Random(seed))
    text = io.dumps(io.instance_to_json(Instance(a.graph, a, b, obs)))
    assert io.dumps(io.instance_to_json(io.instance_from_json(io.loads(text)))) == text


def test_rationals_are_canonical_strings():
    obj = io.instance_to_json(gen_blocked_c4_three())
    assert obj["obstacles"][0] == ["3/1", "5/1"]


@pytest.mark.parametrize("text", ["{", "[]", '{"graph": {}}', '{"graph":{"n":1,"edges":[],"rotation":{}}}'])
def test_malformed_instances_raise_format_errors(text):
    with pytest.raises(ValueError):
        io.instance_from_json(io.loads(text))


def test_empty_graph_with_one_obstacle_draws_one_cross():
    g = PlaneGraph(0, (), ())
    svg = render_drawing(Drawing(g, ()), [(1, 1)])
    assert svg.count("<path ") == 1 and "<line" not in svg


def test_zero_step_morph_renders_static():
    inst = gen_blocked_c4_three()
    svg = render_morph(Morph(inst.graph, (inst.start,)), inst.obstacles)
    assert "<animate" not in svg
    assert svg == render_drawing(inst.start, inst.obstacles)


def test_invalid_morph_is_refused():
    inst = gen_blocked_c4_three()
    with pytest.raises(RenderError, match="refusing"):
        render_morph(Morph(inst.graph, (inst.start, inst.end)), inst.obstacles)


def test_shift_animation_keyframes():
    g, d, _, obs, offset = random_shift_instance(random.Random(3), 5, 1)
    m = cycle_shift_morph(d, offset, obs)
    spec = RenderSpec(frames_per_step=2)
    svg = render_morph(m, obs, spec)
    assert len(frames(m, 2)) == 2 * m.steps + 1
    assert svg.count("<animate ") == 4 * len(g.edges) + 2 * g.n
    assert svg == render_morph(m, obs, spec)


def test_render_spec_rejects_bad_values():
    with pytest.raises(RenderError):
        RenderSpec(frames_per_step=0)
    with pytest.raises(RenderError):
        RenderSpec(width=0)


def test_cli_exit_codes(tmp_path):
    r = CliRunner()
    inst = write(tmp_path, "c4.json", c4_json())
    assert r.invoke(main, ["validate", inst]).exit_code == 0
    assert r.invoke(main, ["compat", inst]).exit_code == 0
    bad_morph = write(tmp_path, "m.json", io.dumps(io.morph_to_json(
        Morph(gen_blocked_c4_three().graph, (gen_blocked_c4_three().start, gen_blocked_c4_three().end)))))
    res = r.invoke(main, ["verify", inst, bad_morph])
    assert res.exit_code == 1 and json.loads(res.stdout)["ok"] is False
    assert r.invoke(main, ["validate", str(tmp_path / "missing.json")]).exit_code == 2
    two = write(tmp_path, "two.cnf", "p cnf 2 1\n1 2 0\n")
    assert r.invoke(main, ["decide", two]).exit_code == 2
    unsat = write(tmp_path, "u.cnf", "p cnf 1 2\n1 1 1 0\n-1 -1 -1 0\n")
    res = r.invoke(main, ["decide", unsat])
    assert res.exit_code == 1 and "not machine-certified" in res.output
    assert r.invoke(main, ["fixture", "--name", "bogus"]).exit_code == 2


def test_cli_search_and_fixture(tmp_path):
    r = CliRunner()
    fx = r.invoke(main, ["fixture", "--name", "c4-three"])
    assert fx.exit_code == 0 and fx.stdout == c4_json()
    inst = write(tmp_path, "c4.json", fx.stdout)
    res = r.invoke(main, ["search", inst, "--grid", "12x12", "--origin", "0,0", "--movable", "0,1,2,3"])
    assert res.exit_code == 1 and json.loads(res.stdout)["outcome"] == "not-found-at-resolution"


def test_cli_decide_and_verify_round_trip(tmp_path):
    r = CliRunner()
    cnf = write(tmp_path, "f.cnf", serialize_dimacs(SAMPLE_FORMULA))
    inst, morph = str(tmp_path / "i.json"), str(tmp_path / "m.json")
    res = r.invoke(main, ["decide", cnf, "--instance", inst, "--morph", morph])
    assert res.exit_code == 0 and json.loads(res.stdout)["status"] == "SAT"
    res = r.invoke(main, ["verify", inst, morph])
    assert res.exit_code == 0 and json.loads(res.stdout)["ok"] is True


GOLDEN_SHA256 = {
    "c4-three": "7e1eab8c0551e887c9399885307604a760fda79ac6d714a5182a796ce31f4cfd",
    "sample-reduction": "001d3e026026b28906ff655fed605a0eb201068251284b8ae9d1b21666eefbb9",
}


def test_render_goldens():
    from obsmorph.reduction import reduce
    inst = gen_blocked_c4_three()
    red = reduce(SAMPLE_FORMULA).instance
    for name, i in (("c4-three", inst), ("sample-reduction", red)):
        svg = render_drawing(i.start, i.obstacles)
        assert hashlib.sha256(svg.encode()).hexdigest() == GOLDEN_SHA256[name], name
