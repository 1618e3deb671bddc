"""Command-line interface.

Exit codes: 0 success, 1 negative verdict (violation, not found, UNSAT),
2 malformed or unsupported input, 3 internal failure.
"""
from __future__ import annotations

import sys
from fractions import Fraction

import click

from . import io
from .cnf import UNSAT, Assignment, CnfError, parse_dimacs
from .drawing import check_necessary_compatibility, obstacle_issues, validate_drawing
from .exact import Point, format_rational, parse_rational

DEFAULT_SEED = 20240229

OK, NEGATIVE, BAD_INPUT, INTERNAL = 0, 1, 2, 3


class _Negative(Exception):
    """Carries an already-written negative verdict out to the exit code."""


def _emit(text: str, out) -> None:
    if out is None or out == "-":
        click.echo(text, nl=False)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise io.FormatError(f"cannot read {path}: {exc.strerror}") from None


def _instance(path: str):
    return io.instance_from_json(io.loads(_read(path)))


def _formula(path: str):
    return parse_dimacs(_read(path))


class _Group(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except _Negative:
            ctx.exit(NEGATIVE)
        except (click.exceptions.Exit, click.ClickException, click.Abort):
            raise
        except ValueError as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(BAD_INPUT)
        except Exception as exc:  # noqa: BLE001 - any other failure is ours
            click.echo(f"internal error: {type(exc).__name__}: {exc}", err=True)
            ctx.exit(INTERNAL)


@click.group(cls=_Group)
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True,
              help="Seed for randomized fallbacks in the constructive morphs.")
@click.pass_context
def main(ctx, seed):
    """Verify, construct and search obstacle-avoiding planar morphs. Thread count: OBSMORPH_THREADS."""
    ctx.obj = {"seed": seed}


@main.command()
@click.argument("instance")
@click.option("-o", "--out", default=None, help="Write the report here instead of stdout.")
def validate(instance, out):
    """Check that both drawings are valid and avoid the obstacles."""
    inst = _instance(instance)
    report = {}
    for name, d in (("start", inst.start), ("end", inst.end)):
        issues = validate_drawing(d) + obstacle_issues(d, inst.obstacles)
        report[name] = [i.to_json() for i in issues]
    ok = not report["start"] and not report["end"]
    _emit(io.dumps({"ok": ok, "issues": report}), out)
    if not ok:
        raise _Negative


@main.command()
@click.argument("instance")
@click.argument("morph")
@click.option("-o", "--out", default=None)
def verify(instance, morph, out):
    """Exactly verify a morph against an instance."""
    from .verify import verify_morph
    inst = _instance(instance)
    m = io.morph_from_json(inst.graph, io.loads(_read(morph)))
    report = {"ok": True, "steps": m.steps}
    if m.first != inst.start or m.last != inst.end:
        report = {"ok": False, "steps": m.steps,
                  "endpoint_mismatch": [k for k, a, b in (("start", m.first, inst.start), ("end", m.last, inst.end))
                                        if a != b]}
    else:
        v = verify_morph(m, inst.obstacles)
        if v is not None:
            report = {"ok": False, "steps": m.steps, "violation": v.to_json()}
    _emit(io.dumps(report), out)
    if not report["ok"]:
        raise _Negative


@main.command()
@click.argument("instance")
@click.option("-o", "--out", default=None)
def compat(instance, out):
    """Check that every obstacle lies in the same face of both drawings."""
    inst = _instance(instance)
    for d in (inst.start, inst.end):
        issues = validate_drawing(d) or obstacle_issues(d, inst.obstacles)
        if issues:
            raise ValueError(f"invalid drawing: {issues[0].kind}")
    bad = check_necessary_compatibility(inst)
    report = {"necessary_condition_holds": not bad,
              "mismatches": [{"obstacle": b.obstacle,
                              "start_face": list(b.start_face) if b.start_face else None,
                              "end_face": list(b.end_face) if b.end_face else None} for b in bad]}
    _emit(io.dumps(report), out)
    if bad:
        raise _Negative


def _morph_out(m, out):
    _emit(io.dumps(io.morph_to_json(m)), out)


@main.command("morph-forest")
@click.argument("instance")
@click.option("-o", "--out", default=None)
@click.pass_context
def morph_forest(ctx, instance, out):
    """Morph between two drawings of a plane forest."""
    from .forest import forest_morph
    inst = _instance(instance)
    _morph_out(forest_morph(inst.graph, inst.start, inst.end, inst.obstacles, seed=ctx.obj["seed"]), out)


@main.command("morph-cycle-shift")
@click.argument("instance")
@click.option("--offset", type=int, required=True, help="Shift applied to the cycle labels.")
@click.option("-o", "--out", default=None)
def morph_cycle_shift(instance, offset, out):
    """Relabel a cycle drawing with a free vertex by the given offset."""
    from .cycles import cycle_shift_morph
    from .drawing import shifted
    inst = _instance(instance)
    if shifted(inst.start, offset) != inst.end:
        raise ValueError("end drawing is not the start drawing shifted by the offset")
    _morph_out(cycle_shift_morph(inst.start, offset, inst.obstacles), out)


@main.command("morph-small-obstacles")
@click.argument("instance")
@click.option("-o", "--out", default=None)
@click.pass_context
def morph_small_obstacles(ctx, instance, out):
    """Morph a forest or cycle instance with at most two obstacles."""
    from .pinning import small_obstacle_morph
    _morph_out(small_obstacle_morph(_instance(instance), seed=ctx.obj["seed"]), out)


@main.command("morph-triangle")
@click.argument("instance")
@click.option("-o", "--out", default=None)
@click.pass_context
def morph_triangle(ctx, instance, out):
    """Morph two drawings of a triangle that satisfy the face condition."""
    from .triangle import triangle_compatible_morph
    _morph_out(triangle_compatible_morph(_instance(instance), seed=ctx.obj["seed"]), out)


@main.command()
@click.option("--name", required=True, help="c4-three, even-cycle:<n>, c3-five or fox:<pitch>.")
@click.option("-o", "--out", default=None)
def fixture(name, out):
    """Emit a canonical blocked or control instance."""
    from .fixtures import fixture_by_name
    _emit(io.dumps(io.instance_to_json(fixture_by_name(name))), out)


@main.command()
@click.argument("cnf")
@click.option("-o", "--out", default=None, help="Instance JSON destination.")
@click.option("--roles", default=None, help="Also write the role map JSON here.")
def reduce(cnf, out, roles):
    """Build the morphing instance of a 3-CNF formula."""
    from .reduction import reduce as build
    res = build(_formula(cnf))
    _emit(io.dumps(io.instance_to_json(res.instance)), out)
    if roles:
        _emit(io.dumps(io.roles_to_json(res)), roles)


def _assignment(spec: str, n: int):
    text = _read(spec)
    obj = io.loads(text)
    if isinstance(obj, dict):
        try:
            mapping = {int(k): v for k, v in obj.items()}
        except ValueError:
            raise CnfError("assignment keys must be variable numbers") from None
        if not all(isinstance(v, bool) for v in mapping.values()):
            raise CnfError("assignment values must be true or false")
    elif isinstance(obj, list) and all(isinstance(x, int) and x != 0 for x in obj):
        mapping = {abs(x): x > 0 for x in obj}
    else:
        raise CnfError("assignment must be an object {var: bool} or a list of signed literals")
    return Assignment.from_map(n, mapping)


@main.command()
@click.argument("cnf")
@click.option("--assignment", "assign", required=True,
              help="JSON file with {var: bool} or [signed literals], or 'auto' to solve.")
@click.option("-o", "--out", default=None)
def witness(cnf, assign, out):
    """Build the witness morph of the reduced instance for a satisfying assignment."""
    from .cnf import dpll_solve
    from .reduction import reduce as build
    from .witness import NOT_CERTIFIED, synthesize_witness
    f = _formula(cnf)
    if assign == "auto":
        a = dpll_solve(f)
        if a == UNSAT:
            click.echo(NOT_CERTIFIED, err=True)
            raise _Negative
    else:
        a = _assignment(assign, f.n)
    _morph_out(synthesize_witness(build(f), a), out)


@main.command()
@click.argument("cnf")
@click.option("-o", "--out", default=None, help="Decision report destination.")
@click.option("--instance", "inst_out", default=None, help="Also write the instance JSON here.")
@click.option("--morph", "morph_out", default=None, help="Also write the witness morph here when SAT.")
def decide(cnf, out, inst_out, morph_out):
    """Solve the formula, reduce it, and build a witness morph when satisfiable."""
    from .witness import decide_and_witness
    dec = decide_and_witness(_formula(cnf))
    report = {"status": dec.status, "vertices": dec.reduction.instance.graph.n,
              "obstacles": len(dec.reduction.instance.obstacles)}
    if dec.status == "SAT":
        report["assignment"] = dec.assignment.to_json()
        report["steps"] = dec.morph.steps
    else:
        report["statement"] = dec.statement
    _emit(io.dumps(report), out)
    if inst_out:
        _emit(io.dumps(io.instance_to_json(dec.reduction.instance)), inst_out)
    if morph_out and dec.morph is not None:
        _morph_out(dec.morph, morph_out)
    if dec.status != "SAT":
        raise _Negative


def _pair(text: str, sep: str, conv, what: str):
    parts = text.split(sep)
    if len(parts) != 2:
        raise ValueError(f"{what} must look like a{sep}b")
    try:
        return conv(parts[0]), conv(parts[1])
    except ValueError:
        raise ValueError(f"malformed {what} {text!r}") from None


@main.command()
@click.argument("instance")
@click.option("--grid", "grid", required=True, help="WxH: grid cells per axis.")
@click.option("--pitch", default="1", show_default=True, help="Grid spacing (rational).")
@click.option("--origin", default=None, help="x,y of the lower-left grid point (default: instance bounding box).")
@click.option("--movable", required=True, help="Comma-separated vertex ids that may move.")
@click.option("--any-point", is_flag=True, help="Let a vertex jump to any grid point, not just a neighbour.")
@click.option("--max-states", type=int, default=None)
@click.option("-o", "--out", default=None, help="SearchResult JSON destination.")
@click.option("--morph", "morph_out", default=None, help="Also write the morph here when found.")
def search(instance, grid, pitch, origin, movable, any_point, max_states, out, morph_out):
    """Breadth-first search for a single-vertex-move morph on a grid."""
    from .search import NOT_CERTIFIED, GridConfig, grid_search_morph
    inst = _instance(instance)
    w, h = _pair(grid, "x", int, "--grid")
    p = parse_rational(pitch)
    if origin is None:
        pts = list(inst.start.pos) + list(inst.end.pos)
        o = Point(min(q[0] for q in pts), min(q[1] for q in pts))
    else:
        o = Point(*_pair(origin, ",", parse_rational, "--origin"))
    try:
        mv = tuple(int(x) for x in movable.split(",") if x.strip())
    except ValueError:
        raise ValueError("--movable must be comma-separated integers") from None
    res = grid_search_morph(inst, GridConfig(o, Fraction(p), w, h, mv, any_point), max_states=max_states)
    _emit(io.dumps(res.to_json()), out)
    if res.found:
        if morph_out:
            _morph_out(res.morph, morph_out)
    else:
        click.echo(NOT_CERTIFIED, err=True)
        raise _Negative


@main.command()
@click.argument("instance")
@click.option("--morph", "morph_in", default=None, help="Animate this verified morph instead of a still drawing.")
@click.option("--which", type=click.Choice(["start", "end"]), default="start", show_default=True)
@click.option("--width", type=int, default=800, show_default=True)
@click.option("--height", type=int, default=800, show_default=True)
@click.option("--frames-per-step", type=int, default=1, show_default=True)
@click.option("--labels/--no-labels", default=False)
@click.option("--obstacles/--no-obstacles", default=True)
@click.option("-o", "--out", default=None)
def render(instance, morph_in, which, width, height, frames_per_step, labels, obstacles, out):
    """Render a drawing as SVG, or a morph as animated SVG."""
    from .render import RenderSpec, render_drawing, render_morph
    inst = _instance(instance)
    spec = RenderSpec(width=width, height=height, frames_per_step=frames_per_step,
                      show_labels=labels, show_obstacles=obstacles)
    if morph_in:
        m = io.morph_from_json(inst.graph, io.loads(_read(morph_in)))
        svg = render_morph(m, inst.obstacles, spec)
    else:
        svg = render_drawing(inst.start if which == "start" else inst.end, inst.obstacles, spec)
    _emit(svg, out)


if __name__ == "__main__":  # pragma: no cover
    main()
