"""Turn a satisfying assignment into a verified morph of the reduced instance.

The morph has three phases.  Activation pushes signals from the variables
through the grid and the OR chambers until every clause vertex ``y`` has
left the sync triangle.  The sync 4-cycle is then relabelled by one unit
shift.  Finally the activation is played backwards, which returns every
gadget to its start position while the 4-cycle keeps its new labels.

Activation proceeds in rounds; each round is one linear step that moves
every enabled vertex at once, except that a vertex is held back when a
neighbour already moves in that round.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ._geom import MorphFailed
from .cnf import UNSAT, Assignment, CnfFormula, dpll_solve
from .cycles import _unit_shift
from .drawing import Drawing
from .reduction import ReductionOutput, reduce
from .verify import Morph, _Obstacles, verify_linear_step

STEP_CONSTANT = 40     # witness length is at most this times (n + m)
NOT_CERTIFIED = ("UNSAT: no witness exists for this formula; the instance is still produced, "
                 "but its non-morphability is a consequence of the construction and is not "
                 "machine-certified")


def step_bound(f: CnfFormula) -> int:
    """Upper bound on the witness length; the empty formula still needs the sync steps."""
    return STEP_CONSTANT * max(1, f.n + f.m)


class WitnessError(ValueError):
    pass


@dataclass(frozen=True)
class Decision:
    status: str                      # "SAT" or "UNSAT"
    assignment: Optional[Assignment]
    reduction: ReductionOutput
    morph: Optional[Morph]
    statement: str = ""


class _Sim:
    def __init__(self, out: ReductionOutput, assignment: Assignment):
        self.out = out
        self.a = assignment
        self.grid = out.grid
        self.g = out.instance.graph
        self.adj = self.g.adj
        self.state = {v: "base" for v in range(self.g.n)}
        self.inputs: dict = {}
        for t in self.grid.tunnels.values():
            if t.target is not None:
                self.inputs.setdefault(t.target, []).append(t.vertex)
        self.rows = self.grid.n_rows

    def port(self, gid, role):
        return self.grid.ports[gid][role]

    def on(self, v) -> bool:
        return self.state[v] == "active"

    def _cell_inputs(self, r, j):
        gid = ("cell", r, j)
        left = bottom = None
        for v in self.inputs.get(gid, ()):
            src = self.grid.tunnels[v].source
            if src[0] == "variable" or src == ("cell", r, j - 1):
                left = v
            else:
                bottom = v
        return left, bottom

    def _source_ready(self, v) -> bool:
        t = self.grid.tunnels[v]
        src = t.source
        role = self.out.roles[v][1]
        if src[0] == "variable":
            want = "up" if role == "top" else "down"
            return self.state[self.port(src, "decision")] == want
        if src[0] == "cell":
            kind = self.grid.placement[src]
            c = self.port(src, "c" if kind == "split" else "c'")
            s = self.state[c]
            if kind == "split":
                return s == "active"
            return s in (("h", "hv") if role == "r" else ("v", "hv"))
        if src[0] == "literal":
            return self.state[self.port(src, "s")] != "base"
        if src[0] == "clause":
            return self.state[self.port(src, "c")] == "active"
        return False

    def candidates(self):
        out = []
        st = self.state
        for i in range(len(self.a.values)):
            gid = ("variable", i)
            if gid in self.grid.ports:
                d = self.port(gid, "decision")
                if st[d] == "base":
                    out.append((d, "up" if self.a.values[i] else "down"))
        for v in sorted(self.grid.tunnels):
            t = self.grid.tunnels[v]
            if st[v] == "base" and t.source[0] in ("variable",) and self._source_ready(v):
                out.append((v, "active"))
        for gid, kind in self.grid.placement.items():
            if gid[0] != "cell":
                continue
            r, j = gid[1], gid[2]
            left, bottom = self._cell_inputs(r, j)
            h = left is not None and self.on(left)
            vin = bottom is not None and self.on(bottom)
            if kind == "split":
                c = self.port(gid, "c")
                if st[c] == "base" and h:
                    out.append((c, "active"))
                continue
            c = self.port(gid, "c'")
            nxt = {("base", True, False): "h", ("base", False, True): "v", ("base", True, True): "h",
                   ("v", True, True): "hv", ("h", True, True): "hv"}.get((st[c], h, vin))
            if nxt:
                out.append((c, nxt))
        for v in sorted(self.grid.tunnels):
            if st[v] == "base" and self.grid.tunnels[v].source[0] == "cell" and self._source_ready(v):
                out.append((v, "active"))
        for gid, kind in self.grid.placement.items():
            if kind != "literal":
                continue
            j = gid[1]
            s = self.port(gid, "s")
            if st[s] != "base":
                continue
            vin = self.port(("cell", 0, j), "t")
            if j % 3 == 0:
                if self.on(vin):
                    out.append((s, "active"))
                continue
            iin = self.port(("literal", j - 1), "r")
            if self.on(iin):
                out.append((s, "via_v"))
            elif self.on(vin):
                out.append((s, "via_i"))
        for v in sorted(self.grid.tunnels):
            if st[v] == "base" and self.grid.tunnels[v].source[0] == "literal" and self._source_ready(v):
                out.append((v, "active"))
        clauses = sorted(g for g, k in self.grid.placement.items() if k == "clause")
        for gid in clauses:
            c = self.port(gid, "c")
            if st[c] == "base" and self.on(self.port(("literal", 3 * gid[1] + 2), "r")):
                out.append((c, "active"))
        for gid in clauses:
            z = self.port(gid, "z")
            if st[z] == "base" and self._source_ready(z):
                out.append((z, "active"))
        # clause vertices leave the triangle right to left
        for gid in reversed(clauses):
            y = self.port(gid, "y")
            if st[y] == "base":
                if self.on(self.port(gid, "z")):
                    out.append((y, "active"))
                break
        return out

    def round(self):
        taken: dict = {}
        for v, s in self.candidates():
            if v in taken or any(w in taken for w in self.adj[v]):
                continue
            taken[v] = s
        return taken

    def positions(self):
        states = self.grid.states
        return tuple(states[v][self.state[v]] for v in range(self.g.n))


def _check(a: Drawing, b: Drawing, obs, step: int):
    v = verify_linear_step(a, b, obs, step=step, check_start=False)
    if v is not None:
        raise MorphFailed(f"witness step {step} failed: {v.kind} {v.entities}")


def activation(out: ReductionOutput, assignment: Assignment, obs=None, *, verify: bool = True) -> list[Drawing]:
    """Drawings from the start drawing until every clause vertex has left the triangle."""
    g = out.instance.graph
    obs = obs if obs is not None else _Obstacles.of(out.instance.obstacles)
    sim = _Sim(out, assignment)
    drawings = [out.instance.start]
    while True:
        moves = sim.round()
        if not moves:
            break
        sim.state.update(moves)
        d = Drawing(g, sim.positions())
        if verify:
            _check(drawings[-1], d, obs, len(drawings) - 1)
        drawings.append(d)
    ys = out.vertices_with_role("y")
    if any(sim.state[y] != "active" for y in ys):
        raise WitnessError("activation stalled before every clause was released")
    return drawings


def _sync_steps(out: ReductionOutput, d: Drawing, obs, *, max_halvings: int = 30) -> list[Drawing]:
    g = out.instance.graph
    ports = out.grid.ports[("sync",)]
    v1, v2, v3, v4 = (ports[k] for k in ("v1", "v2", "v3", "v4"))
    corners = out.grid.sync["geometry"].corners
    first = Drawing(g, d.replace({v2: corners["Y"]}).pos)
    _check(d, first, obs, 0)
    eps = Fraction(1, 4)
    for _ in range(max_halvings):
        shift = [Drawing(g, p) for p in _unit_shift(list(first.pos), [v3, v2, v1, v4], eps)]
        try:
            prev = first
            for s in shift:
                _check(prev, s, obs, 0)
                prev = s
            break
        except MorphFailed:
            eps /= 2
    else:
        raise MorphFailed("no sliver width made the sync shift verify")
    last = shift[-1].replace({v3: corners["B"]})
    _check(shift[-1], last, obs, 0)
    return [first] + shift + [last]


def synthesize_witness(out: ReductionOutput, assignment: Assignment) -> Morph:
    """A verified morph from the start to the target drawing; refuses non-satisfying assignments."""
    f = out.formula
    if len(assignment.values) != f.n:
        raise WitnessError(f"assignment has {len(assignment.values)} values for {f.n} variables")
    if not f.satisfied_by(assignment):
        raise WitnessError("assignment does not satisfy the formula")
    obs = _Obstacles.of(out.instance.obstacles)
    act = activation(out, assignment, obs)
    sync = _sync_steps(out, act[-1], obs)
    sync_vs = [out.grid.ports[("sync",)][k] for k in ("v1", "v2", "v3", "v4")]
    final = sync[-1]
    back = [a.replace({v: final.pos[v] for v in sync_vs}) for a in reversed(act[:-1])]
    prev = final
    for i, d in enumerate(back):
        _check(prev, d, obs, len(act) + len(sync) + i)
        prev = d
    if back and back[-1] != out.instance.end:
        raise MorphFailed("witness does not end at the target drawing")
    m = Morph(out.instance.graph, tuple(act) + tuple(sync) + tuple(back))
    bound = step_bound(f)
    if m.steps > bound:
        raise MorphFailed(f"witness has {m.steps} steps, above the bound {bound}")
    return m


def decide_and_witness(f: CnfFormula, assignment: Optional[Assignment] = None) -> Decision:
    """Reduce f; solve it (unless an assignment is given) and build a witness when satisfiable."""
    out = reduce(f)
    if assignment is None:
        res = dpll_solve(f)
        if res == UNSAT:
            return Decision("UNSAT", None, out, None, NOT_CERTIFIED)
        assignment = res
    return Decision("SAT", assignment, out, synthesize_witness(out, assignment))


def sync_probe(out: ReductionOutput, *, reach: int = 8, max_states: Optional[int] = None):
    """Grid search for a relabelling of the sync 4-cycle while every gadget stays at rest.

    Only the four cycle vertices move, on the unit lattice over the
    trapezoid widened by `reach` to the right.  Every moving edge stays in
    a box around that lattice and the porch vertex, so edges and obstacles
    whose bounding boxes miss the box are dropped; this cannot hide a
    collision.
    """
    from .drawing import Instance, PlaneGraph
    from .exact import P
    from .search import GridConfig, grid_search_morph
    sg = out.grid.sync["geometry"]
    ports = out.grid.ports[("sync",)]
    x0, y0 = -1, sg.yc - sg.half - 1
    width, height = sg.width + reach + 1, 2 * sg.half + 2
    lo, hi = (-3, y0), (x0 + width, y0 + height)

    def meets(*pts):
        return (min(p[0] for p in pts) <= hi[0] and max(p[0] for p in pts) >= lo[0]
                and min(p[1] for p in pts) <= hi[1] and max(p[1] for p in pts) >= lo[1])

    inst = out.instance
    start, end = inst.start.pos, inst.end.pos
    keep = {ports[k] for k in ("v1", "v2", "v3", "v4")}
    for u, v in inst.graph.edges:
        if meets(start[u], start[v]):
            keep.update((u, v))
    keep = sorted(keep)
    new = {v: i for i, v in enumerate(keep)}
    edges = [(new[u], new[v]) for u, v in inst.graph.edges if u in new and v in new]
    a = tuple(start[v] for v in keep)
    g = PlaneGraph.from_coordinates(len(keep), edges, a)
    obs = tuple(p for p in inst.obstacles if meets(p))
    sub = Instance(g, Drawing(g, a), Drawing(g, tuple(end[v] for v in keep)), obs)
    movable = tuple(new[ports[k]] for k in ("v1", "v2", "v3", "v4"))
    cfg = GridConfig(P(x0, y0), Fraction(1), width, height, movable)
    return grid_search_morph(sub, cfg, max_states=max_states)
