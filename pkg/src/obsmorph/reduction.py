"""Compile a 3-CNF formula into a morphing instance whose morph exists iff the formula is satisfiable.

Geometry
--------
Everything lives in a free region carved out of lattice-point walls: convex
chambers joined by straight tunnels of cross-section 2.  Every tunnel holds
one vertex that starts at its upstream end and, once activated, slides to
its downstream end.  While that vertex sits at the upstream end, its edge to
the downstream chamber's centre runs the full tunnel length, which pins the
centre to the tunnel's line.  A signal therefore moves a centre off one
line and onto the next.

Rows (two per variable) and columns (three per clause) form a sheared grid
of cells of pitch 24.  Each cell is a split or a crossing.  Columns end in
a chain of three OR chambers per clause, whose output releases the clause
vertex ``y`` from a long thin triangle.  The triangle hosts the
synchronisation 4-cycle, which can only be relabelled after every ``y`` has
left the triangle past its apex.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor

from .cnf import CnfFormula
from .drawing import Drawing, Instance, PlaneGraph
from .exact import P, Point
from ._region import Poly, rect, wall_obstacles

PITCH = 24          # cell pitch
SHEAR = 6           # band offset: a chamber's two parallel bands are this far apart
WALL = 2            # wall thickness in lattice rows
MARGIN = Fraction(1, 2)   # free margin around the synchronisation triangle
CLAUSE_WIDTH = 3 * PITCH
OR_BASE = 48        # height offset of the OR chambers


class ReductionError(ValueError):
    pass


@dataclass(frozen=True)
class Tunnel:
    """A tunnel vertex and the two positions it alternates between."""

    vertex: int
    upstream: Point      # base position
    downstream: Point    # activated position
    source: tuple        # gadget owning the upstream chamber
    target: tuple        # gadget owning the downstream chamber, or None for a dead end


@dataclass
class GadgetGrid:
    pitch: int
    n_rows: int
    n_cols: int
    row_of_literal: dict          # (variable, sign) -> row index
    column_literal: tuple         # column -> signed literal
    placement: dict               # gadget id -> kind
    cell_origin: dict             # (row, col) -> Point
    ports: dict                   # gadget id -> {role: vertex}
    forbidden: list               # filled polygons (as point tuples)
    free: list                    # free polygons
    refined_obstacles: tuple
    dependencies: dict            # gadget id -> tuple of prerequisite gadget ids
    tunnels: dict                 # vertex -> Tunnel
    states: dict                  # vertex -> {state name: Point}
    sync: dict                    # named sync geometry

    def kind_count(self, kind: str) -> int:
        return sum(1 for k in self.placement.values() if k == kind)

    def depth(self) -> int:
        memo: dict = {}

        def d(g):
            if g not in memo:
                memo[g] = 1 + max((d(h) for h in self.dependencies.get(g, ())), default=0)
            return memo[g]
        return max((d(g) for g in self.placement), default=0)


@dataclass
class ReductionOutput:
    formula: CnfFormula
    instance: Instance
    grid: GadgetGrid
    roles: dict                   # vertex -> (gadget id, role)

    def vertices_with_role(self, role: str) -> list[int]:
        return sorted(v for v, (_, r) in self.roles.items() if r == role)


class _Builder:
    def __init__(self):
        self.pos: list[Point] = []
        self.roles: dict = {}
        self.edges: list = []
        self.free: list[Poly] = []
        self.filled: list[Poly] = []
        self.extra: list[Point] = []
        self.tunnels: dict = {}
        self.states: dict = {}
        self.ports: dict = {}
        self.placement: dict = {}
        self.deps: dict = {}

    def vertex(self, p, gadget, role: str, **states) -> int:
        v = len(self.pos)
        self.pos.append(P(*p))
        self.roles[v] = (gadget, role)
        self.ports.setdefault(gadget, {})[role] = v
        self.states[v] = {"base": self.pos[v], **{k: P(*s) for k, s in states.items()}}
        return v

    def edge(self, u: int, v: int):
        self.edges.append((min(u, v), max(u, v)))

    def tunnel(self, v: int, down, source, target):
        self.tunnels[v] = Tunnel(v, self.pos[v], P(*down), source, target)
        self.states[v]["active"] = P(*down)

    def gadget(self, gid, kind: str, deps=()):
        self.placement[gid] = kind
        self.deps[gid] = tuple(deps)


def strip(a, b, tag: str = "") -> Poly:
    """Tunnel polygon around segment ab: cross-section 2 measured along the axis closer to perpendicular."""
    a, b = P(*a), P(*b)
    dx, dy = b[0] - a[0], b[1] - a[1]
    off = (0, 1) if abs(dy) <= abs(dx) else (1, 0)
    return Poly((a - off, b - off, b + off, a + off), tag)


def _extend(a, b, by):
    """Segment ab lengthened at both ends by `by` times its axis-dominant extent unit."""
    a, b = P(*a), P(*b)
    d = b - a
    s = Fraction(by) / max(abs(d[0]), abs(d[1]))
    return a - d * s, b + d * s


def cell_origin(r: int, j: int, rows: int) -> Point:
    return P(j * PITCH + (rows - 1 - r) * SHEAR, -r * PITCH - j * SHEAR)


def column_x(j: int, rows: int) -> int:
    """x of the vertical centre line of column j above the grid."""
    return j * PITCH + (rows - 1) * SHEAR + 7


# OR chamber geometry relative to the first column x of a clause (a, 0)
_K_BOTTOM = (37, 20, 46)
_K_RECT = ((-1, 37, 7, 45), (20, 20, 28, 29), (45, 46, 53, 56))
_K_BASE = ((0, 39), (24, 24), (48, 51))
_K_VIA_V = ((5, 43), (24, 27), (48, 54))          # K_0 has a single target
_K_VIA_I = (None, (Fraction(45, 2), Fraction(51, 2)), (Fraction(99, 2), Fraction(105, 2)))
_K_OUT = (((Fraction(13, 2), Fraction(83, 2)), (Fraction(41, 2), Fraction(55, 2))),
          ((Fraction(51, 2), Fraction(57, 2)), (Fraction(91, 2), Fraction(97, 2))),
          ((Fraction(105, 2), Fraction(99, 2)), (Fraction(113, 2), Fraction(91, 2))))
_K_OUT_STRIP = (((6, 42), (21, 27)), ((25, 28), (46, 49)), ((52, 50), (57, 45)))
_C_RECT = (56, 34, 66, 48)
_C_BASE = (60, 42)
_C_ACTIVE = (65, 40)


def _z_line_x(a, y):
    """The release tunnel of a clause rises along x = a + 68 - (y - 34) / 2."""
    return a + 68 - (Fraction(y) - 34) / 2


def _split_rows(f: CnfFormula) -> list[int]:
    return [2 * (abs(l) - 1) + (0 if l > 0 else 1) for c in f.clauses for l in c]


def _build_grid(b: _Builder, f: CnfFormula):
    rows, cols = 2 * f.n, 3 * f.m
    split_row = _split_rows(f)
    center, right, top = {}, {}, {}
    for r in range(rows):
        for j in range(cols):
            o = cell_origin(r, j, rows)
            gid = ("cell", r, j)
            is_split = split_row[j] == r
            if is_split:
                c = b.vertex(o + (1, 7), gid, "c", active=o + (7, 1))
                b.free.append(Poly((o, o + (9, 0), o + (0, 9)), "split"))
            else:
                c = b.vertex(o + (1, 7), gid, "c'", h=o + (1, 1), v=o + (7, 7), hv=o + (7, 1))
                b.free.append(rect(*(o), *(o + (8, 8)), "crossing"))
            center[r, j] = c
            # right arm
            rv = b.vertex(o + (Fraction(15, 2), 1), gid, "r")
            right[r, j] = rv
            if j + 1 < cols:
                b.tunnel(rv, o + (Fraction(49, 2), 1), gid, ("cell", r, j + 1))
                b.free.append(rect(*(o + (7, 0)), *(o + (25, 2)), "tunnel"))
            else:
                b.free.append(rect(*(o + (7, 0)), *(o + (12, 2)), "dead end"))
            b.edge(c, rv)
            # top arm
            tv = b.vertex(o + ((7, Fraction(3, 2)) if is_split else (7, Fraction(15, 2))), gid, "t")
            top[r, j] = tv
            y0 = 0 if is_split else 7
            if r == 0:
                a = column_x(3 * (j // 3), rows)
                kb = _K_BOTTOM[j % 3]
                b.tunnel(tv, (column_x(j, rows), kb + Fraction(1, 2)), gid, ("literal", j))
                b.free.append(rect(*(o + (6, y0)), o[0] + 8, kb + 1, "tunnel"))
                del a
            elif r - 1 == split_row[j]:
                b.free.append(rect(*(o + (6, y0)), *(o + (8, 12)), "dead end"))
            else:
                b.tunnel(tv, o + (7, Fraction(49, 2)), gid, ("cell", r - 1, j))
                b.free.append(rect(*(o + (6, y0)), *(o + (8, 25)), "tunnel"))
            b.edge(c, tv)
            if r == rows - 1 and not is_split:
                leaf = b.vertex(o + (1, -5), gid, "b")
                b.free.append(rect(*(o + (0, -6)), *(o + (2, 1)), "dead end"))
                b.edge(c, leaf)
            deps = [("variable", r // 2)] if j == 0 else [("cell", r, j - 1)]
            if r < split_row[j]:
                deps.append(("cell", r + 1, j))
            b.gadget(gid, "split" if is_split else "crossing", deps)
    for r in range(rows):
        for j in range(1, cols):
            b.edge(right[r, j - 1], center[r, j])
        for j in range(cols):
            if r + 1 < rows and r != split_row[j]:
                b.edge(top[r + 1, j], center[r, j])
    # variables
    for i in range(f.n):
        gid = ("variable", i)
        ou, ol = cell_origin(2 * i, 0, rows), cell_origin(2 * i + 1, 0, rows)
        xv = ol[0] - 16
        yu, yl = ou[1] + 7, ol[1] + 7
        u = b.vertex((xv, yu), gid, "top")
        d = b.vertex((xv, (yu + yl) / 2), gid, "decision",
                     up=(xv - MARGIN, yu - MARGIN), down=(xv - MARGIN, yl + MARGIN))
        w = b.vertex((xv, yl), gid, "bottom")
        b.tunnel(u, (ou[0] + Fraction(1, 2), yu), gid, ("cell", 2 * i, 0))
        b.tunnel(w, (ol[0] + Fraction(1, 2), yl), gid, ("cell", 2 * i + 1, 0))
        b.edge(u, d)
        b.edge(d, w)
        b.edge(u, center[2 * i, 0])
        b.edge(w, center[2 * i + 1, 0])
        b.free.append(rect(xv - 1, yl - 1, xv + 1, yu + 1, "variable"))
        b.free.append(rect(xv - 4, yu - 1, ou[0] + 1, yu + 1, "tunnel"))
        b.free.append(rect(xv - 4, yl - 1, ol[0] + 1, yl + 1, "tunnel"))
        # stationary links keep consecutive variables connected; they sit
        # on the slide lines, so the slides only stretch those edges
        lu = b.vertex((xv - 3, yu), gid, "link up")
        ll = b.vertex((xv - 3, yl), gid, "link down")
        b.edge(u, lu)
        b.edge(w, ll)
        if i > 0:
            prev = b.ports[("variable", i - 1)]["link down"]
            b.edge(prev, lu)
            b.free.append(strip(b.pos[prev], b.pos[lu], "link"))
        b.gadget(gid, "variable")
    return center, right, top


@dataclass(frozen=True)
class SyncGeometry:
    """The thin triangle, its margin, and the corners of the filled trapezoid."""

    slope: Fraction      # of the triangle's legs
    half: int            # half-height of the triangle at x = 0
    yc: int              # y of the triangle's axis
    width: int           # trapezoid width

    @property
    def corners(self) -> dict:
        s, h, yc, w = self.slope, self.half, self.yc, self.width
        return {"X": P(0, yc + h), "B": P(w, yc + h - 1), "C": P(w, yc - h + 1), "Z": P(0, yc - h),
                "Y": P(h / s, yc)}

    def top(self, x):
        return self.yc + self.half - self.slope * x

    def bottom(self, x):
        return self.yc - self.half + self.slope * x

    def margin_poly(self) -> Poly:
        s, h, yc, mu = self.slope, self.half, self.yc, MARGIN
        return Poly((P(-mu, self.top(-mu) + mu), P(-mu, self.bottom(-mu) - mu), P((h + mu) / s, yc)),
                    "sync triangle")

    def trapezoid(self) -> Poly:
        c = self.corners
        return Poly((c["X"], c["Z"], c["C"], c["B"]), "sync trapezoid")


def sync_geometry(f: CnfFormula) -> SyncGeometry:
    if f.m == 0:
        return SyncGeometry(Fraction(1, 8), 4, 0, 8)
    m = f.m
    reach = CLAUSE_WIDTH * (m - 1) + SHEAR * (2 * f.n - 1) + 87
    h = -(-reach // (8 * m))
    return SyncGeometry(Fraction(1, 8 * m), h, h + 62, 8 * m)


def _clause_points(sg: SyncGeometry, a, k: int, m: int):
    """Base and released positions of the clause vertices y, z and the fixed w."""
    s, q = sg.slope, Fraction(1, 4)
    # y on the release line, a quarter above the upper leg
    yy = (sg.yc + sg.half + q - s * (a + 85)) / (1 - s / 2)
    y_base = P(_z_line_x(a, yy), yy)
    zy = (sg.yc - sg.half - q + s * (a + 85)) / (1 + s / 2)
    z_act = P(_z_line_x(a, zy), zy)
    y_rel = P(sg.half / s + Fraction(2 * m * (k + 1), m + 2), sg.yc)
    wx = floor(y_base[0] - 6) + MARGIN
    d = y_rel - y_base
    w = P(wx, y_base[1] + d[1] * (wx - y_base[0]) / d[0])
    return y_base, z_act, y_rel, w


def _build_clauses(b: _Builder, f: CnfFormula, top: dict, sg: SyncGeometry):
    rows = 2 * f.n
    ws = []
    for k in range(f.m):
        a = column_x(3 * k, rows)
        prev_out = None
        for i in range(3):
            j = 3 * k + i
            gid = ("literal", j)
            base = P(a + _K_BASE[i][0], _K_BASE[i][1])
            states = {"via_v": (a + _K_VIA_V[i][0], _K_VIA_V[i][1])}
            if i == 0:
                states = {"active": states["via_v"]}
            else:
                states["via_i"] = (a + _K_VIA_I[i][0], _K_VIA_I[i][1])
            s = b.vertex(base, gid, "s", **states)
            up, down = _K_OUT[i]
            r = b.vertex((a + up[0], up[1]), gid, "r")
            target = ("literal", j + 1) if i < 2 else ("clause", k)
            b.tunnel(r, (a + down[0], down[1]), gid, target)
            b.edge(s, r)
            b.edge(s, top[0, j])
            x0, y0, x1, y1 = _K_RECT[i]
            b.free.append(rect(a + x0, y0, a + x1, y1, "literal chamber"))
            (sx0, sy0), (sx1, sy1) = _K_OUT_STRIP[i]
            b.free.append(strip((a + sx0, sy0), (a + sx1, sy1), "tunnel"))
            deps = [("cell", 0, j)]
            if prev_out is not None:
                b.edge(s, prev_out)
                deps.append(("literal", j - 1))
            prev_out = r
            b.gadget(gid, "literal", deps)
        gid = ("clause", k)
        y_base, z_act, y_rel, w = _clause_points(sg, a, k, f.m)
        c = b.vertex((a + _C_BASE[0], _C_BASE[1]), gid, "c", active=(a + _C_ACTIVE[0], _C_ACTIVE[1]))
        z = b.vertex((_z_line_x(a, Fraction(95, 2)), Fraction(95, 2)), gid, "z")
        b.tunnel(z, z_act, gid, ("sync",))
        y = b.vertex(y_base, gid, "y", active=y_rel)
        wv = b.vertex(w, gid, "w")
        for e in ((c, prev_out), (c, z), (z, y), (y, wv)):
            b.edge(*e)
        b.free.append(rect(a + _C_RECT[0], _C_RECT[1], a + _C_RECT[2], _C_RECT[3], "clause chamber"))
        b.free.append(strip((_z_line_x(a, 47), 47), (_z_line_x(a, z_act[1] + MARGIN), z_act[1] + MARGIN),
                            "release tunnel"))
        b.gadget(gid, "clause", [("literal", 3 * k + 2)])
        ws.append(wv)
    return ws


def _build_sync(b: _Builder, f: CnfFormula, sg: SyncGeometry, ws: list):
    gid = ("sync",)
    c = sg.corners
    v1 = b.vertex(c["X"], gid, "v1")
    v2 = b.vertex(c["B"], gid, "v2", apex=c["Y"])
    v3 = b.vertex(c["C"], gid, "v3")
    v4 = b.vertex(c["Z"], gid, "v4")
    for e in ((v1, v2), (v2, v3), (v3, v4), (v4, v1)):
        b.edge(*e)
    e = b.vertex((Fraction(-5, 2), sg.yc), gid, "q")
    b.edge(e, v1)
    b.free.append(sg.margin_poly())
    b.free.append(rect(-4, sg.yc - sg.half - 1, 0, sg.yc + sg.half + 1, "porch"))
    b.filled.append(sg.trapezoid())
    mid = 4 * f.m if f.m else 4
    b.extra += [P(mid, sg.top(mid) - MARGIN - sg.slope), P(mid, sg.bottom(mid) + MARGIN + sg.slope)]
    if ws:
        w = b.pos[ws[-1]]
        yq = sg.yc + sg.half + Fraction(13, 2)
        q1 = b.vertex((w[0], yq), gid, "q1")
        q2 = b.vertex((Fraction(-5, 2), yq), gid, "q2")
        b.edge(ws[-1], q1)
        b.edge(q1, q2)
        b.edge(q2, e)
        b.free.append(rect(w[0] - 1, w[1], w[0] + 1, yq + 1, "path"))
        b.free.append(rect(Fraction(-7, 2), yq - 1, w[0] + 1, yq + 1, "path"))
        b.free.append(rect(Fraction(-7, 2), sg.yc, Fraction(-3, 2), yq + 1, "path"))
    b.gadget(gid, "sync", [("clause", k) for k in range(f.m)])
    return v1, v2, v3, v4


def sync_target(sg: SyncGeometry) -> dict:
    """Positions of v1..v4 in the target drawing: each takes its predecessor's corner."""
    c = sg.corners
    return {"v1": c["Z"], "v2": c["X"], "v3": c["B"], "v4": c["C"]}


def reduce(f: CnfFormula) -> ReductionOutput:
    """Build the instance for formula f; its start and target differ only on the four sync vertices."""
    b = _Builder()
    sg = sync_geometry(f)
    ws = []
    if f.m:
        _, _, top = _build_grid(b, f)
        ws = _build_clauses(b, f, top, sg)
    v = _build_sync(b, f, sg, ws)
    n = len(b.pos)
    pos = tuple(b.pos)
    g = PlaneGraph.from_coordinates(n, sorted(set(b.edges)), pos)
    end = list(pos)
    for vert, p in zip(v, sync_target(sg).values()):
        end[vert] = p
    walls = wall_obstacles(b.free, b.filled, WALL)
    obstacles = tuple(sorted(set(P(x, y) for x, y in walls) | set(b.extra)))
    inst = Instance(g, Drawing(g, pos), Drawing(g, tuple(end)), obstacles)
    rows, cols = 2 * f.n, 3 * f.m
    lits = tuple(l for c in f.clauses for l in c)
    grid = GadgetGrid(
        pitch=PITCH, n_rows=rows if f.m else 0, n_cols=cols,
        row_of_literal={(i + 1, sgn): 2 * i + (0 if sgn > 0 else 1) for i in range(f.n) for sgn in (1, -1)},
        column_literal=lits,
        placement=dict(b.placement),
        cell_origin={(r, j): cell_origin(r, j, rows) for r in range(rows) for j in range(cols)},
        ports={g_: dict(p) for g_, p in b.ports.items()},
        forbidden=[p.pts for p in b.filled],
        free=list(b.free),
        refined_obstacles=tuple(b.extra),
        dependencies=dict(b.deps),
        tunnels=dict(b.tunnels),
        states={v_: dict(s) for v_, s in b.states.items()},
        sync={"geometry": sg, "start": dict(zip(("v1", "v2", "v3", "v4"), (pos[x] for x in v))),
              "target": sync_target(sg)},
    )
    return ReductionOutput(f, inst, grid, dict(b.roles))
