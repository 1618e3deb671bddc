"""Exact verification of piecewise-linear obstacle-avoiding morphs.

A linear step starts from a valid drawing, so its first invalid moment (if
any) is a contact: two vertices meet, or a point (vertex or obstacle) lands
on a segment it is not an endpoint of.  Edge-edge crossings need no separate
treatment because two closed segments that are disjoint first meet at an
endpoint.  Every contact is a root of a degree <= 2 polynomial in t, so all
candidate times are :class:`AlgebraicTime` values and each is confirmed by
an exact on-segment test in Q(sqrt d).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Optional, Sequence

import numpy as np

from ._index import GridIndex, boxes_overlap, fbox
from .drawing import Drawing, PlaneGraph, obstacle_issues, validate_drawing
from .exact import (AlgebraicTime, Point, eval_at, moving_dot, moving_orientation, on_segment_field,
                    position_at, qsign, real_roots, sgn)

KINDS = ("invalid-endpoint-drawing", "vertex-vertex", "vertex-on-edge", "obstacle-on-vertex",
         "obstacle-on-edge", "permanent-collinearity-overlap")
_RANK = {k: i for i, k in enumerate(KINDS)}


class MorphError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Morph:
    graph: PlaneGraph
    drawings: tuple[Drawing, ...]

    def __post_init__(self):
        object.__setattr__(self, "drawings", tuple(self.drawings))
        for d in self.drawings:
            if d.graph.n != self.graph.n:
                raise MorphError("all drawings must share the vertex set")

    @property
    def steps(self) -> int:
        return len(self.drawings) - 1

    @property
    def first(self) -> Drawing:
        return self.drawings[0]

    @property
    def last(self) -> Drawing:
        return self.drawings[-1]

    def then(self, other: "Morph") -> "Morph":
        if other.drawings and self.drawings and other.first.pos != self.last.pos:
            raise MorphError("morphs do not join")
        return Morph(self.graph, self.drawings + other.drawings[1:])

    def reversed(self) -> "Morph":
        return Morph(self.graph, tuple(reversed(self.drawings)))

    @staticmethod
    def chain(graph, drawings: Sequence[Drawing]) -> "Morph":
        """Build a morph from drawings, dropping consecutive duplicates."""
        out = []
        for d in drawings:
            if not out or out[-1].pos != d.pos:
                out.append(d)
        return Morph(graph, tuple(out))


@dataclass(frozen=True)
class Violation:
    kind: str
    step: int
    time: AlgebraicTime
    entities: tuple

    def to_json(self) -> dict:
        return {"kind": self.kind, "step": self.step, "time": self.time.to_json(),
                "entities": [list(e) if isinstance(e, tuple) else e for e in self.entities]}


class _Obstacles:
    """Obstacle points with a bucket index, cached per obstacle tuple."""

    _cache: dict = {}

    def __init__(self, pts):
        self.pts = tuple(pts)
        self.grid = GridIndex([fbox((p,)) for p in self.pts])

    @classmethod
    def of(cls, pts) -> "_Obstacles":
        if isinstance(pts, _Obstacles):
            return pts
        key = tuple(pts)
        hit = cls._cache.get(key)
        if hit is None:
            if len(cls._cache) > 8:
                cls._cache.clear()
            hit = cls._cache[key] = cls(key)
        return hit

    def near(self, box):
        return sorted(self.grid.query(box))


def _first_meeting(w0, w1, x0, x1) -> Optional[AlgebraicTime]:
    """First t in (0,1) with w(t) == x(t) for two linearly moving points."""
    dx0, dy0 = w0[0] - x0[0], w0[1] - x0[1]
    ddx = (w1[0] - x1[0]) - dx0
    ddy = (w1[1] - x1[1]) - dy0
    if ddx == 0 and ddy == 0:
        return None
    if ddx != 0:
        t = Fraction(-dx0) / ddx
        if dy0 + ddy * t != 0:
            return None
    else:
        if dx0 != 0:
            return None
        t = Fraction(-dy0) / ddy
    if 0 < t < 1:
        return AlgebraicTime.make(t)
    return None


def _first_contact(w0, w1, u0, u1, v0, v1):
    """First t in (0,1) where point w lies on segment uv; returns (t, permanent)."""
    f = moving_orientation(u0, u1, v0, v1, w0, w1)
    g = moving_dot(w0, w1, u0, u1, v0, v1)
    if f.is_zero():
        if g.is_zero():
            return AlgebraicTime.make(Fraction(1, 2)), True
        for t in real_roots(g):
            if t.compare(0) > 0 and t.compare(1) < 0:
                return t, True
        return None
    for t in real_roots(f):
        if t.compare(0) <= 0:
            continue
        if t.compare(1) >= 0:
            break
        if qsign(eval_at(g, t)) <= 0:
            return t, False
    return None


class _Best:
    def __init__(self):
        self.key = None
        self.item = None

    def offer(self, t: AlgebraicTime, kind: str, entities: tuple):
        if self.key is not None:
            c = t.compare(self.key[0])
            if c > 0:
                return
            if c == 0 and (_RANK[kind], entities) >= self.key[1:]:
                return
        self.key = (t, _RANK[kind], entities)
        self.item = (t, kind, entities)

    def bound(self) -> Optional[AlgebraicTime]:
        return None if self.key is None else self.key[0]


def _endpoint_violation(d: Drawing, obs, index, step: int, t) -> Optional[Violation]:
    issues = validate_drawing(d)
    if not issues:
        issues = obstacle_issues(d, obs)
        if issues:
            i = issues[0]
            k = index[i.entities[0]] if index is not None else i.entities[0]
            rest = i.entities[1] if i.kind == "obstacle-on-edge" else [i.entities[1]]
            return Violation(i.kind, step, AlgebraicTime.make(t), (k, *rest))
    if issues:
        i = issues[0]
        return Violation("invalid-endpoint-drawing", step, AlgebraicTime.make(t),
                         (i.kind,) + tuple(tuple(e) if isinstance(e, list) else e for e in i.entities))
    return None


def verify_linear_step(a: Drawing, b: Drawing, obstacles=(), *, step: int = 0,
                       check_start: bool = True, check_end: bool = True) -> Optional[Violation]:
    """None if the linear morph a -> b is planar and avoids the obstacles throughout."""
    if a.graph.n != b.graph.n:
        raise MorphError("drawings over different vertex sets")
    obs = _Obstacles.of(obstacles)
    if check_start:
        v = _endpoint_violation(a, obs.pts, None, step, 0)
        if v:
            return v
    pa, pb = a.pos, b.pos
    if check_end:
        v = _endpoint_violation(b, *_near_moved(a, b, obs), step, 1)
        if v:
            return v
    n = a.graph.n
    moving = [v for v in range(n) if pa[v] != pb[v]]
    if not moving:
        return None
    is_moving = [False] * n
    for v in moving:
        is_moving[v] = True
    edges = a.graph.edges
    best = _Best()
    vbox = {v: fbox((pa[v], pb[v])) for v in moving}

    # vertex-vertex and obstacle-vertex
    for idx, w in enumerate(moving):
        bw = vbox[w]
        for x in moving[idx + 1:]:
            if boxes_overlap(bw, vbox[x]):
                t = _first_meeting(pa[w], pb[w], pa[x], pb[x])
                if t is not None:
                    best.offer(t, "vertex-vertex", (w, x))
        for x in sorted(_stationary_vertices_near(a, bw)):
            if is_moving[x]:
                continue
            t = _first_meeting(pa[w], pb[w], pa[x], pa[x])
            if t is not None:
                best.offer(t, "vertex-vertex", (min(w, x), max(w, x)))
        for k in obs.near(bw):
            o = obs.pts[k]
            t = _first_meeting(pa[w], pb[w], o, o)
            if t is not None:
                best.offer(t, "obstacle-on-vertex", (k, w))

    moving_edges = [i for i, (u, v) in enumerate(edges) if is_moving[u] or is_moving[v]]
    for i in moving_edges:
        u, v = edges[i]
        box = fbox((pa[u], pb[u], pa[v], pb[v]))
        for k in obs.near(box):
            o = obs.pts[k]
            r = _first_contact(o, o, pa[u], pb[u], pa[v], pb[v])
            if r is not None:
                if r[1]:
                    best.offer(r[0], "permanent-collinearity-overlap", ("obstacle", k, u, v))
                else:
                    best.offer(r[0], "obstacle-on-edge", (k, u, v))
        cand = set(_stationary_vertices_near(a, box))
        cand.update(x for x in moving if boxes_overlap(box, vbox[x]))
        for w in sorted(cand):
            if w == u or w == v:
                continue
            r = _first_contact(pa[w], pb[w], pa[u], pb[u], pa[v], pb[v])
            if r is not None:
                if r[1]:
                    best.offer(r[0], "permanent-collinearity-overlap", ("vertex", w, u, v))
                else:
                    best.offer(r[0], "vertex-on-edge", (w, u, v))
    # stationary edges against moving vertices
    grid = a.edge_grid
    for w in moving:
        for i in sorted(grid.query(vbox[w])):
            u, v = edges[i]
            if is_moving[u] or is_moving[v] or w == u or w == v:
                continue
            r = _first_contact(pa[w], pb[w], pa[u], pa[u], pa[v], pa[v])
            if r is not None:
                if r[1]:
                    best.offer(r[0], "permanent-collinearity-overlap", ("vertex", w, u, v))
                else:
                    best.offer(r[0], "vertex-on-edge", (w, u, v))
    if best.item is None:
        return None
    t, kind, ent = best.item
    return Violation(kind, step, t, ent)


def _near_moved(a: Drawing, b: Drawing, obs: "_Obstacles"):
    """Obstacles that could touch b but not a: those near edges or vertices that moved.

    Only sound when a itself avoids the obstacles; the start of every step is
    checked (or is the previous step's checked end).
    """
    pa, pb = a.pos, b.pos
    moved = [v for v in range(a.graph.n) if pa[v] != pb[v]]
    if len(moved) * 4 > a.graph.n or len(obs.pts) < 256:
        return obs.pts, None
    is_moved = set(moved)
    ks = set()
    for v in moved:
        ks.update(obs.grid.query(fbox((pb[v],))))
    for u, v in a.graph.edges:
        if u in is_moved or v in is_moved:
            ks.update(obs.grid.query(fbox((pb[u], pb[v]))))
    ks = sorted(ks)
    return [obs.pts[k] for k in ks], ks


def _stationary_vertices_near(d: Drawing, box):
    grid = getattr(d, "_vertex_grid", None)
    if grid is None:
        grid = GridIndex([fbox((p,)) for p in d.pos])
        object.__setattr__(d, "_vertex_grid", grid)
    return grid.query(box)


def verify_morph(m: Morph, obstacles=()) -> Optional[Violation]:
    """None if every step of the morph is valid; otherwise the first violation."""
    if not m.drawings:
        raise MorphError("empty morph")
    obs = _Obstacles.of(obstacles)
    v = _endpoint_violation(m.drawings[0], obs.pts, None, 0, 0)
    if v:
        return v
    for i in range(m.steps):
        v = verify_linear_step(m.drawings[i], m.drawings[i + 1], obs, step=i,
                               check_start=False, check_end=True)
        if v:
            return v
    return None


def confirm_violation(v: Violation, a: Drawing, b: Drawing, obstacles=()) -> bool:
    """Re-evaluate the contact predicate of a violation at its witness time."""
    t = v.time
    obstacles = tuple(obstacles)

    def at(p):
        return position_at(a.pos[p], b.pos[p], t)

    if v.kind == "vertex-vertex":
        x, y = at(v.entities[0]), at(v.entities[1])
        return qsign(x[0] - y[0]) == 0 and qsign(x[1] - y[1]) == 0
    if v.kind == "obstacle-on-vertex":
        o = obstacles[v.entities[0]]
        x = at(v.entities[1])
        return qsign(x[0] - o[0]) == 0 and qsign(x[1] - o[1]) == 0
    if v.kind in ("vertex-on-edge", "obstacle-on-edge", "permanent-collinearity-overlap"):
        ent = v.entities
        if v.kind == "permanent-collinearity-overlap":
            on_obstacle = ent[0] == "obstacle"
            ent = ent[1:]
        else:
            on_obstacle = v.kind == "obstacle-on-edge"
        w, u, x = ent
        pw = obstacles[w] if on_obstacle else at(w)
        return on_segment_field(pw, at(u), at(x))
    if v.kind == "invalid-endpoint-drawing":
        return True
    raise ValueError(v.kind)


# --------------------------------------------------------------------------
# sampling oracle


@dataclass(frozen=True)
class SampleHit:
    sample: int
    time: Fraction
    kind: str
    entities: tuple


def _int_tracks(a: Drawing, b: Drawing, obstacles, samples: int):
    dens = [1]
    for p in list(a.pos) + list(b.pos) + list(obstacles):
        for c in p:
            if isinstance(c, Fraction):
                dens.append(c.denominator)
    D = lcm(*dens)
    k = np.arange(samples + 1, dtype=object)
    X, Y = [], []
    for p, q in zip(a.pos, b.pos):
        x0, y0 = int(p[0] * D) * samples, int(p[1] * D) * samples
        dx, dy = int((q[0] - p[0]) * D), int((q[1] - p[1]) * D)
        X.append(x0 + k * dx)
        Y.append(y0 + k * dy)
    O = [(int(o[0] * D) * samples, int(o[1] * D) * samples) for o in obstacles]
    bound = max([abs(int(v)) for arr in X + Y for v in (arr[0], arr[-1])] +
                [abs(c) for o in O for c in o] + [1])
    if bound < 2 ** 30:
        X = [np.asarray(x, dtype=np.int64) for x in X]
        Y = [np.asarray(y, dtype=np.int64) for y in Y]
    return X, Y, O


def sample_check(a: Drawing, b: Drawing, obstacles=(), samples: int = 10_000) -> Optional[SampleHit]:
    """Check the interpolated drawing at t = k/samples, k = 0..samples.

    Sound for the violations it reports, incomplete otherwise.  Uses scaled
    integer coordinates, so every sample test is exact.
    """
    obstacles = tuple(obstacles)
    X, Y, O = _int_tracks(a, b, obstacles, samples)
    edges = a.graph.edges
    n = a.graph.n
    hits = []

    def record(mask, kind, ent):
        idx = np.nonzero(mask)[0]
        if len(idx):
            hits.append((int(idx[0]), kind, ent))

    def orient(ax, ay, bx, by, cx, cy):
        return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)

    for v in range(n):
        for w in range(v + 1, n):
            record((X[v] == X[w]) & (Y[v] == Y[w]), "vertex-vertex", (v, w))
        for k, (ox, oy) in enumerate(O):
            record((X[v] == ox) & (Y[v] == oy), "obstacle-on-vertex", (k, v))
    for (u, v) in edges:
        for w in range(n):
            if w == u or w == v:
                continue
            o = orient(X[u], Y[u], X[v], Y[v], X[w], Y[w])
            dp = (X[u] - X[w]) * (X[v] - X[w]) + (Y[u] - Y[w]) * (Y[v] - Y[w])
            record((o == 0) & (dp <= 0), "vertex-on-edge", (w, u, v))
        for k, (ox, oy) in enumerate(O):
            o = orient(X[u], Y[u], X[v], Y[v], ox, oy)
            dp = (X[u] - ox) * (X[v] - ox) + (Y[u] - oy) * (Y[v] - oy)
            record((o == 0) & (dp <= 0), "obstacle-on-edge", (k, u, v))
    for i, (u, v) in enumerate(edges):
        for (x, y) in edges[i + 1:]:
            if len({u, v, x, y}) < 4:
                continue
            o1 = np.sign(orient(X[u], Y[u], X[v], Y[v], X[x], Y[x]))
            o2 = np.sign(orient(X[u], Y[u], X[v], Y[v], X[y], Y[y]))
            o3 = np.sign(orient(X[x], Y[x], X[y], Y[y], X[u], Y[u]))
            o4 = np.sign(orient(X[x], Y[x], X[y], Y[y], X[v], Y[v]))
            record((o1 * o2 < 0) & (o3 * o4 < 0), "edge-crossing", (u, v, x, y))
    if not hits:
        return None
    hits.sort(key=lambda h: (h[0], h[1], h[2]))
    s, kind, ent = hits[0]
    return SampleHit(s, Fraction(s, samples), kind, ent)
