"""Plane graphs, straight-line drawings and obstacle sets."""
from __future__ import annotations

import functools
import random

import numpy as np
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

from ._index import GridIndex, boxes_overlap, fbox
from .exact import (Intersection, Point, cross, dot, on_segment, orientation, qnorm,
                    segments_intersect, sgn)

Dart = tuple[int, int]


class GraphError(ValueError):
    pass


class NonPlanarRotation(GraphError):
    pass


class PointOnDrawing(ValueError):
    pass


class NotACycle(GraphError):
    pass


def _half(v) -> int:
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def _angle_cmp(a, b) -> int:
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return ha - hb
    return -sgn(cross(a, b))


def ccw_sorted(center, items, pos_of):
    """Sort items counterclockwise by the direction pos_of(item) - center."""
    def cmp(i, j):
        a = pos_of(i)
        b = pos_of(j)
        return _angle_cmp((a[0] - center[0], a[1] - center[1]),
                          (b[0] - center[0], b[1] - center[1]))
    return sorted(items, key=functools.cmp_to_key(cmp))


def _cyclic_equal(a: Sequence, b: Sequence) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    try:
        k = list(b).index(a[0])
    except ValueError:
        return False
    return all(a[i] == b[(i + k) % len(b)] for i in range(len(a)))


@dataclass(frozen=True)
class Face:
    id: Dart
    darts: tuple[Dart, ...]

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(u for u, _ in self.darts)


@dataclass(frozen=True, eq=False)
class PlaneGraph:
    """Simple graph with a rotation system (ccw neighbour order per vertex).

    ``outer`` is a dart on the designated outer face, or None for an
    edgeless graph.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    rotation: tuple[tuple[int, ...], ...]
    outer: Optional[Dart] = None

    def __post_init__(self):
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise GraphError(f"loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u},{v}) out of range")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphError(f"multi-edge {key}")
            seen.add(key)
        if len(self.rotation) != self.n:
            raise GraphError("rotation system must list every vertex")
        for v, rot in enumerate(self.rotation):
            if sorted(rot) != sorted(self.adj[v]):
                raise GraphError(f"rotation at {v} does not match its neighbours")
        if self.outer is not None and tuple(self.outer) not in self.dart_set:
            raise GraphError("outer face dart is not an edge")

    @cached_property
    def adj(self) -> tuple[tuple[int, ...], ...]:
        a = [[] for _ in range(self.n)]
        for u, v in self.edges:
            a[u].append(v)
            a[v].append(u)
        return tuple(tuple(sorted(x)) for x in a)

    @cached_property
    def dart_set(self) -> frozenset:
        return frozenset([(u, v) for u, v in self.edges] + [(v, u) for u, v in self.edges])

    @cached_property
    def edge_index(self) -> dict:
        return {(min(u, v), max(u, v)): i for i, (u, v) in enumerate(self.edges)}

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def next_dart(self, d: Dart) -> Dart:
        u, v = d
        rot = self.rotation[v]
        i = rot.index(u)
        return (v, rot[i - 1])

    @cached_property
    def components(self) -> list[list[int]]:
        comp = [-1] * self.n
        out = []
        for s in range(self.n):
            if comp[s] >= 0:
                continue
            stack = [s]
            comp[s] = len(out)
            members = []
            while stack:
                x = stack.pop()
                members.append(x)
                for y in self.adj[x]:
                    if comp[y] < 0:
                        comp[y] = len(out)
                        stack.append(y)
            out.append(sorted(members))
        return out

    @cached_property
    def component_of(self) -> tuple[int, ...]:
        c = [0] * self.n
        for i, members in enumerate(self.components):
            for v in members:
                c[v] = i
        return tuple(c)

    def is_connected(self) -> bool:
        return len(self.components) <= 1

    def is_forest(self) -> bool:
        return len(self.edges) == self.n - len(self.components)

    def is_cycle(self) -> bool:
        return self.n >= 3 and len(self.edges) == self.n and all(len(a) == 2 for a in self.adj) \
            and self.is_connected()

    def cycle_order(self) -> list[int]:
        """Vertices of a cycle graph in order, starting 0 -> min neighbour."""
        if not self.is_cycle():
            raise NotACycle("graph is not a cycle")
        order = [0, self.adj[0][0]]
        while len(order) < self.n:
            a, b = self.adj[order[-1]]
            order.append(b if a == order[-2] else a)
        return order

    @cached_property
    def faces(self) -> list[Face]:
        return compute_faces(self)

    @cached_property
    def face_of_dart(self) -> dict:
        out = {}
        for f in self.faces:
            for d in f.darts:
                out[d] = f.id
        return out

    @property
    def outer_face(self):
        return None if self.outer is None else self.face_of_dart[tuple(self.outer)]

    def with_isolated(self, k: int) -> "PlaneGraph":
        return PlaneGraph(self.n + k, self.edges, self.rotation + tuple(() for _ in range(k)),
                          self.outer)

    def induced_prefix(self, n: int) -> "PlaneGraph":
        """Restrict to vertices [0, n); only valid if no edge leaves the prefix."""
        edges = tuple(e for e in self.edges if e[0] < n and e[1] < n)
        if len(edges) != len(self.edges):
            raise GraphError("edges leave the prefix")
        outer = self.outer
        return PlaneGraph(n, edges, self.rotation[:n], outer)

    @staticmethod
    def from_coordinates(n: int, edges, pos) -> "PlaneGraph":
        """Derive rotation system and outer face from a straight-line drawing."""
        edges = tuple((int(u), int(v)) for u, v in edges)
        adj = [[] for _ in range(n)]
        for u, v in edges:
            adj[u].append(v)
            adj[v].append(u)
        rotation = tuple(tuple(ccw_sorted(pos[v], adj[v], lambda w: pos[w])) for v in range(n))
        outer = None
        if edges:
            # the lowest-then-leftmost vertex with an edge lies on the unbounded face
            v0 = min((v for v in range(n) if adj[v]), key=lambda v: (pos[v][1], pos[v][0]))
            # the dart leaving v0 in the direction that comes first clockwise from -x
            # all neighbours lie in the upper half-plane; the ccw-first one
            # arrives on the outer face
            w = ccw_sorted(pos[v0], adj[v0], lambda w: pos[w])[0]
            outer = (w, v0)
        return PlaneGraph(n, edges, rotation, outer)


def compute_faces(g: PlaneGraph) -> list[Face]:
    seen = set()
    faces = []
    for u, v in sorted(g.dart_set):
        if (u, v) in seen:
            continue
        darts = []
        d = (u, v)
        while d not in seen:
            seen.add(d)
            darts.append(d)
            d = g.next_dart(d)
        if d != (u, v):
            raise NonPlanarRotation("face traversal did not close")
        k = darts.index(min(darts))
        darts = darts[k:] + darts[:k]
        faces.append(Face(darts[0], tuple(darts)))
    # Euler per component: V - E + F = 2 (isolated vertices have no darts)
    fc = {}
    for f in faces:
        c = g.component_of[f.darts[0][0]]
        fc[c] = fc.get(c, 0) + 1
    ec = {}
    for u, _ in g.edges:
        c = g.component_of[u]
        ec[c] = ec.get(c, 0) + 1
    for c, members in enumerate(g.components):
        if len(members) == 1:
            continue
        if len(members) - ec.get(c, 0) + fc.get(c, 0) != 2:
            raise NonPlanarRotation(f"rotation system of component {c} violates Euler's formula")
    return faces


# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DrawingIssue:
    kind: str
    entities: tuple

    def to_json(self):
        return {"kind": self.kind, "entities": list(self.entities)}


def walk_area2(pos, darts) -> int:
    return sum(cross(pos[u], pos[v]) for u, v in darts)


@dataclass(frozen=True, eq=False)
class Drawing:
    graph: PlaneGraph
    pos: tuple[Point, ...]

    def __post_init__(self):
        if len(self.pos) != self.graph.n:
            raise GraphError("drawing must place every vertex")
        object.__setattr__(self, "pos", tuple(Point(qnorm(p[0]), qnorm(p[1])) for p in self.pos))

    def __eq__(self, other):
        return isinstance(other, Drawing) and self.pos == other.pos

    def __hash__(self):
        return hash(self.pos)

    def replace(self, moves: dict) -> "Drawing":
        pos = list(self.pos)
        for v, p in moves.items():
            pos[v] = p
        return Drawing(self.graph, tuple(pos))

    def segment(self, e):
        u, v = e
        return self.pos[u], self.pos[v]

    @cached_property
    def edge_boxes(self):
        return [fbox((self.pos[u], self.pos[v])) for u, v in self.graph.edges]

    @cached_property
    def edge_grid(self) -> GridIndex:
        return GridIndex(self.edge_boxes)

    @cached_property
    def face_geometry(self):
        """Bounded face walks as (area2, box, face) sorted innermost first."""
        out = []
        for f in self.graph.faces:
            a = walk_area2(self.pos, f.darts)
            if a > 0:
                out.append((a, fbox([self.pos[u] for u, _ in f.darts]), f))
        out.sort(key=lambda t: t[0])
        return out

    def bbox(self):
        xs = [p[0] for p in self.pos]
        ys = [p[1] for p in self.pos]
        return min(xs), min(ys), max(xs), max(ys)


def validate_drawing(d: Drawing) -> list[DrawingIssue]:
    """All violations of the drawing invariants (empty list means valid)."""
    g = d.graph
    pos = d.pos
    issues: list[DrawingIssue] = []
    where = {}
    for v, p in enumerate(pos):
        if p in where:
            issues.append(DrawingIssue("vertex-coincidence", (where[p], v)))
        else:
            where[p] = v
    if issues:
        return issues
    edges = g.edges
    for i, j in d.edge_grid.pairs():
        a, b = edges[i]
        c, e = edges[j]
        shared = {a, b} & {c, e}
        if shared:
            s = shared.pop()
            x = b if a == s else a
            y = e if c == s else c
            if on_segment(pos[x], pos[s], pos[y]) or on_segment(pos[y], pos[s], pos[x]):
                issues.append(DrawingIssue("edge-overlap", (list(edges[i]), list(edges[j]))))
            continue
        kind = segments_intersect(pos[a], pos[b], pos[c], pos[e])
        if kind == Intersection.PROPER:
            issues.append(DrawingIssue("edge-crossing", (list(edges[i]), list(edges[j]))))
        elif kind == Intersection.TOUCHING:
            issues.append(DrawingIssue("edge-touching", (list(edges[i]), list(edges[j]))))
    grid = d.edge_grid
    for v, p in enumerate(pos):
        for i in sorted(grid.query(fbox((p,)))):
            a, b = edges[i]
            if v != a and v != b and on_segment(p, pos[a], pos[b]):
                issues.append(DrawingIssue("vertex-on-edge", (v, list(edges[i]))))
    if issues:
        return issues
    for v in range(g.n):
        if len(g.rotation[v]) < 3:
            continue
        geo = ccw_sorted(pos[v], g.rotation[v], lambda w: pos[w])
        if not _cyclic_equal(list(g.rotation[v]), geo):
            issues.append(DrawingIssue("rotation-mismatch", (v,)))
    if issues:
        return issues
    if g.outer is not None:
        fid = g.outer_face
        face = next(f for f in g.faces if f.id == fid)
        if walk_area2(pos, face.darts) > 0:
            issues.append(DrawingIssue("outer-face-mismatch", (list(fid),)))
        else:
            comp = g.component_of[face.darts[0][0]]
            x = pos[face.darts[0][0]]
            for _, box, f in d.face_geometry:
                if g.component_of[f.darts[0][0]] != comp and _point_in_walk(pos, f.darts, x):
                    issues.append(DrawingIssue("outer-face-mismatch", (list(fid), list(f.id))))
                    break
    return issues


def is_valid(d: Drawing) -> bool:
    return not validate_drawing(d)


def obstacle_issues(d: Drawing, obstacles) -> list[DrawingIssue]:
    out = []
    where = {p: v for v, p in enumerate(d.pos)}
    grid = d.edge_grid
    edges = d.graph.edges
    for k, o in enumerate(obstacles):
        if o in where:
            out.append(DrawingIssue("obstacle-on-vertex", (k, where[o])))
            continue
        for i in sorted(grid.query(fbox((o,)))):
            a, b = edges[i]
            if on_segment(o, d.pos[a], d.pos[b]):
                out.append(DrawingIssue("obstacle-on-edge", (k, list(edges[i]))))
                break
    return out


# --------------------------------------------------------------------------
# point location

_RAY_DIRECTIONS = [(1000003, 1), (1, 1000033), (-999983, 7), (13, -1000037)]


def _point_in_walk(pos, darts, p, rng_seed: int = 0) -> bool:
    verts = {u for u, _ in darts}
    rng = None
    attempt = 0
    while True:
        if attempt < len(_RAY_DIRECTIONS):
            r = _RAY_DIRECTIONS[attempt]
        else:
            rng = rng or random.Random(rng_seed)
            r = (rng.randint(-10**9, 10**9), rng.randint(-10**9, 10**9))
            if r == (0, 0):
                continue
        attempt += 1
        if any(cross(r, (pos[v][0] - p[0], pos[v][1] - p[1])) == 0 for v in verts):
            continue
        inside = False
        for u, v in darts:
            a, b = pos[u], pos[v]
            ap = (a[0] - p[0], a[1] - p[1])
            bp = (b[0] - p[0], b[1] - p[1])
            s1 = sgn(cross(r, ap))
            s2 = sgn(cross(r, bp))
            if s1 == s2:
                continue
            ba = (b[0] - a[0], b[1] - a[1])
            if sgn(cross(ap, ba)) == sgn(cross(r, ba)):
                inside = not inside
        return inside


def locate_point(d: Drawing, p) -> Optional[Dart]:
    """Face of the drawing containing p (a face id, i.e. its minimal dart).

    Points in the unbounded face map to the designated outer face id.
    """
    p = Point(qnorm(p[0]), qnorm(p[1]))
    if obstacle_issues(d, [p]):
        raise PointOnDrawing(f"point {p} lies on the drawing")
    pb = fbox((p,))
    for _, box, f in d.face_geometry:
        if boxes_overlap(pb, box) and _point_in_walk(d.pos, f.darts, p):
            return f.id
    return d.graph.outer_face


def locate_points(d: Drawing, pts) -> list[Optional[Dart]]:
    """locate_point for many points at once.

    Ray parities are computed in floating point; any point whose parity
    test comes within rounding distance of a degenerate case is located
    exactly instead.
    """
    pts = [Point(qnorm(p[0]), qnorm(p[1])) for p in pts]
    bad = obstacle_issues(d, pts)
    if bad:
        raise PointOnDrawing(f"point {pts[bad[0].entities[0]]} lies on the drawing")
    out: list = [None] * len(pts)
    if not pts:
        return out
    xy = np.array([[float(p[0]), float(p[1])] for p in pts])
    todo = np.ones(len(pts), dtype=bool)
    pos = np.array([[float(p[0]), float(p[1])] for p in d.pos]) if d.pos else np.zeros((0, 2))
    rx, ry = (float(c) for c in _RAY_DIRECTIONS[0])
    for _, box, f in d.face_geometry:
        x0, y0, x1, y1 = box
        idx = np.nonzero(todo & (xy[:, 0] >= x0) & (xy[:, 0] <= x1) & (xy[:, 1] >= y0) & (xy[:, 1] <= y1))[0]
        if not len(idx):
            continue
        us = np.array([u for u, _ in f.darts])
        vs = np.array([v for _, v in f.darts])
        a, b = pos[us], pos[vs]
        scale = 1.0 + np.abs(pos[np.concatenate([us, vs])]).max() + np.abs(xy[idx]).max()
        tol = 1e-9 * scale * (abs(rx) + abs(ry))
        for chunk in np.array_split(idx, max(1, len(idx) * len(us) // 2_000_000 + 1)):
            p = xy[chunk][:, None, :]
            ap, bp = a[None] - p, b[None] - p
            c1 = rx * ap[..., 1] - ry * ap[..., 0]
            c2 = rx * bp[..., 1] - ry * bp[..., 0]
            ba = (b - a)[None]
            c3 = ap[..., 0] * ba[..., 1] - ap[..., 1] * ba[..., 0]
            c4 = np.broadcast_to(rx * ba[..., 1] - ry * ba[..., 0], c3.shape)
            shaky = ((np.abs(c1) < tol) | (np.abs(c2) < tol)
                     | ((np.sign(c1) != np.sign(c2)) & ((np.abs(c3) < tol) | (np.abs(c4) < tol)))).any(axis=1)
            hit = ((np.sign(c1) != np.sign(c2)) & (np.sign(c3) == np.sign(c4))).sum(axis=1) % 2 == 1
            for k, sh, h in zip(chunk.tolist(), shaky.tolist(), hit.tolist()):
                if sh:
                    h = _point_in_walk(d.pos, f.darts, pts[k])
                if h:
                    out[k] = f.id
                    todo[k] = False
    for k in np.nonzero(todo)[0].tolist():
        out[k] = d.graph.outer_face
    return out


def free_vertices(d: Drawing) -> set[int]:
    out = set()
    for v in range(d.graph.n):
        nb = d.graph.adj[v]
        if len(nb) != 2:
            continue
        a, b = d.pos[nb[0]], d.pos[nb[1]]
        p = d.pos[v]
        if orientation(a, p, b) == 0 and dot((a[0] - p[0], a[1] - p[1]), (b[0] - p[0], b[1] - p[1])) < 0:
            out.add(v)
    return out


def is_shifted_version(d1: Drawing, d2: Drawing) -> Optional[int]:
    """Offset o in [1, n-1] with d2[c[(i+o) % n]] == d1[c[i]] along the cycle order c."""
    order = d1.graph.cycle_order()
    n = len(order)
    for o in range(1, n):
        if all(d2.pos[order[(i + o) % n]] == d1.pos[order[i]] for i in range(n)):
            return o
    return None


def shifted(d: Drawing, offset: int) -> Drawing:
    """The shifted version of a cycle drawing with the given offset."""
    order = d.graph.cycle_order()
    n = len(order)
    pos = list(d.pos)
    for i in range(n):
        pos[order[(i + offset) % n]] = d.pos[order[i]]
    return Drawing(d.graph, tuple(pos))


# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Instance:
    graph: PlaneGraph
    start: Drawing
    end: Drawing
    obstacles: tuple[Point, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "obstacles",
                           tuple(Point(qnorm(p[0]), qnorm(p[1])) for p in self.obstacles))


@dataclass(frozen=True)
class FaceMismatch:
    obstacle: int
    start_face: Optional[Dart]
    end_face: Optional[Dart]


def check_necessary_compatibility(inst: Instance) -> list[FaceMismatch]:
    """Obstacles whose face differs between start and end (empty = ok)."""
    fa = locate_points(inst.start, inst.obstacles)
    fb = locate_points(inst.end, inst.obstacles)
    return [FaceMismatch(k, a, b) for k, (a, b) in enumerate(zip(fa, fb)) if a != b]


def cycle_graph(n: int, pos=None) -> PlaneGraph:
    """C_n on vertices 0..n-1; rotation derived from coordinates when given."""
    edges = tuple((i, (i + 1) % n) if i < (i + 1) % n else ((i + 1) % n, i) for i in range(n))
    if pos is not None:
        return PlaneGraph.from_coordinates(n, edges, pos)
    rotation = tuple(tuple(sorted(((i - 1) % n, (i + 1) % n))) for i in range(n))
    return PlaneGraph(n, edges, rotation, (1, 0))
