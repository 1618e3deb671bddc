"""Breadth-first search for single-vertex grid morphs on tiny instances.

A not-found result only says that no morph exists whose intermediate
drawings keep the movable vertices on the chosen grid and move one vertex
per step.  It is not evidence about continuous morphs.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numba
import numpy as np

from .drawing import Drawing, Instance, obstacle_issues, validate_drawing
from .exact import Point, qnorm
from .verify import Morph, verify_morph

MAX_MOVABLE = 6
NOT_CERTIFIED = ("not-found-at-resolution: no single-vertex grid morph exists at this resolution; "
                 "this is not a proof that the instance is blocked")
THREADS_ENV = "OBSMORPH_THREADS"
_COORD_LIMIT = 1 << 29


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class GridConfig:
    """Grid points are origin + pitch * (i, j) for 0 <= i <= width, 0 <= j <= height."""

    origin: Point
    pitch: Fraction
    width: int
    height: int
    movable: tuple[int, ...]
    any_point: bool = False

    def __post_init__(self):
        if self.pitch <= 0:
            raise GridError("pitch must be positive")
        if self.width < 1 or self.height < 1:
            raise GridError("grid needs at least one cell per axis")
        if len(self.movable) > MAX_MOVABLE:
            raise GridError(f"at most {MAX_MOVABLE} movable vertices")
        if len(set(self.movable)) != len(self.movable):
            raise GridError("movable vertices repeat")

    @property
    def points_per_row(self) -> int:
        return self.width + 1

    @property
    def point_count(self) -> int:
        return (self.width + 1) * (self.height + 1)

    def index_of(self, p) -> Optional[int]:
        i = (Fraction(p[0]) - self.origin[0]) / self.pitch
        j = (Fraction(p[1]) - self.origin[1]) / self.pitch
        if i.denominator != 1 or j.denominator != 1:
            return None
        i, j = int(i), int(j)
        if not (0 <= i <= self.width and 0 <= j <= self.height):
            return None
        return i + j * self.points_per_row

    def point(self, idx: int) -> Point:
        i, j = idx % self.points_per_row, idx // self.points_per_row
        return Point(qnorm(self.origin[0] + self.pitch * i), qnorm(self.origin[1] + self.pitch * j))


@dataclass(frozen=True)
class SearchResult:
    found: bool
    morph: Optional[Morph]
    states_explored: int
    frontier_peak: int
    config: GridConfig = field(repr=False)

    @property
    def outcome(self) -> str:
        return "found" if self.found else "not-found-at-resolution"

    def to_json(self) -> dict:
        c = self.config
        out = {
            "outcome": self.outcome,
            "states_explored": self.states_explored,
            "frontier_peak": self.frontier_peak,
            "grid": {"width": c.width, "height": c.height, "pitch": str(c.pitch),
                     "origin": [str(c.origin[0]), str(c.origin[1])],
                     "movable": list(c.movable), "moves": "any-point" if c.any_point else "8-neighbour"},
        }
        if self.found:
            out["steps"] = self.morph.steps
        else:
            out["disclaimer"] = NOT_CERTIFIED
        return out


def canonical_state_key(indices, point_count: int) -> int:
    """Mixed-radix integer of the movable vertices' grid indices, in movable order."""
    key = 0
    for i in reversed(indices):
        if not 0 <= i < point_count:
            raise GridError("grid index out of range")
        key = key * point_count + int(i)
    return key


def _decode(key: int, k: int, point_count: int) -> list[int]:
    out = []
    for _ in range(k):
        key, r = divmod(key, point_count)
        out.append(r)
    return out


# exact integer predicates; callers keep |coordinates| below _COORD_LIMIT

@numba.njit(cache=True)
def _orient(ax, ay, bx, by, cx, cy):
    d = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    return (d > 0) - (d < 0)


@numba.njit(cache=True)
def _on_seg(px, py, ax, ay, bx, by):
    if _orient(ax, ay, bx, by, px, py) != 0:
        return False
    return min(ax, bx) <= px <= max(ax, bx) and min(ay, by) <= py <= max(ay, by)


@numba.njit(cache=True)
def _seg_meet(ax, ay, bx, by, cx, cy, dx, dy):
    o1 = _orient(ax, ay, bx, by, cx, cy)
    o2 = _orient(ax, ay, bx, by, dx, dy)
    o3 = _orient(cx, cy, dx, dy, ax, ay)
    o4 = _orient(cx, cy, dx, dy, bx, by)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    return (_on_seg(cx, cy, ax, ay, bx, by) or _on_seg(dx, dy, ax, ay, bx, by)
            or _on_seg(ax, ay, cx, cy, dx, dy) or _on_seg(bx, by, cx, cy, dx, dy))


@numba.njit(cache=True)
def _in_tri(px, py, ax, ay, bx, by, cx, cy):
    if _orient(ax, ay, bx, by, cx, cy) == 0:
        return (_on_seg(px, py, ax, ay, bx, by) or _on_seg(px, py, bx, by, cx, cy)
                or _on_seg(px, py, cx, cy, ax, ay))
    o1 = _orient(ax, ay, bx, by, px, py)
    o2 = _orient(bx, by, cx, cy, px, py)
    o3 = _orient(cx, cy, ax, ay, px, py)
    return (o1 >= 0 and o2 >= 0 and o3 >= 0) or (o1 <= 0 and o2 <= 0 and o3 <= 0)


@numba.njit(cache=True)
def _seg_meets_tri(px, py, qx, qy, ax, ay, bx, by, cx, cy):
    if _in_tri(px, py, ax, ay, bx, by, cx, cy) or _in_tri(qx, qy, ax, ay, bx, by, cx, cy):
        return True
    return (_seg_meet(px, py, qx, qy, ax, ay, bx, by) or _seg_meet(px, py, qx, qy, bx, by, cx, cy)
            or _seg_meet(px, py, qx, qy, cx, cy, ax, ay))


@numba.njit(cache=True)
def _in_cone(dx, dy, ux, uy, wx, wy):
    """Direction d lies in the closed convex cone spanned by u and w (u, w not opposite)."""
    c = ux * wy - uy * wx
    if c > 0:
        return ux * dy - uy * dx >= 0 and dx * wy - dy * wx >= 0
    if c < 0:
        return wx * dy - wy * dx >= 0 and dx * uy - dy * ux >= 0
    # u and w parallel; same sense since the triangle does not contain its apex in the base
    return ux * dy - uy * dx == 0 and ux * dx + uy * dy > 0


@numba.njit(cache=True)
def move_is_valid(pos, v, bx, by, eu, ev, nptr, nbr, obs):
    """Exact check of the linear step moving only vertex v to (bx, by).

    The start drawing must be valid.  Covers every event of the step: v on an
    obstacle, vertex or edge; a moving edge sweeping over an obstacle, a
    vertex or a stationary edge; two edges at v overlapping.
    """
    ax, ay = pos[v, 0], pos[v, 1]
    if ax == bx and ay == by:
        return False
    n = pos.shape[0]
    for k in range(obs.shape[0]):
        if _on_seg(obs[k, 0], obs[k, 1], ax, ay, bx, by):
            return False
    for w in range(n):
        if w != v and _on_seg(pos[w, 0], pos[w, 1], ax, ay, bx, by):
            return False
    for e in range(eu.shape[0]):
        y, z = eu[e], ev[e]
        if y == v or z == v:
            continue
        if _seg_meet(ax, ay, bx, by, pos[y, 0], pos[y, 1], pos[z, 0], pos[z, 1]):
            return False
    for t in range(nptr[v], nptr[v + 1]):
        x = nbr[t]
        xx, xy = pos[x, 0], pos[x, 1]
        for k in range(obs.shape[0]):
            if _in_tri(obs[k, 0], obs[k, 1], ax, ay, bx, by, xx, xy):
                return False
        for w in range(n):
            if w != v and w != x and _in_tri(pos[w, 0], pos[w, 1], ax, ay, bx, by, xx, xy):
                return False
        for e in range(eu.shape[0]):
            y, z = eu[e], ev[e]
            if y == v or z == v:
                continue
            if y == x or z == x:
                o = z if y == x else y
                if _in_cone(pos[o, 0] - xx, pos[o, 1] - xy, ax - xx, ay - xy, bx - xx, by - xy):
                    return False
            elif _seg_meets_tri(pos[y, 0], pos[y, 1], pos[z, 0], pos[z, 1], ax, ay, bx, by, xx, xy):
                return False
        for s in range(t + 1, nptr[v + 1]):
            x2 = nbr[s]
            x2x, x2y = pos[x2, 0], pos[x2, 1]
            # v crossing the line through both neighbours outside their segment
            oa = _orient(xx, xy, x2x, x2y, ax, ay)
            ob = _orient(xx, xy, x2x, x2y, bx, by)
            if oa * ob < 0:
                if _orient(ax, ay, bx, by, xx, xy) * _orient(ax, ay, bx, by, x2x, x2y) > 0:
                    return False
            elif ob == 0:
                if not _on_seg(bx, by, xx, xy, x2x, x2y):
                    return False
    return True


@numba.njit(cache=True)
def _expand(base, movable, state, grid_x, grid_y, nrow, ncol, any_point, eu, ev, nptr, nbr, obs, out):
    """Write successor (vertex slot, grid index) pairs of one state into out; return their count."""
    pos = base.copy()
    k = movable.shape[0]
    for s in range(k):
        pos[movable[s], 0] = grid_x[state[s] % nrow]
        pos[movable[s], 1] = grid_y[state[s] // nrow]
    cnt = 0
    for s in range(k):
        v = movable[s]
        i0, j0 = state[s] % nrow, state[s] // nrow
        if any_point:
            ilo, ihi, jlo, jhi = 0, nrow - 1, 0, ncol - 1
        else:
            ilo, ihi = max(i0 - 1, 0), min(i0 + 1, nrow - 1)
            jlo, jhi = max(j0 - 1, 0), min(j0 + 1, ncol - 1)
        for j in range(jlo, jhi + 1):
            for i in range(ilo, ihi + 1):
                if i == i0 and j == j0:
                    continue
                if move_is_valid(pos, v, grid_x[i], grid_y[j], eu, ev, nptr, nbr, obs):
                    out[cnt, 0] = s
                    out[cnt, 1] = i + j * nrow
                    cnt += 1
    return cnt


def _threads():
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            numba.set_num_threads(max(1, min(int(raw), numba.config.NUMBA_NUM_THREADS)))
        except ValueError:
            raise GridError(f"{THREADS_ENV} must be an integer")


def _scale(inst: Instance, cfg: GridConfig) -> int:
    dens = [Fraction(cfg.pitch).denominator, Fraction(cfg.origin[0]).denominator,
            Fraction(cfg.origin[1]).denominator]
    for p in list(inst.start.pos) + list(inst.obstacles):
        dens += [Fraction(p[0]).denominator, Fraction(p[1]).denominator]
    return math.lcm(*dens)


def _int(x: Fraction, s: int) -> int:
    y = Fraction(x) * s
    assert y.denominator == 1
    return int(y)


def grid_search_morph(inst: Instance, cfg: GridConfig, *, max_states: Optional[int] = None) -> SearchResult:
    """Breadth-first search over single-vertex moves of the movable vertices.

    Searches from both ends at once.  Found morphs use the minimum number of
    moves and are verified exactly; a not-found result means one side's
    reachable set was exhausted.
    """
    g = inst.graph
    obstacles = tuple(inst.obstacles)
    if any(not 0 <= v < g.n for v in cfg.movable):
        raise GridError("movable vertex out of range")
    for d in (inst.start, inst.end):
        issues = validate_drawing(d) or obstacle_issues(d, obstacles)
        if issues:
            raise GridError(f"invalid endpoint drawing: {issues[0].kind}")
    for v in range(g.n):
        if v not in cfg.movable and inst.start.pos[v] != inst.end.pos[v]:
            raise GridError(f"pinned vertex {v} differs between start and end")
    start_idx, end_idx = [], []
    for v in cfg.movable:
        a, b = cfg.index_of(inst.start.pos[v]), cfg.index_of(inst.end.pos[v])
        if a is None or b is None:
            raise GridError(f"vertex {v} is not on the grid")
        start_idx.append(a)
        end_idx.append(b)
    npts = cfg.point_count
    if inst.start.pos == inst.end.pos:
        return SearchResult(True, Morph(g, (inst.start,)), 1, 1, cfg)

    s = _scale(inst, cfg)
    base = np.array([[_int(p[0], s), _int(p[1], s)] for p in inst.start.pos], dtype=np.int64).reshape(-1, 2)
    obs = np.array([[_int(p[0], s), _int(p[1], s)] for p in obstacles], dtype=np.int64).reshape(-1, 2)
    grid_x = np.array([_int(cfg.origin[0] + cfg.pitch * i, s) for i in range(cfg.width + 1)], dtype=np.int64)
    grid_y = np.array([_int(cfg.origin[1] + cfg.pitch * j, s) for j in range(cfg.height + 1)], dtype=np.int64)
    big = max([abs(int(x)) for arr in (base, obs, grid_x, grid_y) for x in arr.ravel()] + [0])
    if 2 * big >= _COORD_LIMIT:
        raise GridError("coordinates too large for the integer move check; coarsen the grid")
    eu = np.array([e[0] for e in g.edges], dtype=np.int64)
    ev = np.array([e[1] for e in g.edges], dtype=np.int64)
    nptr = np.zeros(g.n + 1, dtype=np.int64)
    nbr_list = []
    for v in range(g.n):
        nbr_list.extend(g.adj[v])
        nptr[v + 1] = len(nbr_list)
    nbr = np.array(nbr_list, dtype=np.int64)
    movable = np.array(cfg.movable, dtype=np.int64)
    _threads()

    k = len(cfg.movable)
    weights = [npts ** i for i in range(k)]
    out = np.zeros((k * (npts if cfg.any_point else 8), 2), dtype=np.int64)

    def successors(key):
        state = _decode(key, k, npts)
        cnt = _expand(base, movable, np.array(state, dtype=np.int64), grid_x, grid_y,
                      cfg.width + 1, cfg.height + 1, cfg.any_point, eu, ev, nptr, nbr, obs, out)
        return [key + (target - state[slot]) * weights[slot] for slot, target in out[:cnt].tolist()]

    # bidirectional BFS; linear steps are reversible, so both sides use the same move set
    start_key = canonical_state_key(start_idx, npts)
    end_key = canonical_state_key(end_idx, npts)
    sides = [({start_key: (-1, 0)}, [start_key]), ({end_key: (-1, 0)}, [end_key])]
    peak = 1
    meet = None
    while sides[0][1] and sides[1][1]:
        i = 0 if len(sides[0][1]) <= len(sides[1][1]) else 1
        seen, frontier = sides[i]
        other = sides[1 - i][0]
        nxt = []
        best = None
        for key in frontier:
            depth = seen[key][1] + 1
            for child in successors(key):
                if child in seen:
                    continue
                seen[child] = (key, depth)
                nxt.append(child)
                if child in other:
                    total = depth + other[child][1]
                    if best is None or (total, child) < best:
                        best = (total, child)
            if max_states is not None and len(seen) + len(other) > max_states:
                raise GridError("state budget exhausted")
        nxt.sort()
        sides[i] = (seen, nxt)
        peak = max(peak, len(nxt))
        if best is not None:
            meet = best[1]
            break
    explored = len(sides[0][0]) + len(sides[1][0]) - (meet is not None)
    if start_key == end_key:
        meet = start_key
    if meet is None:
        return SearchResult(False, None, explored, peak, cfg)

    def trace(seen, key):
        path = [key]
        while seen[path[-1]][0] != -1:
            path.append(seen[path[-1]][0])
        return path

    chain = trace(sides[0][0], meet)[::-1] + trace(sides[1][0], meet)[1:]
    drawings = []
    for key in chain:
        pos = list(inst.start.pos)
        for v, idx in zip(cfg.movable, _decode(key, k, npts)):
            pos[v] = cfg.point(idx)
        drawings.append(Drawing(g, tuple(pos)))
    m = Morph(g, tuple(drawings))
    bad = verify_morph(m, obstacles)
    if bad is not None:
        raise AssertionError(f"grid morph failed exact verification: {bad}")
    return SearchResult(True, m, explored, peak, cfg)
