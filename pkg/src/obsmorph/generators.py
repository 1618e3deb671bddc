"""Seeded random instances for tests, benchmarks and the acceptance suite."""
from __future__ import annotations

import math
import random
from fractions import Fraction

from .drawing import (Drawing, PlaneGraph, PointOnDrawing, cycle_graph, locate_point, obstacle_issues,
                      shifted, validate_drawing)
from .exact import Point

GRID = 256


def snap(x: float, q: int = GRID) -> Fraction:
    return Fraction(round(x * q), q)


def random_point(rng: random.Random, box: float, q: int = GRID) -> Point:
    return Point(snap(rng.uniform(0, box), q), snap(rng.uniform(0, box), q))


def random_obstacles(rng: random.Random, drawings, k: int, box: float, q: int = 8) -> tuple:
    out = []
    while len(out) < k:
        p = random_point(rng, box, q)
        if p in out:
            continue
        if all(not obstacle_issues(d, [p]) for d in drawings):
            out.append(p)
    return tuple(out)


def random_parents(rng: random.Random, n: int, p_new_tree: float = 0.2) -> list[int]:
    """Parent array of a random forest on 0..n-1 (roots have parent -1)."""
    parent = [-1]
    for v in range(1, n):
        parent.append(-1 if rng.random() < p_new_tree else rng.randrange(v))
    return parent


def _place_tree(rng, parent, root, center, budget, pos):
    kids = {}
    for v, p in enumerate(parent):
        if p >= 0:
            kids.setdefault(p, []).append(v)

    def place(v, x, lo, hi, r):
        pos[v] = x
        cs = kids.get(v, [])
        if not cs:
            return
        width = (hi - lo) / len(cs)
        for i, c in enumerate(cs):
            a = lo + width * (i + rng.uniform(0.3, 0.7))
            ell = r * rng.uniform(0.5, 1.0)
            cx = x[0] + ell * math.cos(a)
            cy = x[1] + ell * math.sin(a)
            half = min(width / 2, math.pi / 2)
            sub = ell * math.sin(half) / 3
            # the child's own wedge excludes the direction back to v
            back = a + math.pi
            place(c, (cx, cy), back + 0.3, back + 2 * math.pi - 0.3, sub)

    start = rng.uniform(0, 2 * math.pi)
    place(root, center, start, start + 2 * math.pi, budget)


def random_forest_drawings(rng: random.Random, n: int, box: float = 32.0, tries: int = 200):
    """Two drawings of one random plane forest with matching rotation systems.

    Trees occupy disjoint grid cells, permuted between the two drawings, so
    the trees have to travel.
    """
    parent = random_parents(rng, n)
    edges = tuple((p, v) for v, p in enumerate(parent) if p >= 0)
    roots = [v for v in range(n) if parent[v] < 0]
    side = math.ceil(math.sqrt(len(roots)))
    cell = box / side
    for _ in range(tries):
        draws = []
        cells = rng.sample(range(side * side), len(roots))
        for phase in range(2):
            if phase == 1:
                cells = rng.sample(range(side * side), len(roots))
            fpos = [None] * n
            for r, c in zip(roots, cells):
                cx, cy = (c % side + 0.5) * cell, (c // side + 0.5) * cell
                _place_tree(rng, parent, r, (cx, cy), cell * 0.45, fpos)
            draws.append([Point(snap(x), snap(y)) for x, y in fpos])
        g = PlaneGraph.from_coordinates(n, edges, draws[0])
        d1, d2 = Drawing(g, draws[0]), Drawing(g, draws[1])
        if not validate_drawing(d1) and not validate_drawing(d2):
            return g, d1, d2
    raise RuntimeError("could not sample a forest pair")


def random_convex_ish_cycle(rng: random.Random, n: int, box: float = 32.0, tries: int = 500):
    """A star-shaped polygon drawing of C_n inside the box."""
    c = box / 2
    for _ in range(tries):
        angles = sorted(rng.uniform(0, 2 * math.pi) for _ in range(n))
        pts = [Point(snap(c + rng.uniform(0.3, 0.95) * c * math.cos(a)),
                     snap(c + rng.uniform(0.3, 0.95) * c * math.sin(a))) for a in angles]
        g = cycle_graph(n, pts)
        d = Drawing(g, pts)
        if not validate_drawing(d):
            return g, d
    raise RuntimeError("could not sample a cycle")


def random_cycle_with_free_vertex(rng: random.Random, n: int, box: float = 32.0, tries: int = 500):
    """A C_n drawing in which vertex 0 sits on the segment joining its neighbours."""
    if n < 4:
        raise ValueError("a free vertex needs a cycle of length at least 4")
    for _ in range(tries):
        g, d = random_convex_ish_cycle(rng, n, box)
        a, b = g.adj[0]
        lam = Fraction(rng.randint(1, 7), 8)
        p = d.pos[a] + (d.pos[b] - d.pos[a]) * lam
        d2 = d.replace({0: p})
        if not validate_drawing(d2):
            return g, d2
    raise RuntimeError("could not plant a free vertex")


def random_shift_instance(rng: random.Random, n: int, k_obstacles: int, box: float = 32.0):
    g, d = random_cycle_with_free_vertex(rng, n, box)
    offset = rng.randrange(1, n)
    obs = random_obstacles(rng, [d], k_obstacles, box)
    return g, d, shifted(d, offset), obs, offset


def random_step(rng: random.Random, max_vertices: int = 8, max_obstacles: int = 6, box: int = 32,
                q: int = 4):
    """A random valid drawing, a random target drawing and random obstacles.

    Targets are arbitrary, so roughly half of the steps contain violations.
    """
    while True:
        n = rng.randint(2, max_vertices)
        pts = []
        while len(pts) < n:
            p = random_point(rng, box, q)
            if p not in pts:
                pts.append(p)
        edges = []
        cand = [(u, v) for u in range(n) for v in range(u + 1, n)]
        rng.shuffle(cand)
        for (u, v) in cand[:rng.randint(1, len(cand))]:
            trial = edges + [(u, v)]
            g = PlaneGraph.from_coordinates(n, tuple(trial), pts)
            try:
                ok = not validate_drawing(Drawing(g, pts))
            except Exception:
                ok = False
            if ok:
                edges = trial
        g = PlaneGraph.from_coordinates(n, tuple(edges), pts)
        a = Drawing(g, pts)
        movers = rng.sample(range(n), rng.randint(1, n))
        b = a.replace({v: random_point(rng, box, q) if rng.random() < 0.5 else
                       a.pos[v] + Point(snap(rng.uniform(-3, 3), q), snap(rng.uniform(-3, 3), q))
                       for v in movers})
        obs = []
        for _ in range(rng.randint(0, max_obstacles)):
            p = random_point(rng, box, q)
            if not obstacle_issues(a, [p]) and p not in obs:
                obs.append(p)
        return a, b, tuple(obs)


def point_face(d: Drawing, p):
    try:
        return locate_point(d, p)
    except PointOnDrawing:
        return None


def _random_triangle(rng: random.Random, box: float, q: int, orient: int):
    from .exact import orientation
    while True:
        pts = [random_point(rng, box, q) for _ in range(3)]
        s = orientation(*pts)
        if s == 0:
            continue
        if s != orient:
            pts[1], pts[2] = pts[2], pts[1]
        return tuple(pts)


def random_triangle_instance(rng: random.Random, inside: int, outside: int, box: float = 32.0,
                             q: int = 8, tries: int = 2000):
    """Two triangle drawings and obstacles, `inside` of them in both triangles and `outside` in neither."""
    from .drawing import Instance
    from .triangle import strictly_inside
    orient = rng.choice((1, -1))
    for _ in range(tries):
        t1 = _random_triangle(rng, box, q, orient)
        t2 = _random_triangle(rng, box, q, orient)
        obs = []
        for _ in range(200):
            if len(obs) == inside:
                break
            p = random_point(rng, box, q)
            if strictly_inside(t1, p) and strictly_inside(t2, p) and p not in obs:
                obs.append(p)
        if len(obs) < inside:
            continue
        for _ in range(200):
            if len(obs) == inside + outside:
                break
            p = random_point(rng, box * 1.25, q) - Point(box / 8, box / 8)
            p = Point(snap(p[0], q), snap(p[1], q))
            if not strictly_inside(t1, p) and not strictly_inside(t2, p) and p not in obs:
                d1 = Drawing(cycle_graph(3, t1), t1)
                d2 = Drawing(d1.graph, t2)
                if not obstacle_issues(d1, [p]) and not obstacle_issues(d2, [p]):
                    obs.append(p)
        if len(obs) < inside + outside:
            continue
        g = cycle_graph(3, t1)
        return Instance(g, Drawing(g, t1), Drawing(g, t2), tuple(obs))
    raise RuntimeError("could not sample a triangle instance")
