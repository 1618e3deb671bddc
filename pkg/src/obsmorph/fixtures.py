"""Canonical blocked and counterexample instances.

All coordinates are exact rationals chosen so that every obstacle lies in
the same face of both drawings and both drawings are valid; each generator
re-checks this before returning.
"""
from __future__ import annotations

import math
from fractions import Fraction

from .drawing import (Drawing, Instance, check_necessary_compatibility, cycle_graph, free_vertices,
                      obstacle_issues, shifted, validate_drawing)
from .exact import P, Point, orientation
from .generators import point_face


class FixtureError(ValueError):
    pass


def _checked(inst: Instance) -> Instance:
    for d in (inst.start, inst.end):
        issues = validate_drawing(d) or obstacle_issues(d, inst.obstacles)
        if issues:
            raise AssertionError(f"fixture drawing invalid: {issues[0]}")
    if check_necessary_compatibility(inst):
        raise AssertionError("fixture obstacle changes face")
    return inst


def _pts(*xy) -> tuple[Point, ...]:
    return tuple(P(x, y) for x, y in xy)


def gen_blocked_c4_three() -> Instance:
    """Two arrowhead drawings of C4 whose notch vertex differs, with two inner and one outer obstacle.

    Coordinates lie on the integer grid [0, 12]^2.
    """
    g = cycle_graph(4)
    a = _pts((1, 4), (6, 9), (11, 4), (6, 6))
    b = _pts((1, 6), (6, 4), (11, 6), (6, 1))
    obs = _pts((3, 5), (9, 5), (6, 5))
    g = cycle_graph(4, a)
    return _checked(Instance(g, Drawing(g, a), Drawing(g, b), obs))


def c4_three_control() -> Instance:
    """The c4-three drawings with every obstacle removed."""
    inst = gen_blocked_c4_three()
    return Instance(inst.graph, inst.start, inst.end, ())


def _even_cycle_positions(n: int, side: int):
    """Integer vertex positions of the wrapped C_n.

    Corners c0 (lower right), c1 (lower left), c2 (top) of a near-equilateral
    triangle with a horizontal base.  Vertex 0 sits at c0; the paths
    0, 1, 2, ... and 0, n-1, n-2, ... both run clockwise through the corners
    and meet at n/2.  Each new vertex at a corner takes the next slot along
    that corner's outward direction, so it lies further from the centroid.
    """
    top = round(side * math.sqrt(3) / 2)
    corners = [P(side, 0), P(0, 0), P(side // 2, top)]
    outward = [P(2, -1), P(-2, -1), P(0, 1)]
    centroid = P(Fraction(3 * side, 2) / 3, Fraction(top, 3))
    half = n // 2
    pos = [None] * n
    slot = [0, 0, 0]

    def place(v, corner):
        slot[corner] += 1
        pos[v] = corners[corner] + outward[corner] * slot[corner]

    place(0, 0)
    for j in range(1, half):
        place(j, j % 3)
        place(n - j, j % 3)
    place(half, half % 3)
    eps = Fraction(side, 64)
    assert max(slot) * 3 <= eps, "corner slots exceed the corner radius"
    return pos, corners, centroid, eps


def gen_blocked_even_cycle(n: int, offset: int = 1) -> Instance:
    """A C_n wrapped around a triangle as a thin strip, with two inner and five outer obstacles.

    The inner obstacles sit in the wedges at the two ends of the strip
    (vertices 0 and n/2); two outer obstacles sit just inside the triangle
    at vertices 1 and 2, and three just outside the midpoints of the
    outermost edges (n/2, n/2+1), (n/2+1, n/2+2), (n/2+2, n/2+3).  The end
    drawing is the shifted version by `offset`.
    """
    if n < 6 or n % 2:
        raise FixtureError("n must be even and at least 6")
    if offset % n == 0:
        raise FixtureError("offset must not be a multiple of n")
    side = 64 * (n + 2)
    pos, corners, centroid, eps = _even_cycle_positions(n, side)
    g = cycle_graph(n, pos)
    d = Drawing(g, tuple(pos))
    half = n // 2

    def inner_near(v):
        a, b = g.adj[v]
        mid = (pos[a] + pos[b]) * Fraction(1, 2)
        k0 = max(0, math.ceil(math.log2(math.dist(mid, pos[v]))))
        for k in range(k0, k0 + 40):
            p = pos[v] + (mid - pos[v]) * Fraction(1, 1 << k)
            f = point_face(d, p)
            if f is not None and f != g.outer_face:
                return p
        raise AssertionError("no inner point near vertex")

    def unit_toward(p, q):
        # rounded to a quarter-grid so coordinates stay small
        dx, dy = float(q[0] - p[0]), float(q[1] - p[1])
        r = math.hypot(dx, dy)
        return P(Fraction(round(4 * dx / r), 4), Fraction(round(4 * dy / r), 4))

    obstacles = [inner_near(0), inner_near(half)]
    for v in (1, 2):
        obstacles.append(pos[v] + unit_toward(pos[v], centroid))
    for i in range(3):
        u, w = (half + i) % n, (half + 1 + i) % n
        mid = (pos[u] + pos[w]) * Fraction(1, 2)
        obstacles.append(mid - unit_toward(mid, centroid) * Fraction(1, 2))
    obstacles = tuple(obstacles)
    if free_vertices(d):
        raise AssertionError("wrapped drawing has a free vertex")
    faces = [point_face(d, p) for p in obstacles]
    if any(f is None for f in faces):
        raise AssertionError("obstacle on the drawing")
    inner = sum(f != g.outer_face for f in faces)
    if inner != 2:
        raise AssertionError(f"expected two inner obstacles, found {inner}")
    return _checked(Instance(g, d, shifted(d, offset), obstacles))


def gen_blocked_c3_five(offset: int = 1) -> Instance:
    """A triangle with an obstacle just inside each corner and two just outside two edge midpoints.

    Clockwise order a (top), b (lower right), c (lower left); side 64 with a
    one-unit offset for every obstacle.  All points lie on the grid of pitch 1.
    """
    a, b, c = _pts((0, 56), (32, 0), (-32, 0))
    inner = _pts((0, 55), (31, 1), (-31, 1))
    ab_mid, ac_mid = _pts((17, 28), (-17, 28))
    obs = inner + (ab_mid, ac_mid)
    # slope of b'..a'_b is negative and slope of c'..a'_c is positive
    assert (ab_mid[1] - inner[1][1]) * (ab_mid[0] - inner[1][0]) < 0
    assert (ac_mid[1] - inner[2][1]) * (ac_mid[0] - inner[2][0]) > 0
    g = cycle_graph(3, (a, b, c))
    d = Drawing(g, (a, b, c))
    assert orientation(a, b, c) < 0
    return _checked(Instance(g, d, shifted(d, offset), obs))


# fox: a C8 with two teeth; the target moves vertex 1 up to the first tooth's tip and
# vertex 2 onto the tooth's right flank, where it is free; vertex 6 is free in both
_FOX_START = ((0, 0), (3, 8), (4, 16), (8, 8), (12, 16), (16, 0), (10, -2), (4, -4))
_FOX_END = ((0, 0), (4, 16), (6, 12), (8, 8), (12, 16), (16, 0), (10, -2), (4, -4))
FOX_BOX = (Point(Fraction(-4), Fraction(-8)), Point(Fraction(20), Fraction(20)))


def gen_fox_c8(pitch=Fraction(1)) -> Instance:
    """Two C8 drawings; obstacles fill everything above y = 2 inside the box on the given pitch.

    Points in the sliver where the two drawings disagree about the face, and
    points on either drawing, are left empty.
    """
    pitch = Fraction(pitch)
    if pitch <= 0:
        raise FixtureError("pitch must be positive")
    a = _pts(*_FOX_START)
    b = _pts(*_FOX_END)
    g = cycle_graph(8, a)
    d1, d2 = Drawing(g, a), Drawing(g, b)
    lo, hi = FOX_BOX
    obs = []
    y = lo[1]
    floor_y = Fraction(2)
    while y <= hi[1]:
        if y >= floor_y:
            x = lo[0]
            while x <= hi[0]:
                p = Point(x, y)
                f1, f2 = point_face(d1, p), point_face(d2, p)
                if f1 is not None and f2 is not None and (f1 == g.outer_face) == (f2 == g.outer_face):
                    obs.append(p)
                x += pitch
        y += pitch
    inst = Instance(g, d1, d2, tuple(obs))
    if len(free_vertices(d2)) < 2:
        raise AssertionError("fox target needs two free vertices")
    return _checked(inst)


FIXTURES = ("c4-three", "even-cycle:<n>", "c3-five", "fox:<pitch>")


def fixture_by_name(name: str) -> Instance:
    from .exact import parse_rational
    if name == "c4-three":
        return gen_blocked_c4_three()
    if name == "c3-five":
        return gen_blocked_c3_five()
    if name.startswith("even-cycle:"):
        try:
            n = int(name.split(":", 1)[1])
        except ValueError:
            raise FixtureError(f"bad cycle length in {name!r}")
        return gen_blocked_even_cycle(n)
    if name.startswith("fox:"):
        try:
            pitch = parse_rational(name.split(":", 1)[1])
        except ValueError:
            raise FixtureError(f"bad pitch in {name!r}")
        return gen_fox_c8(pitch)
    raise FixtureError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")


def probe_config(name: str, inst: Instance):
    """The grid on which a fixture's blocking is probed; sized so each search finishes within minutes."""
    from .search import GridConfig
    if name in ("c4-three", "c4-three-control"):
        return GridConfig(P(0, 0), Fraction(1), 12, 12, (0, 1, 2, 3))
    if name == "c3-five":
        return GridConfig(P(-40, -8), Fraction(1), 80, 72, (0, 1, 2))
    if name.startswith("even-cycle:"):
        pts = list(inst.start.pos) + list(inst.end.pos) + list(inst.obstacles)
        x0 = math.floor(min(p[0] for p in pts)) - 4
        y0 = math.floor(min(p[1] for p in pts)) - 4
        x1 = math.ceil(max(p[0] for p in pts)) + 4
        y1 = math.ceil(max(p[1] for p in pts)) + 4
        return GridConfig(P(x0, y0), Fraction(1), x1 - x0, y1 - y0, tuple(range(inst.graph.n)))
    if name.startswith("fox:"):
        lo, hi = FOX_BOX
        return GridConfig(lo, Fraction(1), int(hi[0] - lo[0]), int(hi[1] - lo[1]), (0, 1, 2, 3, 6, 7))
    raise FixtureError(f"no probe grid for {name!r}")
