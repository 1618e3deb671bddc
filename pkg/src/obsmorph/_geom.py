"""Small helpers shared by the constructive morphs: complex arithmetic on
rational points, float distances used for choosing parameters, and
rational rounding."""
from __future__ import annotations

import math
from fractions import Fraction

from .exact import Point, qnorm


class MorphFailed(RuntimeError):
    """A construction could not produce a verified morph within its retry budget."""


class UnsupportedClass(ValueError):
    """The instance lies outside the classes a construction handles."""


def cmul(a, b) -> Point:
    return Point(qnorm(a[0] * b[0] - a[1] * b[1]), qnorm(a[0] * b[1] + a[1] * b[0]))


def cdiv(a, b) -> Point:
    n = Fraction(b[0] * b[0] + b[1] * b[1])
    if n == 0:
        raise ZeroDivisionError("division by the zero vector")
    return Point(qnorm((a[0] * b[0] + a[1] * b[1]) / n), qnorm((a[1] * b[0] - a[0] * b[1]) / n))


def rat(x: float, bits: int = 24) -> Fraction:
    """A rational within 2**-bits (relative) of x, with a power-of-two denominator."""
    if x == 0:
        return Fraction(0)
    e = math.frexp(x)[1]
    q = 1 << max(0, bits - e)
    return Fraction(round(x * q), q)


def rat_floor(x: float, bits: int = 24) -> Fraction:
    """A rational in (x(1 - 2**-bits), x] for x > 0."""
    e = math.frexp(x)[1]
    q = 1 << max(0, bits - e)
    return Fraction(math.floor(x * q), q)


def fpt(p) -> tuple[float, float]:
    return float(p[0]), float(p[1])


def fdist(a, b) -> float:
    return math.hypot(float(a[0]) - float(b[0]), float(a[1]) - float(b[1]))


def fseg_dist(p, a, b) -> float:
    px, py = fpt(p)
    ax, ay = fpt(a)
    bx, by = fpt(b)
    dx, dy = bx - ax, by - ay
    L = dx * dx + dy * dy
    t = 0.0 if L == 0 else max(0.0, min(1.0, ((px - ax) * dx + (py - ay) * dy) / L))
    return math.hypot(px - ax - t * dx, py - ay - t * dy)


def fangle(v) -> float:
    return math.atan2(float(v[1]), float(v[0]))


def feature_size(pos, edges, obstacles=()) -> float:
    """Smallest distance between disjoint features of a drawing and an obstacle set."""
    best = math.inf
    pts = list(pos)
    n = len(pts)
    for i in range(n):
        for j in range(i + 1, n):
            best = min(best, fdist(pts[i], pts[j]))
        for o in obstacles:
            best = min(best, fdist(pts[i], o))
    for (u, v) in edges:
        for w in range(n):
            if w != u and w != v:
                best = min(best, fseg_dist(pts[w], pts[u], pts[v]))
        for o in obstacles:
            best = min(best, fseg_dist(o, pts[u], pts[v]))
    for i, (u, v) in enumerate(edges):
        for (x, y) in edges[i + 1:]:
            if len({u, v, x, y}) == 4:
                best = min(best, fseg_dist(pts[x], pts[u], pts[v]), fseg_dist(pts[y], pts[u], pts[v]),
                           fseg_dist(pts[u], pts[x], pts[y]), fseg_dist(pts[v], pts[x], pts[y]))
    return best
