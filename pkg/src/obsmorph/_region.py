"""Free regions made of convex polygons, and the lattice obstacles that wall them in."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, lcm

import numpy as np

from .exact import Point


@dataclass(frozen=True)
class Poly:
    """Convex polygon, vertices in counter-clockwise order."""

    pts: tuple[Point, ...]
    tag: str = ""

    def __post_init__(self):
        pts = tuple(Point(Fraction(p[0]), Fraction(p[1])) for p in self.pts)
        area2 = sum(a[0] * b[1] - a[1] * b[0] for a, b in zip(pts, pts[1:] + pts[:1]))
        if area2 == 0:
            raise ValueError(f"degenerate polygon {self.tag}")
        if area2 < 0:
            pts = pts[::-1]
        object.__setattr__(self, "pts", pts)

    def bbox(self):
        xs = [p[0] for p in self.pts]
        ys = [p[1] for p in self.pts]
        return min(xs), min(ys), max(xs), max(ys)

    def contains(self, q, strict: bool = True) -> bool:
        n = len(self.pts)
        for i in range(n):
            a, b = self.pts[i], self.pts[(i + 1) % n]
            c = (b[0] - a[0]) * (q[1] - a[1]) - (b[1] - a[1]) * (q[0] - a[0])
            if c < 0 or (strict and c == 0):
                return False
        return True

    def _scaled(self):
        den = lcm(*(c.denominator for p in self.pts for c in p))
        return den, [(int(p[0] * den), int(p[1] * den)) for p in self.pts]

    def strict_mask(self, xy: np.ndarray) -> np.ndarray:
        """Which integer points (rows of xy) lie strictly inside."""
        den, sp = self._scaled()
        q = xy.astype(np.int64) * den
        ok = np.ones(len(xy), dtype=bool)
        n = len(sp)
        for i in range(n):
            (ax, ay), (bx, by) = sp[i], sp[(i + 1) % n]
            c = (bx - ax) * (q[:, 1] - ay) - (by - ay) * (q[:, 0] - ax)
            ok &= c > 0
        return ok

    def near_mask(self, xy: np.ndarray, dist: float) -> np.ndarray:
        """Points within roughly `dist` of the polygon (a superset near corners)."""
        pts = [(float(p[0]), float(p[1])) for p in self.pts]
        ok = np.ones(len(xy), dtype=bool)
        n = len(pts)
        for i in range(n):
            (ax, ay), (bx, by) = pts[i], pts[(i + 1) % n]
            ex, ey = bx - ax, by - ay
            ln = (ex * ex + ey * ey) ** 0.5
            # outward distance from the edge line
            d = (ey * (xy[:, 0] - ax) - ex * (xy[:, 1] - ay)) / ln
            ok &= d <= dist + 1e-9
        return ok


def rect(x0, y0, x1, y1, tag: str = "") -> Poly:
    return Poly((Point(x0, y0), Point(x1, y0), Point(x1, y1), Point(x0, y1)), tag)


def lattice_in(box, pad: int = 0) -> np.ndarray:
    x0, y0, x1, y1 = box
    xs = np.arange(floor(x0) - pad, ceil(x1) + pad + 1)
    ys = np.arange(floor(y0) - pad, ceil(y1) + pad + 1)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    return np.stack([gx.ravel(), gy.ravel()], axis=1)


def wall_obstacles(free: list[Poly], filled: list[Poly], wall: int = 2) -> list[tuple[int, int]]:
    """Integer points near the free region that are not strictly inside it, plus points strictly inside filled polygons.

    A point strictly inside a filled polygon is an obstacle even if it is
    also inside a free polygon.
    """
    cand = []
    for p in free:
        xy = lattice_in(p.bbox(), wall)
        cand.append(xy[p.near_mask(xy, wall)])
    for p in filled:
        cand.append(lattice_in(p.bbox()))
    if not cand:
        return []
    xy = np.unique(np.concatenate(cand), axis=0)
    is_free = np.zeros(len(xy), dtype=bool)
    for p in free:
        x0, y0, x1, y1 = (float(v) for v in p.bbox())
        sel = np.nonzero((xy[:, 0] > x0) & (xy[:, 0] < x1) & (xy[:, 1] > y0) & (xy[:, 1] < y1))[0]
        if len(sel):
            is_free[sel[p.strict_mask(xy[sel])]] = True
    blocked = ~is_free
    for p in filled:
        x0, y0, x1, y1 = (float(v) for v in p.bbox())
        sel = np.nonzero((xy[:, 0] > x0) & (xy[:, 0] < x1) & (xy[:, 1] > y0) & (xy[:, 1] < y1))[0]
        if len(sel):
            blocked[sel[p.strict_mask(xy[sel])]] = True
    return [(int(a), int(b)) for a, b in xy[blocked]]


def point_is_free(free: list[Poly], filled: list[Poly], q) -> bool:
    return any(p.contains(q) for p in free) and not any(p.contains(q) for p in filled)
