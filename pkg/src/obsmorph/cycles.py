"""Relabelling a cycle drawing that has a free vertex.

A unit shift walks a "gap" once around the cycle: each vertex in turn
slides almost onto its successor's position, which frees that successor.
All moves stay within a thin sliver along the fixed curve, so obstacles off
the curve are never touched once the sliver is thin enough.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Optional

from ._geom import MorphFailed
from .drawing import Drawing, NotACycle, free_vertices, obstacle_issues, validate_drawing
from .exact import Point, qnorm
from .verify import Morph, verify_morph


class NoFreeVertex(ValueError):
    pass


def _unit_shift(pos: list, order: list, eps: Fraction) -> list[tuple]:
    """Drawings of one unit shift; order[0] is free. Vertex order[i] ends at the position of order[i+1]."""
    n = len(order)
    p = [pos[v] for v in order]

    def q(k):
        a, b = p[(k + 1) % n], p[(k + 2) % n]
        return a + (a - b) * eps

    cur = list(pos)
    out = []
    cur[order[0]] = q(0)
    out.append(tuple(cur))
    for k in range(2, n):
        cur[order[k - 1]] = q(k - 1)
        cur[order[k - 2]] = p[k - 1]
        out.append(tuple(cur))
    cur[order[n - 1]] = p[0]
    cur[order[n - 2]] = p[n - 1]
    out.append(tuple(cur))
    return out


def cycle_shift_morph(d: Drawing, offset: int, obstacles=(), *, free_vertex: Optional[int] = None,
                      max_halvings: int = 40) -> Morph:
    """A verified morph from d to its shifted version with the given offset.

    Uses exactly n linear steps per unit shift, and the smaller of the two
    directions around the cycle.
    """
    g = d.graph
    order = g.cycle_order()
    if len(order) != g.n or len(g.edges) != g.n:
        raise NotACycle("cycle_shift_morph needs a cycle")
    n = g.n
    o = offset % n
    if o == 0:
        raise ValueError("offset is a multiple of the cycle length")
    obstacles = tuple(Point(qnorm(x[0]), qnorm(x[1])) for x in obstacles)
    issues = validate_drawing(d) or obstacle_issues(d, obstacles)
    if issues:
        raise ValueError(f"invalid input drawing: {issues[0].kind}")
    free = free_vertices(d)
    if not free:
        raise NoFreeVertex("the drawing has no free vertex")
    v0 = free_vertex if free_vertex is not None else min(free)
    if v0 not in free:
        raise NoFreeVertex(f"vertex {v0} is not free")
    k = order.index(v0)
    order = order[k:] + order[:k]
    # going along order moves vertex i to the position of i+1 (offset n-1);
    # going against it gives offset +1
    if o <= n - o:
        units, order = o, [order[0]] + order[:0:-1]
    else:
        units = n - o
    eps = Fraction(1, 4)
    for _ in range(max_halvings):
        one = _unit_shift(list(d.pos), order, eps)
        m = Morph(g, (d,) + tuple(Drawing(g, p) for p in one))
        if verify_morph(m, obstacles) is None:
            break
        eps /= 2
    else:
        raise MorphFailed("no sliver width made the unit shift verify")
    drawings = [d]
    pos = list(d.pos)
    for _ in range(units):
        steps = _unit_shift(pos, order, eps)
        drawings.extend(Drawing(g, p) for p in steps)
        pos = list(steps[-1])
        order = [order[-1]] + order[:-1]
    return Morph(g, tuple(drawings))
