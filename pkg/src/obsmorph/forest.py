"""Obstacle-avoiding morphs between two drawings of a plane forest.

Pipeline, per attempt:

1. contract every tree of the first drawing toward its root, one depth
   level per step, each subtree sliding along the edge to its parent;
2. reshape each contracted tree into the contracted second drawing's shape,
   level by level from the root, by spiral similarities of child subtrees;
3. route every tree through an obstacle-free far field in three
   axis-aligned (in a rotated frame) steps;
4. replay the contraction of the second drawing backwards.

Every attempt is verified exactly; failing attempts shrink the base
radius and retry.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from ._geom import (MorphFailed, cdiv, cmul, fangle, fdist, feature_size, rat, rat_floor)
from .drawing import Drawing, GraphError, PlaneGraph, obstacle_issues, validate_drawing
from .exact import Point, qnorm
from .verify import Morph, verify_morph

TAU = 2 * math.pi


class NotAForest(GraphError):
    pass


@dataclass(frozen=True)
class ContractionPlan:
    """Rooted structure of a forest plus the per-vertex disk radii."""

    roots: tuple[int, ...]
    parent: tuple[int, ...]
    depth: tuple[int, ...]
    children: tuple[tuple[int, ...], ...]
    radius: tuple[Fraction, ...]

    @property
    def levels(self) -> int:
        return max(self.depth, default=0)

    def subtree(self, v: int) -> list[int]:
        out, stack = [], [v]
        while stack:
            x = stack.pop()
            out.append(x)
            stack.extend(self.children[x])
        return out


def _rooting(g: PlaneGraph):
    parent = [-1] * g.n
    depth = [0] * g.n
    children = [[] for _ in range(g.n)]
    roots = []
    for comp in g.components:
        r = min(comp)
        roots.append(r)
        queue = [r]
        seen = {r}
        for x in queue:
            # children listed in ccw order starting after the parent
            rot = list(g.rotation[x])
            if parent[x] >= 0:
                k = rot.index(parent[x])
                rot = rot[k + 1:] + rot[:k]
            for y in rot:
                if y not in seen:
                    seen.add(y)
                    parent[y] = x
                    depth[y] = depth[x] + 1
                    children[x].append(y)
                    queue.append(y)
    return roots, parent, depth, children


def _min_gap(pos, g: PlaneGraph, v: int) -> float:
    nb = g.rotation[v]
    if len(nb) < 2:
        return math.pi
    angles = sorted(fangle(pos[w] - pos[v]) for w in nb)
    gaps = [b - a for a, b in zip(angles, angles[1:])] + [angles[0] + TAU - angles[-1]]
    return min(min(gaps), math.pi)


def make_plan(g: PlaneGraph, drawings, base: float) -> ContractionPlan:
    roots, parent, depth, children = _rooting(g)
    radius = [Fraction(0)] * g.n
    order = sorted(range(g.n), key=lambda v: depth[v])
    for v in order:
        if parent[v] < 0:
            radius[v] = rat_floor(base)
        else:
            p = parent[v]
            gap = min(_min_gap(d.pos, g, p) for d in drawings)
            rho = float(radius[p]) / 2
            radius[v] = min(radius[p] / 4, rat_floor(rho * math.sin(gap / 2) / 4))
    return ContractionPlan(tuple(roots), tuple(parent), tuple(depth),
                           tuple(tuple(c) for c in children), tuple(radius))


def contraction(d: Drawing, plan: ContractionPlan) -> list[Drawing]:
    """Drawings from d to its contracted form, one per depth level."""
    pos = list(d.pos)
    out = [d]
    for k in range(plan.levels, 0, -1):
        moved = False
        for v in range(d.graph.n):
            if plan.depth[v] != k:
                continue
            p = plan.parent[v]
            rho = float(plan.radius[p]) / 2
            sigma = rat_floor(rho / fdist(pos[v], pos[p]))
            target = pos[p] + (pos[v] - pos[p]) * sigma
            shift = target - pos[v]
            for x in plan.subtree(v):
                pos[x] = pos[x] + shift
            moved = True
        if moved:
            out.append(Drawing(d.graph, tuple(pos)))
    return out


def _lifted(angles: dict, ref: float | None, anchor: float | None):
    """Lift angles into one 2*pi window starting at ref (or around anchor)."""
    keys = list(angles)
    if ref is None:
        first = keys[0]
        base = angles[first] if anchor is None else anchor
        return {c: base + ((angles[c] - base) % TAU) for c in keys}
    return {c: ref + ((angles[c] - ref) % TAU) for c in keys}


def normalization(pos_start, pos_target, g: PlaneGraph, plan: ContractionPlan) -> list[tuple]:
    """Position tuples reshaping each contracted tree to the target shape around its own root."""
    cur = list(pos_start)
    out = [tuple(cur)]
    for k in range(plan.levels):
        jobs = []
        for v in range(g.n):
            if plan.depth[v] != k or not plan.children[v]:
                continue
            kids = plan.children[v]
            a0 = {c: cur[c] - cur[v] for c in kids}
            aT = {c: pos_target[c] - pos_target[v] for c in kids}
            if plan.parent[v] >= 0:
                ref = fangle(cur[plan.parent[v]] - cur[v])
                th0 = _lifted({c: fangle(a0[c]) for c in kids}, ref, None)
                thT = _lifted({c: fangle(aT[c]) for c in kids}, ref, None)
                lo, hi = ref, ref + TAU
            else:
                th0 = _lifted({c: fangle(a0[c]) for c in kids}, None, None)
                c0 = kids[0]
                raw = fangle(aT[c0])
                anchor = th0[c0] + ((raw - th0[c0] + math.pi) % TAU) - math.pi
                thT = _lifted({c: fangle(aT[c]) for c in kids}, None, None)
                thT = {c: anchor + ((thT[c] - thT[c0]) % TAU) for c in kids}
                lo = hi = None
            if sorted(kids, key=th0.get) != sorted(kids, key=thT.get):
                raise MorphFailed(f"rotation systems differ around vertex {v}")
            jobs.append((v, kids, a0, aT, th0, thT, lo, hi))
        if not jobs:
            continue
        steps = 1
        for v, kids, a0, aT, th0, thT, lo, hi in jobs:
            for seq in (th0, thT):
                s = sorted(seq.values())
                gaps = [b - a for a, b in zip(s, s[1:])]
                if lo is not None:
                    gaps += [s[0] - lo, hi - s[-1]]
                elif len(s) > 1:
                    gaps.append(s[0] + TAU - s[-1])
                gap = min(gaps + [math.pi])
                turn = max(abs(thT[c] - th0[c]) for c in kids)
                steps = max(steps, math.ceil(turn / (gap / 8)), math.ceil(turn / (math.pi / 8)))
        for s in range(1, steps + 1):
            for v, kids, a0, aT, th0, thT, lo, hi in jobs:
                for c in kids:
                    prev = cur[c] - cur[v]
                    if s == steps:
                        nxt = aT[c]
                    else:
                        t = s / steps
                        r = (1 - t) * fdist(a0[c], (0, 0)) + t * fdist(aT[c], (0, 0))
                        th = (1 - t) * th0[c] + t * thT[c]
                        nxt = Point(rat(r * math.cos(th)), rat(r * math.sin(th)))
                    f = cdiv(nxt, prev)
                    center = cur[v]
                    for x in plan.subtree(c):
                        cur[x] = center + cmul(f, cur[x] - center)
            out.append(tuple(cur))
    return out


def _choose_direction(starts, ends, obstacles, reach: float, rng: random.Random):
    cands = [(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, 1), (-1, -1), (1, -1)]
    cands += [(rng.randint(-997, 997), rng.randint(-997, 997)) for _ in range(56)]
    best, best_d = -1.0, None
    for d in cands:
        if d == (0, 0):
            continue
        L = math.hypot(*d)
        ux, uy = d[0] / L, d[1] / L

        def lane(p):
            return -uy * float(p[0]) + ux * float(p[1])

        def height(p):
            return ux * float(p[0]) + uy * float(p[1])

        score = math.inf
        for pts in (starts, ends):
            ls = sorted(lane(p) for p in pts)
            for a, b in zip(ls, ls[1:]):
                score = min(score, b - a)
            for p in pts:
                for o in obstacles:
                    if height(o) - height(p) > -reach:
                        score = min(score, abs(lane(o) - lane(p)))
        if score > best:
            best, best_d = score, d
    return best_d, best


def far_field(cur, g: PlaneGraph, plan: ContractionPlan, targets, obstacles, d, radius) -> list[tuple]:
    """Three steps carrying each tree from its root position to its target root position."""
    dx, dy = d
    n2 = dx * dx + dy * dy
    norm = math.isqrt(n2) + 1
    members = {r: plan.subtree(r) for r in plan.roots}

    def h(p):
        return p[0] * dx + p[1] * dy

    def s(p):
        return -p[0] * dy + p[1] * dx

    top = max([h(o) for o in obstacles] + [h(cur[r]) for r in plan.roots] + [h(t) for t in targets.values()])
    spacing = 4 * radius * norm
    stage = {r: top + (i + 1) * spacing for i, r in enumerate(plan.roots)}
    out = []
    pos = list(cur)

    def move(shift_of):
        for r in plan.roots:
            sh = shift_of(r)
            for x in members[r]:
                pos[x] = pos[x] + sh
        out.append(tuple(pos))

    move(lambda r: Point(dx, dy) * (Fraction(stage[r] - h(pos[r])) / n2))
    move(lambda r: Point(-dy, dx) * (Fraction(s(targets[r]) - s(pos[r])) / n2))
    move(lambda r: Point(dx, dy) * (Fraction(h(targets[r]) - stage[r]) / n2))
    for r in plan.roots:
        assert pos[r] == targets[r]
    return out


def forest_morph(g: PlaneGraph, d1: Drawing, d2: Drawing, obstacles=(), *, seed: int = 0,
                 attempts: int = 8) -> Morph:
    """A verified morph d1 -> d2 of a plane forest that avoids the obstacles."""
    if not g.is_forest():
        raise NotAForest("forest_morph needs a forest")
    obstacles = tuple(Point(qnorm(o[0]), qnorm(o[1])) for o in obstacles)
    for d in (d1, d2):
        issues = validate_drawing(d) or obstacle_issues(d, obstacles)
        if issues:
            raise ValueError(f"invalid input drawing: {issues[0].kind}")
    if d1.pos == d2.pos:
        return Morph(g, (d1,))
    rng = random.Random(seed)
    lfs = min(feature_size(d.pos, g.edges, obstacles) for d in (d1, d2))
    roots = [min(c) for c in g.components]
    starts = [d1.pos[r] for r in roots]
    ends = [d2.pos[r] for r in roots]
    if not math.isfinite(lfs):
        lfs = 1.0
    direction, clearance = _choose_direction(starts, ends, obstacles, lfs / 4, rng)
    base = min(lfs / 4, clearance / 4) if math.isfinite(clearance) else lfs / 4
    last = None
    for _ in range(attempts):
        plan = make_plan(g, (d1, d2), base)
        c1 = contraction(d1, plan)
        c2 = contraction(d2, plan)
        norm = normalization(c1[-1].pos, c2[-1].pos, g, plan)
        targets = {r: c2[-1].pos[r] for r in plan.roots}
        steps = [d.pos for d in c1] + norm[1:]
        if any(norm[-1][r] != targets[r] for r in plan.roots):
            steps += far_field(norm[-1], g, plan, targets, obstacles, direction, plan.radius[plan.roots[0]]
                               if len(plan.roots) == 1 else min(plan.radius[r] for r in plan.roots))
        steps += [d.pos for d in reversed(c2[:-1])]
        m = Morph.chain(g, [Drawing(g, p) for p in steps])
        last = verify_morph(m, obstacles)
        if last is None:
            return m
        base /= 4
    raise MorphFailed(f"forest morph did not verify: {last}")
