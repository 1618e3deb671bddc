"""Morphing a triangle (C3) past at most four obstacles.

The construction is chosen by the number of obstacles inside the triangle:

* 0, 1 or 4 (or 3 with nothing outside): shrink or grow the triangle
  radially about a centre to a circle that is free of trouble, turn it
  there by polar interpolation, and undo the radial moves on the target.
  With no interior obstacle the small triangle first travels between the
  two barycentres along an obstacle-free route.
* 2: work in a frame in which the two interior obstacles are (0,0) and
  (0,1).  Both triangles are reduced into a thin rectangle around that
  segment, and labels are permuted by half-turn gadgets inside it.
* 3 with one obstacle outside: work in a frame in which the outside
  obstacle is (-1,0) and the hull of the inside ones lies in x >= 0.
  Both triangles are reduced to a large "V" configuration, whose labels
  are cycled by a 5-move rotation.

Every output is checked with the exact verifier before it is returned.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Callable, Optional, Sequence

from ._geom import MorphFailed, UnsupportedClass, cdiv, cmul, fangle, fdist, fseg_dist, rat, rat_floor
from .drawing import Drawing, Instance, PlaneGraph, check_necessary_compatibility, obstacle_issues, validate_drawing
from .exact import Point, dot, orientation, qnorm
from .verify import Morph, verify_morph

TAU = 2 * math.pi
Tri = tuple  # three Points indexed by vertex id


class UnsupportedConfiguration(UnsupportedClass):
    """The obstacle configuration is outside what the triangle morph handles."""


# --------------------------------------------------------------------------
# small exact/float helpers


def _orient(t: Tri) -> int:
    return orientation(t[0], t[1], t[2])


def strictly_inside(t: Tri, p) -> bool:
    s = _orient(t)
    return s != 0 and all(orientation(t[i], t[(i + 1) % 3], p) == s for i in range(3))


def _boundary_dist(t: Tri, p) -> float:
    return min(fseg_dist(p, t[i], t[(i + 1) % 3]) for i in range(3))


def _seg_seg_dist(a, b, c, d) -> float:
    # the segments are known to be disjoint
    return min(fseg_dist(a, c, d), fseg_dist(b, c, d), fseg_dist(c, a, b), fseg_dist(d, a, b))


def _pt(x, y) -> Point:
    return Point(qnorm(Fraction(x)), qnorm(Fraction(y)))


def _set(t: Tri, i: int, p) -> Tri:
    out = list(t)
    out[i] = p
    return tuple(out)


def _wrap(a: float) -> float:
    return (a + math.pi) % TAU - math.pi


def _verified(g: PlaneGraph, seq: Sequence[Tri], obstacles) -> Optional[Morph]:
    m = Morph.chain(g, [Drawing(g, p) for p in seq])
    return m if verify_morph(m, obstacles) is None else None


# --------------------------------------------------------------------------
# cases 0, 1, 4: radial moves and polar interpolation


def _radial(t: Tri, c: Point, radius: float) -> list[Tri]:
    """One vertex at a time, slide each vertex along its ray from c to about the given radius."""
    out = []
    cur = t
    for i in range(3):
        f = rat_floor(radius / fdist(cur[i], c))
        cur = _set(cur, i, c + (cur[i] - c) * f)
        out.append(cur)
    return out


def _polar(c: Point, t1: Tri, t2: Tri, k: int) -> list[Tri]:
    """k-step polar interpolation about c; both triangles must surround c with the same orientation."""
    a1 = [fangle(p - c) for p in t1]
    a2 = [fangle(p - c) for p in t2]
    l1 = [a1[0] + (a1[i] - a1[0]) % TAU for i in range(3)]
    base = a1[0] + _wrap(a2[0] - a1[0])
    l2 = [base + (a2[i] - a2[0]) % TAU for i in range(3)]
    r1 = [fdist(p, c) for p in t1]
    r2 = [fdist(p, c) for p in t2]
    out = []
    for j in range(1, k):
        s = j / k
        pts = []
        for i in range(3):
            r = (1 - s) * r1[i] + s * r2[i]
            th = (1 - s) * l1[i] + s * l2[i]
            pts.append(c + Point(rat(r * math.cos(th)), rat(r * math.sin(th))))
        out.append(tuple(pts))
    out.append(t2)
    return out


def _polar_verified(g, c, t1, t2, obstacles, cap: int = 1 << 12) -> list[Tri]:
    a1 = [fangle(p - c) for p in t1]
    a2 = [fangle(p - c) for p in t2]
    turn = abs(_wrap(a2[0] - a1[0])) + max(abs(_wrap(a2[i] - a1[i])) for i in range(3))
    k = max(4, math.ceil(turn / (math.pi / 16)))
    while k <= cap:
        seq = _polar(c, t1, t2, k)
        if _verified(g, [t1] + seq, obstacles) is not None:
            return seq
        k *= 2
    raise MorphFailed("polar interpolation did not verify")


def _route(c1: Point, c2: Point, obstacles, rng: random.Random) -> tuple[list[Point], float]:
    """Polyline from c1 to c2 keeping away from the obstacles, with its clearance."""

    def clearance(path):
        return min((fseg_dist(o, a, b) for o in obstacles for a, b in zip(path, path[1:])), default=math.inf)

    best = [c1, c2]
    best_c = clearance(best)
    dirs = [(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, 1), (-1, -1), (1, -1)]
    dirs += [(rng.randint(-97, 97), rng.randint(-97, 97)) for _ in range(56)]
    for dx, dy in dirs:
        if (dx, dy) == (0, 0):
            continue
        n2 = dx * dx + dy * dy

        def h(p):
            return p[0] * dx + p[1] * dy

        def s(p):
            return -p[0] * dy + p[1] * dx

        stage = max([h(o) for o in obstacles] + [h(c1), h(c2)]) + n2
        p1 = c1 + Point(dx, dy) * (Fraction(stage - h(c1)) / n2)
        p2 = p1 + Point(-dy, dx) * (Fraction(s(c2) - s(c1)) / n2)
        path = [c1, p1, p2, c2]
        cl = clearance(path)
        if cl > best_c * 1.5:
            best, best_c = path, cl
    return best, best_c


def _barycentre(t: Tri) -> Point:
    return Point(qnorm((t[0][0] + t[1][0] + t[2][0]) / Fraction(3)),
                 qnorm((t[0][1] + t[1][1] + t[2][1]) / Fraction(3)))


def _max_gap(t: Tri, c: Point) -> float:
    a = sorted(fangle(p - c) for p in t)
    return max(a[1] - a[0], a[2] - a[1], a[0] + TAU - a[2])


def _radial_morph(g, t1: Tri, t2: Tri, obstacles, inner, seed: int) -> list[Tri]:
    if not inner:
        c1, c2 = _barycentre(t1), _barycentre(t2)
        path, cl = _route(c1, c2, obstacles, random.Random(seed)) if c1 != c2 else ([c1], math.inf)
        radius = min(0.9 * _boundary_dist(t1, c1), 0.9 * _boundary_dist(t2, c2), cl / 3)
    elif len(inner) == 1:
        c1 = c2 = inner[0]
        path = [c1]
        radius = 0.9 * min(_boundary_dist(t1, c1), _boundary_dist(t2, c2))
    else:
        if len(inner) != len(obstacles):
            raise UnsupportedConfiguration("growing the triangle needs every obstacle inside")
        k = len(inner)
        c1 = c2 = Point(qnorm(sum(p[0] for p in inner) / Fraction(k)), qnorm(sum(p[1] for p in inner) / Fraction(k)))
        path = [c1]
        spread = max(fdist(p, c1) for p in inner)
        gap = max(_max_gap(t1, c1), _max_gap(t2, c1))
        far = max(fdist(p, c1) for p in t1 + t2)
        radius = max(2 * spread / math.cos(gap / 2), far) * 1.25
    for _ in range(30):
        try:
            seq = [t1]
            seq += _radial(t1, c1, radius)
            for a, b in zip(path, path[1:]):
                seq.append(tuple(p + (b - a) for p in seq[-1]))
            small2 = _radial(t2, c2, radius)
            if _verified(g, seq, obstacles) is None or _verified(g, [t2] + small2, obstacles) is None:
                raise MorphFailed("radial stage")
            seq += _polar_verified(g, c2, seq[-1], small2[-1], obstacles)
            seq += list(reversed([t2] + small2[:-1]))
            return seq
        except MorphFailed:
            if len(inner) >= 2:
                radius *= 2
            else:
                radius /= 2
    raise MorphFailed("radial construction did not verify")


# --------------------------------------------------------------------------
# similarity frames


def _frame(origin: Point, f: Point) -> tuple[Callable, Callable]:
    """z -> f (z - origin) and its inverse."""

    def to(z):
        return cmul(f, Point(z[0], z[1]) - origin)

    def back(w):
        return origin + cdiv(w, f)

    return to, back


def _nudge(t: Tri, i: int, on_line: Callable[[Point], bool], budget: float) -> Tri:
    """Slide vertex i a little along one of its edges so that on_line(vertex) is false."""
    for j in ((i + 1) % 3, (i + 2) % 3):
        d = t[j] - t[i]
        lam = rat_floor(min(budget / fdist(t[j], t[i]), 0.25))
        p = t[i] + d * lam
        if not on_line(p):
            return _set(t, i, p)
    raise UnsupportedConfiguration("cannot move a vertex off a degenerate line")


# --------------------------------------------------------------------------
# case 2: two obstacles inside, frame with them at (0,1) and (0,0)


def _case2_reduce(t: Tri, e: Fraction) -> tuple[list[Tri], tuple[int, int, int]]:
    """Moves from t into the canonical triangle; labels are (apex, bottom-left, bottom-right)."""
    seq = [t]
    v = u = w = None
    sides = [(p[0] > 0) - (p[0] < 0) for p in t]
    for i in range(3):
        a, b = (i + 1) % 3, (i + 2) % 3
        if sides[a] == sides[b] != 0 and sides[i] == -sides[a]:
            w, pair = i, (a, b)
    sigma = sides[pair[0]]

    def cross_y(o):
        p, q = t[o], t[w]
        return p[1] + (q[1] - p[1]) * (-p[0]) / (q[0] - p[0])

    ya = {o: cross_y(o) for o in pair}
    v = pair[0] if ya[pair[0]] > 1 else pair[1]
    u = pair[1] if v == pair[0] else pair[0]
    assert ya[v] > 1 and ya[u] < 0
    cur = _set(t, v, _pt(0, ya[v]))
    seq.append(cur)
    pu, pw = cur[u], cur[w]
    u1 = pu + (pw - pu) * ((sigma * e - pu[0]) / (pw[0] - pu[0]))
    cur = _set(cur, u, u1)
    seq.append(cur)
    w1 = pw + (u1 - pw) * ((-sigma * e - pw[0]) / (u1[0] - pw[0]))
    cur = _set(cur, w, w1)
    seq.append(cur)
    cur = _set(cur, v, _pt(0, 1 + e))
    seq.append(cur)
    cur = _set(cur, u, _pt(sigma * e, -e))
    seq.append(cur)
    cur = _set(cur, w, _pt(-sigma * e, -e))
    seq.append(cur)
    labels = (v, w, u) if sigma > 0 else (v, u, w)
    return seq, labels


def _half_turn(cur: Tri, labels, flipped: bool, e: Fraction, right: bool):
    """Four moves inside the rectangle around the segment; they flip the frame and rotate labels."""
    d = e * e / (4 * (1 + e))
    A, L, R = labels
    h = 1 + e
    if right:
        moves = [(A, (d, h)), (R, (0, -e)), (L, (-e, h)), (A, (e, h))]
        new = (R, A, L)
    else:
        moves = [(A, (-d, h)), (L, (0, -e)), (R, (e, h)), (A, (-e, h))]
        new = (L, R, A)
    out = []
    for vtx, (x, y) in moves:
        p = _pt(x, y)
        if flipped:
            p = Point(-p[0], 1 - p[1])
        cur = _set(cur, vtx, p)
        out.append(cur)
    return out, new, not flipped


def _case2(g, t1: Tri, t2: Tri, obstacles, inner) -> list[Tri]:
    p1, p2 = inner
    to, back = _frame(p2, cdiv(Point(0, 1), p1 - p2))
    f1 = tuple(to(p) for p in t1)
    f2 = tuple(to(p) for p in t2)
    s0, s1 = Point(0, 0), Point(0, 1)

    def prepare(f):
        budget = min(_seg_seg_dist(s0, s1, f[i], f[(i + 1) % 3]) for i in range(3)) / 2
        pre = []
        for i in range(3):
            if f[i][0] == 0:
                f = _nudge(f, i, lambda p: p[0] == 0, budget)
                pre.append(f)
        return f, pre

    g1, pre1 = prepare(f1)
    g2, pre2 = prepare(f2)
    dist = min(_seg_seg_dist(s0, s1, f[i], f[(i + 1) % 3]) for f in (g1, g2) for i in range(3))
    xs = [abs(float(p[0])) for p in g1 + g2]
    e = rat_floor(min(dist / 4, min(xs) / 2))
    r1, lab1 = _case2_reduce(g1, e)
    r2, lab2 = _case2_reduce(g2, e)
    best = None
    for right in (True, False):
        labels, flipped, cur, moves = lab1, False, r1[-1], []
        for _ in range(6):
            if labels == lab2 and not flipped:
                break
            step, labels, flipped = _half_turn(cur, labels, flipped, e, right)
            moves += step
            cur = moves[-1]
        if labels == lab2 and not flipped and (best is None or len(moves) < len(best)):
            best = moves
    if best is None:
        raise UnsupportedConfiguration("the two triangles have different orientations")
    tail = list(reversed(r2[:-1])) + list(reversed(pre2[:-1])) + ([f2] if pre2 else [])
    frame_seq = [f1] + pre1 + r1[1:] + best + tail
    return [tuple(back(p) for p in f) for f in frame_seq]


# --------------------------------------------------------------------------
# case 3: three obstacles inside, one outside


def _nearest_on_segment(p, a, b) -> Point:
    d = b - a
    n = dot(d, d)
    if n == 0:
        return a
    s = min(max(Fraction(dot(p - a, d)) / n, Fraction(0)), Fraction(1))
    return a + d * s


def _nearest_in_hull(p, pts) -> Point:
    pts = list(dict.fromkeys(pts))
    if len(pts) == 3 and strictly_inside(tuple(pts), p):
        return p
    cands = [pts[0]] if len(pts) == 1 else [
        _nearest_on_segment(p, a, b) for i, a in enumerate(pts) for b in pts[i + 1:]]
    return min(cands, key=lambda q: dot(q - p, q - p))


def _case3_entry(t: Tri, budget: float):
    """Nudge t so the segment from (-1,0) to (0,0) leaves it through an edge interior.

    Returns (nudged triangle, nudge moves, (u, v, w) ccw with the crossed edge uv, crossing point).
    """
    pre = []
    for i in range(3):
        p = t[i]
        if p[1] == 0 and -1 < p[0] < 0:
            t = _nudge(t, i, lambda q: q[1] == 0, budget)
            pre.append(t)
    cyc = [0, 1, 2] if _orient(t) > 0 else [0, 2, 1]
    for k in range(3):
        u, v = cyc[k], cyc[(k + 1) % 3]
        a, b = t[u], t[v]
        if (a[1] > 0) != (b[1] > 0) and a[1] != 0 and b[1] != 0:
            x = a[0] + (b[0] - a[0]) * (-a[1]) / (b[1] - a[1])
            if -1 < x < 0:
                w = cyc[(k + 2) % 3]
                return t, pre, (u, v, w), _pt(x, 0)
    raise UnsupportedConfiguration("no edge separates the outside obstacle")


def _contains_all(t: Tri, pts) -> bool:
    return all(strictly_inside(t, p) for p in pts)


def _case3_reduce(t: Tri, uvw, z1: Point, K, X, Y, S) -> list[Tri]:
    """Moves from t to the V configuration (u at N, v at B, w at T)."""
    u, v, w = uvw
    B, T, N = _pt(X, -Y), _pt(X, Y), _pt(Fraction(-1, 2), 0)
    seq = [t]
    cur = t

    def far(p):
        r = fdist(p, z1)
        mu = max(Fraction(1), Fraction(math.ceil(S / r)))
        return z1 + (p - z1) * mu

    uf, vf = far(cur[u]), far(cur[v])
    a_max = max(fangle(k - z1) for k in K)
    a_u = fangle(cur[u] - z1)
    th = (a_max + a_u) / 2
    direction = Point(rat(math.cos(th)), rat(math.sin(th)))
    R = S
    for _ in range(60):
        W = z1 + direction * rat(R)
        if _contains_all((z1, vf, W) if _orient(cur) > 0 else (z1, W, vf), K) and \
                _contains_all(_set(_set(_set(cur, u, uf), v, vf), w, W), K):
            break
        R *= 2
    else:
        raise MorphFailed("no far apex contains the inner obstacles")
    for i, p in ((u, uf), (v, vf), (w, W), (u, z1)):
        cur = _set(cur, i, p)
        seq.append(cur)
    a_l = fangle(vf - z1)
    beta = math.atan2(float(Y), float(X + (-z1[0])))
    order = [(w, T), (v, B)] if beta - a_l < math.pi * 0.999 else [(v, B), (w, T)]
    for i, p in order:
        cur = _set(cur, i, p)
        seq.append(cur)
    cur = _set(cur, u, N)
    seq.append(cur)
    return seq


def _v_rotation(cur: Tri, roles, X, Y):
    """Five moves taking roles (N, B, T) = (x, y, z) to (y, z, x)."""
    x, y, z = roles
    ab, at = _pt(Fraction(-1, 2), -Y), _pt(Fraction(-1, 2), Y)
    B, T, N = _pt(X, -Y), _pt(X, Y), _pt(Fraction(-1, 2), 0)
    out = []
    for i, p in ((y, ab), (x, at), (z, B), (y, N), (x, T)):
        cur = _set(cur, i, p)
        out.append(cur)
    return out, (y, z, x)


def _case3(g, t1: Tri, t2: Tri, obstacles, inner, outer) -> list[Tri]:
    p0 = outer[0]
    q = _nearest_in_hull(p0, inner)
    if q == p0:
        raise UnsupportedConfiguration("outside obstacle lies in the hull of the inside ones")
    to, back = _frame(q, cdiv(Point(-1, 0), p0 - q))
    K = [to(p) for p in inner]
    f1 = tuple(to(p) for p in t1)
    f2 = tuple(to(p) for p in t2)
    entries = []
    for f in (f1, f2):
        budget = min(_boundary_dist(f, k) for k in K) / 2
        entries.append(_case3_entry(f, budget))
    zeta = min(-float(z[0]) for *_, z in entries)
    xk = max(float(k[0]) for k in K)
    ymax = max(abs(float(k[1])) for k in K)
    scale = 1
    for _ in range(12):
        X = Fraction(math.ceil(4 * (xk + 1) * scale))
        Y = Fraction(math.ceil(2 * (float(X) + 1) * (2 * ymax + 1) / min(zeta, 0.5)))
        S = 4 * float(X + Y)
        try:
            parts = []
            for (f, pre, uvw, z1) in entries:
                red = _case3_reduce(pre[-1] if pre else f, uvw, z1, K, X, Y, S)
                parts.append((pre, red, uvw))
            (pre1, red1, lab1), (pre2, red2, lab2) = parts
            cur, roles, rot = red1[-1], lab1, []
            for _ in range(3):
                if roles == lab2:
                    break
                step, roles = _v_rotation(cur, roles, X, Y)
                rot += step
                cur = rot[-1]
            if roles != lab2:
                raise UnsupportedConfiguration("the two triangles have different orientations")
            frame_seq = [f1] + pre1 + red1[1:] + rot + list(reversed(red2[:-1])) + list(reversed(pre2))
            if pre2:
                frame_seq.append(f2)
            seq = [tuple(back(p) for p in fr) for fr in frame_seq]
            if _verified(g, seq, obstacles) is not None:
                return seq
        except MorphFailed:
            pass
        scale *= 2
    raise MorphFailed("case 3 construction did not verify")


# --------------------------------------------------------------------------


def triangle_case(inst: Instance) -> int:
    """Number of obstacles inside the start triangle (the dispatch key)."""
    t = inst.start.pos
    return sum(strictly_inside(t, p) for p in inst.obstacles)


def triangle_compatible_morph(inst: Instance, *, seed: int = 0) -> Morph:
    """A verified morph between two triangle drawings past at most four obstacles."""
    g = inst.graph
    if g.n != 3 or not g.is_cycle():
        raise UnsupportedClass("triangle_compatible_morph needs a 3-cycle")
    obstacles = tuple(dict.fromkeys(inst.obstacles))
    if len(obstacles) > 4:
        raise ValueError("more than four obstacles")
    for d in (inst.start, inst.end):
        issues = validate_drawing(d) or obstacle_issues(d, obstacles)
        if issues:
            raise ValueError(f"invalid input drawing: {issues[0].kind}")
    bad = check_necessary_compatibility(Instance(g, inst.start, inst.end, obstacles))
    if bad:
        raise ValueError(f"obstacle {bad[0].obstacle} changes face")
    t1, t2 = tuple(inst.start.pos), tuple(inst.end.pos)
    if _orient(t1) != _orient(t2):
        raise UnsupportedConfiguration("the two triangles have different orientations")
    if t1 == t2:
        return Morph(g, (inst.start,))
    inner = [p for p in obstacles if strictly_inside(t1, p)]
    outer = [p for p in obstacles if not strictly_inside(t1, p)]
    k = len(inner)
    if k <= 1 or k == 4 or (k == 3 and not outer):
        seq = _radial_morph(g, t1, t2, obstacles, inner, seed)
    elif k == 2:
        seq = _case2(g, t1, t2, obstacles, inner)
    else:
        seq = _case3(g, t1, t2, obstacles, inner, outer)
    m = Morph.chain(g, [Drawing(g, p) for p in seq])
    v = verify_morph(m, obstacles)
    if v is not None:
        raise MorphFailed(f"triangle morph failed verification: {v}")
    return m
