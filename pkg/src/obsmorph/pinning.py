"""Turning an obstacle-free morph with one or two extra vertices into a morph
in which those vertices stand still, then reading them as obstacles."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ._geom import MorphFailed, UnsupportedClass, cdiv, cmul
from .cycles import cycle_shift_morph
from .drawing import (Drawing, FaceMismatch, Instance, check_necessary_compatibility, free_vertices,
                      is_shifted_version)
from .exact import Point
from .forest import forest_morph
from .verify import Morph, _first_meeting, verify_morph


class PinCollision(ValueError):
    pass


@dataclass(frozen=True)
class FrameTrack:
    """Per emitted drawing, the similarity z -> offset + scale * z (scale as a complex number)."""

    offsets: tuple[Point, ...]
    scales: tuple[Point, ...]


def _frame(d_pos, pins, anchor):
    if len(pins) == 1:
        return anchor[0] - d_pos[pins[0]], Point(1, 0)
    a, b = d_pos[pins[0]], d_pos[pins[1]]
    if a == b:
        raise PinCollision("pinned vertices coincide")
    s = cdiv(anchor[1] - anchor[0], b - a)
    return anchor[0] - cmul(s, a), s


def _apply(pos, off, s):
    if s == (1, 0):
        return tuple(p + off for p in pos)
    return tuple(off + cmul(s, p) for p in pos)


def pin_frame_transform(m: Morph, pinned: Sequence[int], obstacles=(), *, max_refine: int = 256,
                        return_track: bool = False):
    """Hold the pinned vertices fixed by composing every drawing with a similarity.

    Each step is split into N equal sub-steps, N doubling until the
    transformed step verifies.
    """
    pinned = list(pinned)
    if not 1 <= len(pinned) <= 2:
        raise ValueError("pin one or two vertices")
    first, last = m.first.pos, m.last.pos
    if any(first[v] != last[v] for v in pinned):
        raise ValueError("pinned vertices must start and end at the same place")
    anchor = [first[v] for v in pinned]
    g = m.graph
    if len(pinned) == 2:
        for a, b in zip(m.drawings, m.drawings[1:]):
            if a.pos[pinned[0]] == a.pos[pinned[1]] or _first_meeting(
                    a.pos[pinned[0]], b.pos[pinned[0]], a.pos[pinned[1]], b.pos[pinned[1]]) is not None:
                raise PinCollision("pinned vertices meet during the morph")
    out = [m.first]
    offs, scales = [Point(0, 0)], [Point(1, 0)]
    for a, b in zip(m.drawings, m.drawings[1:]):
        n = 1
        while True:
            chunk, fo, fs = [], [], []
            for j in range(1, n + 1):
                t = Fraction(j, n)
                pos = tuple(p + (q - p) * t for p, q in zip(a.pos, b.pos))
                off, s = _frame(pos, pinned, anchor)
                chunk.append(Drawing(g, _apply(pos, off, s)))
                fo.append(off)
                fs.append(s)
            sub = Morph(g, (out[-1],) + tuple(chunk))
            if verify_morph(sub, obstacles) is None:
                break
            n *= 2
            if n > max_refine:
                raise MorphFailed("frame refinement hit its cap")
        out.extend(chunk)
        offs.extend(fo)
        scales.extend(fs)
    res = Morph(g, tuple(out))
    if return_track:
        return res, FrameTrack(tuple(offs), tuple(scales))
    return res


def restrict(m: Morph, n: int) -> Morph:
    g = m.graph.induced_prefix(n)
    return Morph(g, tuple(Drawing(g, d.pos[:n]) for d in m.drawings))


def small_obstacle_morph(inst: Instance, *, seed: int = 0) -> Morph:
    """A verified morph for an instance with at most two obstacles.

    Forests go through the forest morph with the obstacles as extra isolated
    vertices; cycles with a free vertex whose target is a shifted version go
    through the cycle shift.  Other classes raise UnsupportedClass.
    """
    P = inst.obstacles
    if len(P) > 2:
        raise ValueError("more than two obstacles")
    bad = check_necessary_compatibility(inst)
    if bad:
        raise ValueError(f"obstacle {bad[0].obstacle} changes face")
    g = inst.graph
    if g.is_forest():
        if not P:
            return forest_morph(g, inst.start, inst.end, (), seed=seed)
        n = g.n
        aug = g.with_isolated(len(P))
        d1 = Drawing(aug, inst.start.pos + P)
        d2 = Drawing(aug, inst.end.pos + P)
        m = forest_morph(aug, d1, d2, (), seed=seed)
        pinned = pin_frame_transform(m, list(range(n, n + len(P))))
        out = restrict(pinned, n)
    elif g.is_cycle():
        offset = is_shifted_version(inst.start, inst.end)
        if inst.start.pos == inst.end.pos:
            return Morph(g, (inst.start,))
        if offset is None or not free_vertices(inst.start):
            raise UnsupportedClass("cycle instances need a free vertex and a shifted target")
        out = cycle_shift_morph(inst.start, offset, P)
    else:
        raise UnsupportedClass("no obstacle-free morph provider for this graph class")
    v = verify_morph(out, P)
    if v is not None:
        raise MorphFailed(f"restricted morph failed verification: {v}")
    return out
