"""Uniform-grid bucketing of bounding boxes.

Used only to prune candidate pairs.  Boxes are converted to floats and
padded, so the filter is conservative: any pair whose exact boxes touch is
always reported.  Every reported pair is then decided exactly by the caller.
"""
from __future__ import annotations

import math
from collections import defaultdict

_MAX_CELLS = 4096


def fbox(points) -> tuple[float, float, float, float]:
    xs = [float(p[0]) for p in points]
    ys = [float(p[1]) for p in points]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    pad = 1e-9 * (1.0 + max(abs(x0), abs(x1), abs(y0), abs(y1)))
    return (x0 - pad, y0 - pad, x1 + pad, y1 + pad)


def boxes_overlap(a, b) -> bool:
    return a[0] <= b[2] and b[0] <= a[2] and a[1] <= b[3] and b[1] <= a[3]


class GridIndex:
    def __init__(self, boxes: list[tuple[float, float, float, float]]):
        self.boxes = boxes
        self.buckets: dict[tuple[int, int], list[int]] = defaultdict(list)
        self.big: list[int] = []
        if not boxes:
            self.cell = 1.0
            return
        x0 = min(b[0] for b in boxes)
        y0 = min(b[1] for b in boxes)
        x1 = max(b[2] for b in boxes)
        y1 = max(b[3] for b in boxes)
        extent = max(x1 - x0, y1 - y0, 1e-12)
        sizes = sorted(max(b[2] - b[0], b[3] - b[1]) for b in boxes)
        median = sizes[len(sizes) // 2]
        self.cell = max(median, extent / max(1.0, math.sqrt(len(boxes))), 1e-12)
        for i, b in enumerate(boxes):
            cells = self._cells(b)
            if cells is None:
                self.big.append(i)
                continue
            for c in cells:
                self.buckets[c].append(i)

    def _cells(self, b):
        c = self.cell
        i0, i1 = math.floor(b[0] / c), math.floor(b[2] / c)
        j0, j1 = math.floor(b[1] / c), math.floor(b[3] / c)
        if (i1 - i0 + 1) * (j1 - j0 + 1) > _MAX_CELLS:
            return None
        return [(i, j) for i in range(i0, i1 + 1) for j in range(j0, j1 + 1)]

    def query(self, b) -> set[int]:
        out = set()
        cells = self._cells(b)
        if cells is None:
            out.update(i for i, bb in enumerate(self.boxes) if boxes_overlap(b, bb))
            return out
        for c in cells:
            for i in self.buckets.get(c, ()):
                if boxes_overlap(b, self.boxes[i]):
                    out.add(i)
        for i in self.big:
            if boxes_overlap(b, self.boxes[i]):
                out.add(i)
        return out

    def pairs(self):
        """Candidate pairs (i, j), i < j, with overlapping boxes."""
        seen = set()
        for members in self.buckets.values():
            m = len(members)
            for a in range(m):
                i = members[a]
                bi = self.boxes[i]
                for b in range(a + 1, m):
                    j = members[b]
                    key = (i, j) if i < j else (j, i)
                    if key in seen:
                        continue
                    if boxes_overlap(bi, self.boxes[j]):
                        seen.add(key)
        for i in self.big:
            for j in range(len(self.boxes)):
                if j != i:
                    key = (i, j) if i < j else (j, i)
                    if key not in seen and boxes_overlap(self.boxes[i], self.boxes[j]):
                        seen.add(key)
        return sorted(seen)
