"""JSON encodings of instances, morphs and reduction roles.

Coordinates are canonical rational strings ("num/den"); output uses sorted
keys so equal objects serialize to identical bytes.
"""
from __future__ import annotations

import json

from .drawing import Drawing, GraphError, Instance, PlaneGraph
from .exact import Point, format_rational, parse_rational
from .verify import Morph


class FormatError(ValueError):
    """Malformed JSON input."""


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None


def point_to_json(p) -> list[str]:
    return [format_rational(p[0]), format_rational(p[1])]


def point_from_json(obj, what: str) -> Point:
    if not isinstance(obj, list) or len(obj) != 2:
        raise FormatError(f"{what}: expected [x, y]")
    try:
        return Point(parse_rational(obj[0]), parse_rational(obj[1]))
    except ValueError as exc:
        raise FormatError(f"{what}: {exc}") from None


def graph_to_json(g: PlaneGraph) -> dict:
    index = {e: i for i, e in enumerate(g.edges)}
    rotation = {str(v): [index[(min(v, w), max(v, w))] for w in g.rotation[v]] for v in range(g.n)}
    return {"n": g.n, "edges": [list(e) for e in g.edges], "rotation": rotation,
            "outer_face": list(g.outer) if g.outer is not None else None}


def graph_from_json(obj) -> PlaneGraph:
    if not isinstance(obj, dict):
        raise FormatError("graph: expected an object")
    try:
        n = obj["n"]
        edges = obj["edges"]
        rot = obj["rotation"]
    except KeyError as exc:
        raise FormatError(f"graph: missing field {exc}") from None
    if not isinstance(n, int) or n < 0:
        raise FormatError("graph.n must be a non-negative integer")
    if not isinstance(edges, list) or not all(isinstance(e, list) and len(e) == 2
                                              and all(isinstance(x, int) for x in e) for e in edges):
        raise FormatError("graph.edges must be a list of [u, v] integer pairs")
    edges = tuple((min(u, v), max(u, v)) for u, v in edges)
    if not isinstance(rot, dict):
        raise FormatError("graph.rotation must map vertex ids to edge index lists")
    rotation = []
    for v in range(n):
        seq = rot.get(str(v), [])
        out = []
        for i in seq:
            if not isinstance(i, int) or not 0 <= i < len(edges) or v not in edges[i]:
                raise FormatError(f"graph.rotation[{v}]: bad edge index {i!r}")
            u, w = edges[i]
            out.append(w if u == v else u)
        rotation.append(tuple(out))
    outer = obj.get("outer_face")
    if outer is not None:
        if not isinstance(outer, list) or len(outer) != 2:
            raise FormatError("graph.outer_face must be a dart [u, v] or null")
        outer = (outer[0], outer[1])
    try:
        return PlaneGraph(n, edges, tuple(rotation), outer)
    except GraphError as exc:
        raise FormatError(f"graph: {exc}") from None


def drawing_to_json(d: Drawing) -> dict:
    return {str(v): point_to_json(p) for v, p in enumerate(d.pos)}


def drawing_from_json(g: PlaneGraph, obj, what: str) -> Drawing:
    if not isinstance(obj, dict):
        raise FormatError(f"{what}: expected an object of vertex positions")
    if set(obj) != {str(v) for v in range(g.n)}:
        raise FormatError(f"{what}: must place exactly the vertices 0..{g.n - 1}")
    return Drawing(g, tuple(point_from_json(obj[str(v)], f"{what}[{v}]") for v in range(g.n)))


def instance_to_json(inst: Instance) -> dict:
    return {"graph": graph_to_json(inst.graph), "start": drawing_to_json(inst.start),
            "end": drawing_to_json(inst.end), "obstacles": [point_to_json(p) for p in inst.obstacles]}


def instance_from_json(obj) -> Instance:
    if not isinstance(obj, dict):
        raise FormatError("instance: expected an object")
    for k in ("graph", "start", "end"):
        if k not in obj:
            raise FormatError(f"instance: missing field '{k}'")
    g = graph_from_json(obj["graph"])
    obs = obj.get("obstacles", [])
    if not isinstance(obs, list):
        raise FormatError("obstacles must be a list")
    return Instance(g, drawing_from_json(g, obj["start"], "start"), drawing_from_json(g, obj["end"], "end"),
                    tuple(point_from_json(p, f"obstacles[{i}]") for i, p in enumerate(obs)))


def morph_to_json(m: Morph) -> dict:
    return {"steps": [drawing_to_json(d) for d in m.drawings]}


def morph_from_json(g: PlaneGraph, obj) -> Morph:
    if not isinstance(obj, dict) or not isinstance(obj.get("steps"), list) or not obj["steps"]:
        raise FormatError("morph: expected {\"steps\": [drawing, ...]} with at least one drawing")
    return Morph(g, tuple(drawing_from_json(g, d, f"steps[{i}]") for i, d in enumerate(obj["steps"])))


def gadget_name(gid: tuple) -> str:
    return ":".join(str(x) for x in gid)


def roles_to_json(out) -> dict:
    """Role map of a reduction: per vertex its gadget and role, plus the grid summary."""
    grid = out.grid
    return {
        "roles": {str(v): {"gadget": gadget_name(g), "role": r} for v, (g, r) in out.roles.items()},
        "grid": {"rows": grid.n_rows, "columns": grid.n_cols, "pitch": grid.pitch,
                 "column_literal": list(grid.column_literal),
                 "placement": {gadget_name(g): k for g, k in grid.placement.items()},
                 "depth": grid.depth()},
        "sync": {"start": {k: point_to_json(p) for k, p in grid.sync["start"].items()},
                 "target": {k: point_to_json(p) for k, p in grid.sync["target"].items()}},
    }
