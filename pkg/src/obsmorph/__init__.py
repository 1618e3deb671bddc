"""Exact checking and construction of planar morphs that avoid point obstacles."""
from .exact import AlgebraicTime, Point, QuadraticPoly, orientation, on_segment, segments_intersect
from .drawing import Drawing, Instance, PlaneGraph, locate_point, validate_drawing
from .verify import Morph, Violation, sample_check, verify_linear_step, verify_morph

__all__ = [
    "AlgebraicTime", "Drawing", "Instance", "Morph", "PlaneGraph", "Point", "QuadraticPoly",
    "Violation", "locate_point", "on_segment", "orientation", "sample_check", "segments_intersect",
    "validate_drawing", "verify_linear_step", "verify_morph",
]
