"""Projective and conic geometry for checking isogonal-conic configurations.

Points, lines and conics work over exact rationals or floats. On top of them
sit triangle constructions, the configuration builders and claim checks in
:mod:`isoconic.lab`, the seeded suite runner in :mod:`isoconic.harness`, SVG
output in :mod:`isoconic.render` and the command line in :mod:`isoconic.cli`.
"""

from .conics import (
    Conic,
    ConicClass,
    ConicParam,
    IntersectionSet,
    conic_axes,
    conic_center,
    conic_classify,
    conic_conic_intersect,
    conic_through_five_points,
    cross_ratio_on_conic,
    fourth_common_point,
    intersection_multiplicity_at,
    line_conic_intersect,
    pole,
    polar,
    second_intersection,
    tangent_line_at,
)
from .errors import GeometryError
from .projective import HLine, HPoint, cross_ratio_line, join, meet
from .triangle import Triangle, circle_through, circumcircle, circumconic, isogonal_conjugate, spiral_center

__version__ = "0.1.0"

__all__ = [
    "Conic",
    "ConicClass",
    "ConicParam",
    "GeometryError",
    "HLine",
    "HPoint",
    "IntersectionSet",
    "Triangle",
    "circle_through",
    "circumcircle",
    "circumconic",
    "conic_axes",
    "conic_center",
    "conic_classify",
    "conic_conic_intersect",
    "conic_through_five_points",
    "cross_ratio_line",
    "cross_ratio_on_conic",
    "fourth_common_point",
    "intersection_multiplicity_at",
    "isogonal_conjugate",
    "join",
    "line_conic_intersect",
    "meet",
    "pole",
    "polar",
    "second_intersection",
    "spiral_center",
    "tangent_line_at",
]
