"""Isogonal cubics of quadrilaterals: synthesis, classification and constructions."""

from .constructions import (
    ConjugatePair,
    CurveContext,
    circle_fourth_point,
    conjugate_on_curve,
    cubic_add,
    generating_quadrilateral,
    parallel_bisector_partner,
    tangent_by_reflection,
    tangent_points_from,
    third_point_by_reflection,
)
from .cubic import ClassificationReport, CubicCurve, IsoCubicProfile, Reason, classify_cubic
from .degenerate import LineAndCircle, LineAtInfinityAndHyperbola, degenerate_locus
from .geom import DEFAULT_TOL, Circle, Direction, InfinitePoint, Line, PlanePoint, Tolerance
from .quad import DegeneracyClass, Quadrilateral, cubic_from_quadrilateral, profile_from_quadrilateral

__all__ = [
    "ClassificationReport", "Circle", "ConjugatePair", "CubicCurve", "CurveContext",
    "DEFAULT_TOL", "DegeneracyClass", "Direction", "InfinitePoint", "IsoCubicProfile",
    "Line", "LineAndCircle", "LineAtInfinityAndHyperbola", "PlanePoint", "Quadrilateral",
    "Reason", "Tolerance", "circle_fourth_point", "classify_cubic", "conjugate_on_curve",
    "cubic_add", "cubic_from_quadrilateral", "degenerate_locus", "generating_quadrilateral",
    "parallel_bisector_partner", "profile_from_quadrilateral", "tangent_by_reflection",
    "tangent_points_from", "third_point_by_reflection",
]
