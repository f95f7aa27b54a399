"""Loci for the two excluded quadrilateral shapes.

* four collinear points: the common line plus (when it exists) the circle
  centered on it whose inversion swaps A<->C and B<->D;
* a parallelogram: the line at infinity plus a hyperbola centered at the
  midpoint of AC whose asymptotes are the bisectors of the vertex angle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple, Union

from .errors import DegeneracyError
from .geom import (
    DEFAULT_TOL,
    Circle,
    Direction,
    Line,
    PlanePoint,
    PointLike,
    Tolerance,
    as_complex,
    bisectors,
)
from .quad import DegeneracyClass, Quadrilateral, _is_collinear, _is_parallelogram


@dataclass(frozen=True)
class LineAndCircle:
    line: Line
    circle: Optional[Circle]

    variant = "LineAndCircle"


@dataclass(frozen=True)
class LineAtInfinityAndHyperbola:
    """``conic`` holds (x^2, xy, y^2, x, y, 1) coefficients."""

    conic: Tuple[float, float, float, float, float, float]
    center: PlanePoint
    asymptote_directions: Tuple[Direction, Direction]

    variant = "LineAtInfinityAndHyperbola"

    def value(self, p: PointLike) -> float:
        z = as_complex(p)
        x, y = z.real, z.imag
        A, B, C, D, E, F = self.conic
        return A * x * x + B * x * y + C * y * y + D * x + E * y + F

    def discriminant(self) -> float:
        A, B, C = self.conic[:3]
        return B * B - 4 * A * C


DegenerateLocus = Union[LineAndCircle, LineAtInfinityAndHyperbola]


def collinear_locus(q: Quadrilateral, tol: Tolerance = DEFAULT_TOL) -> LineAndCircle:
    if not _is_collinear(q, tol):
        raise DegeneracyError("vertices are not collinear", DegeneracyClass.Generic)
    a, b, c, d = q.complex_vertices()
    far = max((b, c, d), key=lambda p: abs(p - a))
    line = Line.through(a, far)
    origin = line.foot(0j)
    e = line.direction.unit()
    sa, sb, sc, sd = (((p - origin) * e.conjugate()).real for p in (a, b, c, d))
    den = sa + sc - sb - sd
    if abs(den) <= tol.at(q.scale()):
        return LineAndCircle(line, None)
    o = (sa * sc - sb * sd) / den
    r2 = (sa - o) * (sc - o)
    if r2 <= tol.at(q.scale() ** 2):
        return LineAndCircle(line, None)
    return LineAndCircle(line, Circle(PlanePoint.from_complex(origin + o * e), r2))


def parallelogram_locus(q: Quadrilateral, tol: Tolerance = DEFAULT_TOL) -> LineAtInfinityAndHyperbola:
    if _is_collinear(q, tol):
        raise DegeneracyError("collinear quadrilateral: use collinear_locus", DegeneracyClass.Collinear)
    if not _is_parallelogram(q, tol):
        raise DegeneracyError("not a parallelogram", DegeneracyClass.Generic)
    a, b, c, d = q.complex_vertices()
    m = (a + c) / 2
    e1, e2 = bisectors(Direction(b - a), Direction(d - a))
    # L_k(p) = n_k . (p - m), n_k normal to the asymptote e_k
    (a1, b1), (a2, b2) = [(-e.unit().imag, e.unit().real) for e in (e1, e2)]
    k1 = a1 * m.real + b1 * m.imag
    k2 = a2 * m.real + b2 * m.imag
    at_a = (a1 * a.real + b1 * a.imag - k1) * (a2 * a.real + b2 * a.imag - k2)
    conic = (a1 * a2, a1 * b2 + a2 * b1, b1 * b2,
             -(a1 * k2 + a2 * k1), -(b1 * k2 + b2 * k1), k1 * k2 - at_a)
    big = max(conic, key=abs)
    conic = tuple(x / big for x in conic)
    return LineAtInfinityAndHyperbola(conic, PlanePoint.from_complex(m), (e1, e2))


def degenerate_locus(q: Quadrilateral, tol: Tolerance = DEFAULT_TOL) -> DegenerateLocus:
    if _is_collinear(q, tol):
        return collinear_locus(q, tol)
    return parallelogram_locus(q, tol)
