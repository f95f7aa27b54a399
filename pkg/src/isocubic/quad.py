"""Quantities derived from four labeled points A, B, C, D (diagonals AC, BD)."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Dict, Tuple

from .cubic import (
    MONOMIALS,
    CubicCurve,
    IsoCubicProfile,
    asymptote_of,
    reducibility,
)
from .errors import CoincidenceError, ConjugateAtInfinity, DegeneracyError
from .geom import (
    DEFAULT_TOL,
    Direction,
    Line,
    PlanePoint,
    PointLike,
    Tolerance,
    as_complex,
    as_point,
    cross,
    is_isogonal_at,
)


class DegeneracyClass(str, enum.Enum):
    Generic = "Generic"
    Parallelogram = "Parallelogram"
    Collinear = "Collinear"
    ReducibleCubic = "ReducibleCubic"


@dataclass(frozen=True)
class Quadrilateral:
    a: PlanePoint
    b: PlanePoint
    c: PlanePoint
    d: PlanePoint

    def __post_init__(self):
        pts = [as_point(p) for p in (self.a, self.b, self.c, self.d)]
        for name, p in zip("abcd", pts):
            object.__setattr__(self, name, p)
        scale = self.scale()
        for i in range(4):
            for j in range(i + 1, 4):
                if abs(pts[i].z - pts[j].z) <= DEFAULT_TOL.at(scale):
                    raise CoincidenceError(f"vertices {'abcd'[i]} and {'abcd'[j]} coincide")

    @classmethod
    def of(cls, *pts: PointLike) -> "Quadrilateral":
        if len(pts) == 1:
            pts = tuple(pts[0])
        return cls(*(as_point(p) for p in pts))

    @property
    def vertices(self) -> Tuple[PlanePoint, PlanePoint, PlanePoint, PlanePoint]:
        return (self.a, self.b, self.c, self.d)

    def complex_vertices(self) -> Tuple[complex, complex, complex, complex]:
        return tuple(p.z for p in self.vertices)

    def scale(self) -> float:
        return max(abs(p) for p in self.vertices) or 1.0

    def scaled(self, s: float) -> "Quadrilateral":
        return Quadrilateral(*(PlanePoint(s * p.x, s * p.y) for p in self.vertices))


def _is_collinear(q: Quadrilateral, tol: Tolerance) -> bool:
    a, b, c, d = q.complex_vertices()
    far = max((b, c, d), key=lambda p: abs(p - a))
    e = far - a
    return all(tol.small(cross(e, p - a), abs(e) * abs(p - a)) for p in (b, c, d))


def _is_parallelogram(q: Quadrilateral, tol: Tolerance) -> bool:
    a, b, c, d = q.complex_vertices()
    return abs(a + c - b - d) <= tol.at(q.scale())


def classify(q: Quadrilateral, tol: Tolerance = DEFAULT_TOL) -> DegeneracyClass:
    if _is_collinear(q, tol):
        return DegeneracyClass.Collinear
    if _is_parallelogram(q, tol):
        return DegeneracyClass.Parallelogram
    if reducibility(_synthesize(q), tol) is not None:
        return DegeneracyClass.ReducibleCubic
    return DegeneracyClass.Generic


# Bivariate complex polynomials as {(i, j): coefficient of x^i y^j}.
Poly = Dict[Tuple[int, int], complex]


def _mul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for (i1, j1), c1 in p.items():
        for (i2, j2), c2 in q.items():
            k = (i1 + i2, j1 + j2)
            out[k] = out.get(k, 0) + c1 * c2
    return out


def _linear(shift: complex, conj: bool = False) -> Poly:
    # z - shift, or its conjugate x - iy - conj(shift)
    if conj:
        return {(1, 0): 1, (0, 1): -1j, (0, 0): -shift.conjugate()}
    return {(1, 0): 1, (0, 1): 1j, (0, 0): -shift}


def _synthesize(q: Quadrilateral) -> CubicCurve:
    a, b, c, d = q.complex_vertices()
    f = _mul(_mul(_linear(a), _linear(c)), _mul(_linear(b, True), _linear(d, True)))
    return CubicCurve(*(f.get(m, 0j).imag for m in MONOMIALS))


def cubic_from_quadrilateral(q: Quadrilateral, tol: Tolerance = DEFAULT_TOL) -> CubicCurve:
    """Coefficients of Im[(z-a)(z-c) conj((z-b)(z-d))] = 0.

    The cubic part is (x^2+y^2)(u x + v y) with u = Im(b+d-a-c) and
    v = Re(a+c-b-d).
    """
    if _is_collinear(q, tol):
        raise DegeneracyError("collinear quadrilateral has no cubic locus", DegeneracyClass.Collinear)
    if _is_parallelogram(q, tol):
        raise DegeneracyError("parallelogram locus is line at infinity plus hyperbola",
                              DegeneracyClass.Parallelogram)
    return _synthesize(q)


def spiral_center(q: Quadrilateral, tol: Tolerance = DEFAULT_TOL) -> PlanePoint:
    """Fixed point of the spiral similarity A -> B, D -> C: (ac - bd)/(a + c - b - d)."""
    a, b, c, d = q.complex_vertices()
    if _is_parallelogram(q, tol):
        raise DegeneracyError("parallelogram has no finite spiral center", DegeneracyClass.Parallelogram)
    return PlanePoint.from_complex((a * c - b * d) / (a + c - b - d))


def involution_k(q: Quadrilateral, center: PointLike = None, tol: Tolerance = DEFAULT_TOL) -> complex:
    P = as_complex(center) if center is not None else spiral_center(q, tol).z
    a, b, c, d = q.complex_vertices()
    return (a - P) * (c - P)


def spiral_inverse(x: PointLike, profile: IsoCubicProfile) -> PlanePoint:
    """x' = P + k/(x - P).  Raises ConjugateAtInfinity at x = P."""
    z = as_complex(x)
    P = profile.spiral_center.z
    if z == P:
        raise ConjugateAtInfinity("the conjugate of the spiral center is at infinity",
                                  profile.infinity_direction)
    return PlanePoint.from_complex(P + profile.involution_k / (z - P))


def newton_line(q: Quadrilateral, tol: Tolerance = DEFAULT_TOL) -> Line:
    a, b, c, d = q.complex_vertices()
    m, n = (a + c) / 2, (b + d) / 2
    if abs(m - n) <= tol.at(q.scale()):
        raise DegeneracyError("diagonal midpoints coincide", DegeneracyClass.Parallelogram)
    return Line.through(m, n)


def profile_from_quadrilateral(q: Quadrilateral, tol: Tolerance = DEFAULT_TOL) -> IsoCubicProfile:
    cls = classify(q, tol)
    if cls is not DegeneracyClass.Generic:
        raise DegeneracyError(f"quadrilateral is {cls.value}", cls)
    curve = _synthesize(q)
    P = spiral_center(q, tol)
    a, b, c, d = q.complex_vertices()
    return IsoCubicProfile(
        u=curve.c30,
        v=curve.c21,
        spiral_center=P,
        involution_k=involution_k(q, P),
        asymptote=asymptote_of(curve, tol),
        infinity_direction=Direction((a + c - b - d)),
        newton_line=newton_line(q, tol),
    )


def is_isogonal_pair_in_quad(x: PointLike, y: PointLike, q: Quadrilateral,
                             tol: Tolerance = DEFAULT_TOL) -> bool:
    """At every vertex V, (VX, VY) and (V prev, V next) share bisectors."""
    verts = q.complex_vertices()
    x, y = as_complex(x), as_complex(y)
    for v in verts:
        if v == x or v == y:
            raise CoincidenceError("point coincides with a vertex")
    for i, v in enumerate(verts):
        prev, nxt = verts[i - 1], verts[(i + 1) % 4]
        # residual form: vertex v plays the role of the apex
        if not is_isogonal_at(v, x, y, prev, nxt, tol):
            return False
    return True
