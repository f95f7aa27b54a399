"""Plane primitives.

Points double as complex numbers (``x + iy``); all angle work is done with
complex products and conjugates so no branch cuts ever appear.  A
:class:`Direction` is a nonzero complex number taken up to real scale, which
is exactly a line direction mod pi.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

from .errors import CoincidenceError, InvalidDirectionError


@dataclass(frozen=True)
class Tolerance:
    """Relative tolerance with an absolute floor.

    The effective tolerance for an expression of natural size ``s`` is
    ``max(abs_floor, rel_eps * s)``.
    """

    rel_eps: float = 1e-9
    abs_floor: float = 1e-12

    def __post_init__(self):
        if not (self.rel_eps > 0 and self.abs_floor > 0):
            raise ValueError("tolerances must be strictly positive")

    def at(self, scale: float) -> float:
        return max(self.abs_floor, self.rel_eps * abs(scale))

    def small(self, value: float, scale: float) -> bool:
        return abs(value) <= self.at(scale)


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True)
class PlanePoint:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite point ({self.x}, {self.y})")

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    @classmethod
    def from_complex(cls, z: complex) -> "PlanePoint":
        return cls(float(z.real), float(z.imag))

    def as_tuple(self) -> Tuple[float, float]:
        return (self.x, self.y)

    def __iter__(self):
        yield self.x
        yield self.y

    def __abs__(self):
        return math.hypot(self.x, self.y)


PointLike = Union[PlanePoint, complex, Tuple[float, float]]


def as_complex(p: PointLike) -> complex:
    if isinstance(p, PlanePoint):
        return p.z
    if isinstance(p, (complex, float, int)):
        return complex(p)
    x, y = p
    return complex(x, y)


def as_point(p: PointLike) -> PlanePoint:
    if isinstance(p, PlanePoint):
        return p
    return PlanePoint.from_complex(as_complex(p))


@dataclass(frozen=True)
class Direction:
    """A line direction: nonzero complex number modulo nonzero real scale."""

    rep: complex

    def __post_init__(self):
        r = complex(self.rep)
        if not (cmath.isfinite(r) and r != 0):
            raise InvalidDirectionError(f"invalid direction {self.rep!r}")
        object.__setattr__(self, "rep", r)

    @classmethod
    def of(cls, v: PointLike) -> "Direction":
        return cls(as_complex(v))

    @classmethod
    def between(cls, p: PointLike, q: PointLike) -> "Direction":
        d = as_complex(q) - as_complex(p)
        if d == 0:
            raise CoincidenceError("direction between coincident points")
        return cls(d)

    def unit(self) -> complex:
        return self.rep / abs(self.rep)

    def cross_residual(self, other: "Direction") -> float:
        """|Im(d1 conj(d2))| / (|d1||d2|): the sine of the angle between them."""
        return abs((self.rep * other.rep.conjugate()).imag) / (abs(self.rep) * abs(other.rep))

    def equals(self, other: "Direction", tol: Tolerance = DEFAULT_TOL) -> bool:
        return self.cross_residual(other) <= tol.at(1.0)

    def angle_to(self, other: "Direction") -> float:
        """Unsigned angle between the two lines, in [0, pi/2]."""
        return math.asin(min(1.0, self.cross_residual(other)))

    def perpendicular(self) -> "Direction":
        return Direction(1j * self.rep)


@dataclass(frozen=True)
class InfinitePoint:
    """The real point at infinity in a given direction."""

    direction: Direction


@dataclass(frozen=True)
class Line:
    """The line ``l1*x + l2*y + l0 = 0``."""

    l0: float
    l1: float
    l2: float

    def __post_init__(self):
        if self.l1 == 0 and self.l2 == 0:
            raise ValueError("line needs a nonzero normal")

    @classmethod
    def through(cls, p: PointLike, q: PointLike) -> "Line":
        p, q = as_complex(p), as_complex(q)
        if p == q:
            raise CoincidenceError("line through coincident points")
        return cls.through_direction(p, Direction(q - p))

    @classmethod
    def through_direction(cls, p: PointLike, d: Direction) -> "Line":
        p = as_complex(p)
        n = 1j * d.rep
        return cls(-(n.real * p.real + n.imag * p.imag), n.real, n.imag)

    @property
    def normal(self) -> complex:
        return complex(self.l1, self.l2)

    @property
    def direction(self) -> Direction:
        return Direction(complex(self.l2, -self.l1))

    def value(self, p: PointLike) -> float:
        p = as_complex(p)
        return self.l1 * p.real + self.l2 * p.imag + self.l0

    def distance(self, p: PointLike) -> float:
        return abs(self.value(p)) / abs(self.normal)

    def foot(self, p: PointLike = 0j) -> complex:
        """Orthogonal projection of ``p`` onto the line."""
        n = self.normal
        return as_complex(p) - self.value(p) * n / abs(n) ** 2

    def coefficients(self) -> Tuple[float, float, float]:
        """(l1, l2, l0), the order used in serialized output."""
        return (self.l1, self.l2, self.l0)

    def normalized(self) -> "Line":
        """Scaled so the largest coefficient has modulus 1 and is positive."""
        c = (self.l1, self.l2, self.l0)
        big = max(c, key=abs)
        return Line(self.l0 / big, self.l1 / big, self.l2 / big)

    def proportional_to(self, other: "Line", tol: Tolerance = DEFAULT_TOL) -> bool:
        a = self.normalized().coefficients()
        b = other.normalized().coefficients()
        return max(abs(s - t) for s, t in zip(a, b)) <= tol.at(1.0)

    def intersect(self, other: "Line") -> Optional[PlanePoint]:
        det = self.l1 * other.l2 - self.l2 * other.l1
        scale = abs(self.normal) * abs(other.normal)
        if abs(det) <= 1e-14 * scale:
            return None
        x = (self.l2 * other.l0 - self.l0 * other.l2) / det
        y = (self.l0 * other.l1 - self.l1 * other.l0) / det
        return PlanePoint(x, y)


@dataclass(frozen=True)
class Circle:
    center: PlanePoint
    radius_sq: float

    @property
    def radius(self) -> float:
        return math.sqrt(self.radius_sq)

    @classmethod
    def through(cls, p: PointLike, q: PointLike, r: PointLike) -> "Circle":
        o = circumcenter(p, q, r)
        return cls(PlanePoint.from_complex(o), abs(as_complex(p) - o) ** 2)

    def power(self, p: PointLike) -> float:
        return abs(as_complex(p) - self.center.z) ** 2 - self.radius_sq

    def residual(self, p: PointLike) -> float:
        """Signed distance from ``p`` to the circle."""
        return abs(as_complex(p) - self.center.z) - self.radius


def circumcenter(p: PointLike, q: PointLike, r: PointLike) -> complex:
    p, q, r = as_complex(p), as_complex(q), as_complex(r)
    b, c = q - p, r - p
    den = 2 * (b.conjugate() * c).imag
    if abs(den) <= 1e-14 * abs(b) * abs(c):
        raise CoincidenceError("circumcircle of collinear or coincident points")
    o = -1j * (abs(b) ** 2 * c - abs(c) ** 2 * b) / den
    return p + o


def midpoint(p: PointLike, q: PointLike) -> PlanePoint:
    return PlanePoint.from_complex((as_complex(p) + as_complex(q)) / 2)


def reflect_point_over_point(x: PointLike, o: PointLike) -> PlanePoint:
    return PlanePoint.from_complex(2 * as_complex(o) - as_complex(x))


def isogonal_direction(w: Direction, u: Direction, v: Direction) -> Direction:
    """Reflect direction ``w`` across the bisectors of the angle (u, v)."""
    return Direction(u.unit() * v.unit() * w.unit().conjugate())


def bisectors(u: Direction, v: Direction) -> Tuple[Direction, Direction]:
    """The two (perpendicular) angle bisectors of lines along u and v."""
    s = cmath.sqrt(u.unit() * v.unit())
    return Direction(s), Direction(1j * s)


def isogonality_residual(x: PointLike, a: PointLike, c: PointLike,
                         b: PointLike, d: PointLike) -> float:
    """Im[(a-x)(c-x) conj((b-x)(d-x))].

    Zero exactly when the line pairs (XA, XC) and (XB, XD) are isogonal.
    """
    x = as_complex(x)
    diffs = [as_complex(p) - x for p in (a, c, b, d)]
    if any(dz == 0 for dz in diffs):
        raise CoincidenceError("x coincides with a vertex; use the tangent there")
    da, dc, db, dd = diffs
    return (da * dc * (db * dd).conjugate()).imag


def isogonality_scale(x: PointLike, a: PointLike, c: PointLike,
                      b: PointLike, d: PointLike) -> float:
    x = as_complex(x)
    return math.prod(abs(as_complex(p) - x) for p in (a, c, b, d))


def is_isogonal_at(x: PointLike, a: PointLike, c: PointLike, b: PointLike,
                   d: PointLike, tol: Tolerance = DEFAULT_TOL) -> bool:
    return tol.small(isogonality_residual(x, a, c, b, d), isogonality_scale(x, a, c, b, d))


def cross(p: complex, q: complex) -> float:
    return (p.conjugate() * q).imag
