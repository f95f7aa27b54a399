"""Straightedge-style constructions on an isogonal cubic.

Each construction works from the curve's intrinsic data only: the spiral
center P, its conjugate point at infinity, and the bisector pairs at a
point (taken from any conjugate pair, all of which give the same
bisectors at points of the curve).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from . import cubic as cb
from .cubic import CubicCurve, IsoCubicProfile, classify_cubic
from .errors import (
    CoincidenceError,
    ConjugateAtInfinity,
    GeometryError,
    NotIsogonalFormError,
    NotOnCurveError,
    SingularPointError,
)
from .geom import (
    DEFAULT_TOL,
    Circle,
    Direction,
    InfinitePoint,
    Line,
    PlanePoint,
    PointLike,
    Tolerance,
    as_complex,
    bisectors,
    isogonal_direction,
)
from .quad import Quadrilateral, cubic_from_quadrilateral, profile_from_quadrilateral

log = logging.getLogger(__name__)

MaybeInfinite = Union[PlanePoint, InfinitePoint]


@dataclass(frozen=True)
class ConjugatePair:
    x: MaybeInfinite
    x_conj: MaybeInfinite


@dataclass(frozen=True)
class CurveContext:
    curve: CubicCurve
    profile: IsoCubicProfile
    quad: Optional[Quadrilateral] = None
    reference_pairs: Tuple[Tuple[complex, complex], ...] = field(default=())
    tol: Tolerance = DEFAULT_TOL

    @classmethod
    def from_quadrilateral(cls, q: Quadrilateral, tol: Tolerance = DEFAULT_TOL) -> "CurveContext":
        curve = cubic_from_quadrilateral(q, tol)
        profile = profile_from_quadrilateral(q, tol)
        a, b, c, d = q.complex_vertices()
        return cls(curve, profile, q, ((a, c), (b, d)), tol)

    @classmethod
    def from_curve(cls, curve: CubicCurve, tol: Tolerance = DEFAULT_TOL) -> "CurveContext":
        report = classify_cubic(curve, tol)
        if not report.is_isogonal:
            raise NotIsogonalFormError(f"curve is not an isogonal cubic ({report.reason.value})")
        ctx = cls(curve, report.profile, None, (), tol)
        return ctx.with_pairs(_synthesize_pairs(ctx))

    def with_pairs(self, pairs: Sequence[Tuple[complex, complex]]) -> "CurveContext":
        return CurveContext(self.curve, self.profile, self.quad, tuple(pairs), self.tol)

    @property
    def P(self) -> complex:
        return self.profile.spiral_center.z

    @property
    def infinity(self) -> InfinitePoint:
        return InfinitePoint(self.profile.infinity_direction)

    def scale(self) -> float:
        return max(abs(self.P), cb.length_scale(self.curve))

    def conj(self, z: MaybeInfinite) -> MaybeInfinite:
        """Closed-form conjugate, with P <-> point at infinity."""
        if isinstance(z, InfinitePoint):
            return self.profile.spiral_center
        w = as_complex(z)
        if abs(w - self.P) <= self.tol.at(self.scale()):
            return self.infinity
        return PlanePoint.from_complex(self.profile.conjugate(w))


def _synthesize_pairs(ctx: CurveContext) -> List[Tuple[complex, complex]]:
    """Two conjugate pairs built from scanline samples around P."""
    L = ctx.scale()
    offsets = [L * k / 3 for k in (-5, -3, -1, 2, 4, 6)]
    pts = cb.scanline_points(ctx.curve, offsets, center=ctx.P, tol=ctx.tol)
    pairs = []
    for p in sorted(pts, key=lambda p: -abs(p.z - ctx.P)):
        z = p.z
        if cb.gradient_is_zero(ctx.curve, z, ctx.tol):
            continue
        zc = ctx.profile.conjugate(z)
        if abs(zc - z) < 1e-3 * L or abs(zc - ctx.P) > 1e3 * L:
            continue
        if any(min(abs(z - q), abs(zc - q)) < 1e-2 * L for pr in pairs for q in pr):
            continue
        pairs.append((z, zc))
        if len(pairs) == 2:
            break
    return pairs


def _require_on_curve(ctx: CurveContext, x: complex):
    if not cb.is_on_curve(ctx.curve, x, ctx.tol):
        raise NotOnCurveError("point is not on the curve", cb.curve_residual(ctx.curve, x))


def _reference_pair(ctx: CurveContext, x: complex) -> Optional[Tuple[complex, complex]]:
    """Stored pair best separated from x (neither member may coincide with x)."""
    best, best_d = None, 0.0
    eps = ctx.tol.at(ctx.scale()) * 1e3
    for r, rp in ctx.reference_pairs:
        d = min(abs(r - x), abs(rp - x))
        if d > eps and d > best_d:
            best, best_d = (r, rp), d
    return best


def _isogonal_at(ctx: CurveContext, x: complex, w: Direction) -> Direction:
    pair = _reference_pair(ctx, x)
    if pair is None:
        raise GeometryError("no reference pair away from the point")
    r, rp = pair
    return isogonal_direction(w, Direction(r - x), Direction(rp - x))


def _direction_to(x: complex, target: MaybeInfinite) -> Direction:
    if isinstance(target, InfinitePoint):
        return target.direction
    return Direction(target.z - x)


def conjugate_on_curve(ctx: CurveContext, x: MaybeInfinite) -> ConjugatePair:
    """Isogonal conjugate from two chords: Y = PX . C, then X' = P_inf Y . C."""
    if isinstance(x, InfinitePoint):
        return ConjugatePair(x, ctx.profile.spiral_center)
    z = as_complex(x)
    _require_on_curve(ctx, z)
    xp = PlanePoint.from_complex(z)
    if abs(z - ctx.P) <= ctx.tol.at(ctx.scale()):
        return ConjugatePair(xp, ctx.infinity)
    if cb.gradient_is_zero(ctx.curve, z, ctx.tol):
        return ConjugatePair(xp, xp)
    y = cb.third_point(ctx.curve, ctx.P, z, ctx.tol)
    return ConjugatePair(xp, cb.third_point(ctx.curve, ctx.infinity, y, ctx.tol))


def tangent_by_reflection(ctx: CurveContext, x: MaybeInfinite) -> Line:
    """Tangent at x as the isogonal of line XX' in the reference angle at x."""
    if isinstance(x, InfinitePoint):
        return ctx.profile.asymptote
    z = as_complex(x)
    _require_on_curve(ctx, z)
    if cb.gradient_is_zero(ctx.curve, z, ctx.tol):
        raise SingularPointError("no tangent at a singular point")
    w = _direction_to(z, ctx.conj(z))
    try:
        d = _isogonal_at(ctx, z, w)
    except GeometryError:
        log.warning("no admissible reference pair at %s; using the gradient tangent", z)
        return cb.tangent_line_at(ctx.curve, z, ctx.tol)
    return Line.through_direction(z, d)


def third_point_by_reflection(ctx: CurveContext, x: PointLike, y: PointLike) -> Tuple[MaybeInfinite, MaybeInfinite]:
    """(W, Z): W the third point of XY on the curve, Z its conjugate.

    Z is where the reflections of XY in the bisectors at X and at Y meet.
    """
    zx, zy = as_complex(x), as_complex(y)
    if zx == zy:
        raise CoincidenceError("x and y must be distinct")
    for p in (zx, zy):
        _require_on_curve(ctx, p)
        if cb.gradient_is_zero(ctx.curve, p, ctx.tol):
            return PlanePoint.from_complex(p), PlanePoint.from_complex(p)
    lx = Line.through_direction(zx, _isogonal_at(ctx, zx, Direction(zy - zx)))
    ly = Line.through_direction(zy, _isogonal_at(ctx, zy, Direction(zx - zy)))
    z = lx.intersect(ly)
    if z is None:
        return ctx.profile.spiral_center, ctx.infinity
    return ctx.conj(z), z


def _circle_pair_point(c1: Circle, c2: Circle, shared: complex) -> Tuple[complex, float]:
    """Second meet of two circles through ``shared``: its mirror in the line of centers."""
    o1, o2 = c1.center.z, c2.center.z
    d = o2 - o1
    quality = abs(d) / max(c1.radius, c2.radius)
    if abs(d) == 0:
        return shared, 0.0
    u = d / abs(d)
    rel = (shared - o1) / u
    return o1 + rel.conjugate() * u, quality


def _circle_through(p, q, r) -> Optional[Circle]:
    try:
        return Circle.through(p, q, r)
    except CoincidenceError:
        return None


def circle_fourth_point(ctx: CurveContext, e: PointLike, f: PointLike, g: PointLike) -> PlanePoint:
    """The fourth real meet of circle (EFG) with the curve.

    It is the second meet of (EFG) with (E'F'G); the equivalent pairs
    (EF'G') and (E'FG') are tried too and the best conditioned one wins.
    """
    E, F, G = (as_complex(p) for p in (e, f, g))
    for p in (E, F, G):
        _require_on_curve(ctx, p)
        if cb.gradient_is_zero(ctx.curve, p, ctx.tol):
            raise SingularPointError("circle construction needs non-singular points")
    base = _circle_through(E, F, G)
    if base is None:
        raise CoincidenceError("e, f, g must be distinct and not collinear")
    primes = []
    for p in (E, F, G):
        c = ctx.conj(p)
        primes.append(None if isinstance(c, InfinitePoint) else c.z)
    Ep, Fp, Gp = primes
    options = [((Ep, Fp, G), G), ((E, Fp, Gp), E), ((Ep, F, Gp), F)]
    best = None
    for pts, shared in options:
        if any(p is None for p in pts):
            continue
        other = _circle_through(*pts)
        if other is None:
            continue
        h, quality = _circle_pair_point(base, other, shared)
        if best is None or quality > best[1]:
            best = (h, quality)
    if best is not None and best[1] > 1e-6:
        return PlanePoint.from_complex(best[0])
    return _circle_fourth_by_deflation(ctx.curve, base, (E, F, G))


def _circle_fourth_by_deflation(curve: CubicCurve, circle: Circle, known: Sequence[complex]) -> PlanePoint:
    """Fallback: remove I, J and the three known points from the circle restriction."""
    c, r = circle.center.z, circle.radius
    # put the t = infinity point as far as possible from the known points
    angles = [np.angle(k - c) for k in known]
    starts = np.linspace(0, 2 * np.pi, 16, endpoint=False)
    phi = max(starts, key=lambda s: min(abs(np.angle(np.exp(1j * (a - s - np.pi)))) for a in angles))
    rot = np.exp(1j * phi)

    def point(t):
        return c + r * rot * complex(1 - t * t, 2 * t) / (1 + t * t)

    ts = np.linspace(-3, 3, 13)
    vals = [cb.evaluate(curve, point(t)) * (1 + t * t) ** 3 for t in ts]
    poly = np.polyfit(ts, vals, 6)
    for k in known:
        rel = (k - c) / (r * rot)
        t = rel.imag / (1 + rel.real)
        poly, _ = np.polydiv(poly, [1.0, -t])
    poly, _ = np.polydiv(poly, [1.0, 0.0, 1.0])
    if abs(poly[0]) <= 1e-9 * np.abs(poly).max():
        return PlanePoint.from_complex(c - r * rot)
    return PlanePoint.from_complex(point(-poly[1] / poly[0]))


def cubic_add(ctx: CurveContext, x: MaybeInfinite, y: MaybeInfinite) -> MaybeInfinite:
    """Chord-tangent sum with P as the zero: third point of P and (third point of XY)."""
    for p in (x, y):
        if not isinstance(p, InfinitePoint):
            _require_on_curve(ctx, as_complex(p))
    z = cb.third_point(ctx.curve, x, y, ctx.tol)
    return cb.third_point(ctx.curve, ctx.profile.spiral_center, z, ctx.tol)


def tangency_residual(curve: CubicCurve, p: PointLike, direction: Direction) -> float:
    """How far the line through p along ``direction`` is from touching at p.

    Relative size of the constant and linear terms of the restriction; both
    vanish exactly for a double root at p.
    """
    d = Direction(direction.unit())
    (c0, c1, _, _), (s0, s1, _, _) = cb.restrict_to_line(curve, p, d)
    return max(abs(c0) / s0 if s0 else abs(c0), abs(c1) / s1 if s1 else abs(c1))


def tangent_points_from(ctx: CurveContext, z: PointLike, tangency_tol: float = 1e-7) -> List[PlanePoint]:
    """Points X != Z of the curve whose tangent passes through Z.

    They lie on the two bisectors of the reference angle at X = Z'.
    """
    zc = as_complex(z)
    _require_on_curve(ctx, zc)
    if cb.gradient_is_zero(ctx.curve, zc, ctx.tol):
        raise SingularPointError("z is singular")
    xc = ctx.conj(zc)
    if isinstance(xc, InfinitePoint):
        raise ConjugateAtInfinity("z is the spiral center", xc.direction)
    x = xc.z
    pair = _reference_pair(ctx, x)
    if pair is None:
        raise GeometryError("no reference pair away from the conjugate point")
    r, rp = pair
    out = []
    eps = ctx.tol.at(ctx.scale()) * 1e3
    for b in bisectors(Direction(r - x), Direction(rp - x)):
        for hit in cb.line_intersections(ctx.curve, x, Direction(b.unit()), known_roots=[0.0], tol=ctx.tol):
            if not math.isfinite(hit.t) or hit.t == 0.0:
                continue
            p = hit.point.z
            if abs(p - zc) <= eps:
                continue
            if tangency_residual(ctx.curve, p, Direction(p - zc)) <= tangency_tol:
                out.append(hit.point)
    return out


def parallel_bisector_partner(ctx: CurveContext, x: PointLike) -> MaybeInfinite:
    """Reflect X through O = PX . MN; the bisectors at X and at the result are parallel."""
    z = as_complex(x)
    _require_on_curve(ctx, z)
    if abs(z - ctx.P) <= ctx.tol.at(ctx.scale()):
        raise CoincidenceError("x is the spiral center; line PX is undefined")
    o = Line.through(ctx.P, z).intersect(ctx.profile.newton_line)
    if o is None:
        return ctx.infinity
    return PlanePoint.from_complex(2 * o.z - z)


def generating_quadrilateral(ctx: CurveContext, seed1: PointLike, seed2: PointLike) -> Quadrilateral:
    """(X, Y, X', Y'): its diagonals are conjugate pairs and its cubic is the curve."""
    s1, s2 = as_complex(seed1), as_complex(seed2)
    conj = []
    for s in (s1, s2):
        _require_on_curve(ctx, s)
        c = ctx.conj(s)
        if isinstance(c, InfinitePoint):
            raise ConjugateAtInfinity("seed is the spiral center; choose another seed", c.direction)
        conj.append(c.z)
    return Quadrilateral.of(s1, s2, conj[0], conj[1])
