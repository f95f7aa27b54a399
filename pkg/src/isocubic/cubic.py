"""Coefficient-level algebra on real plane cubics.

Coefficients always travel in the fixed monomial order

    x^3, x^2 y, x y^2, y^3, x^2, x y, y^2, x, y, 1

An isogonal cubic has cubic part ``(x^2 + y^2)(u x + v y)``.  Everything the
constructions need (spiral center, involution constant, asymptote, Newton
line) is read off the coefficients in closed form here.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import (
    NotIsogonalFormError,
    NotOnCurveError,
    ReducibleLineError,
    SingularPointError,
)
from .geom import (
    DEFAULT_TOL,
    Direction,
    InfinitePoint,
    Line,
    PlanePoint,
    PointLike,
    Tolerance,
    as_complex,
)

MONOMIALS = ((3, 0), (2, 1), (1, 2), (0, 3), (2, 0), (1, 1), (0, 2), (1, 0), (0, 1), (0, 0))
NAMES = ("c30", "c21", "c12", "c03", "c20", "c11", "c02", "c10", "c01", "c00")

# below this relative size a quadratic/cubic discriminant counts as zero
_DISC_EPS = 1e-12


@dataclass(frozen=True)
class CubicCurve:
    c30: float
    c21: float
    c12: float
    c03: float
    c20: float
    c11: float
    c02: float
    c10: float
    c01: float
    c00: float

    def __post_init__(self):
        for name in NAMES:
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"coefficient {name} is not finite")
            object.__setattr__(self, name, v)
        if self.c30 == self.c21 == self.c12 == self.c03 == 0:
            raise ValueError("not a cubic: all degree-3 coefficients vanish")

    @classmethod
    def from_coefficients(cls, coeffs: Sequence[float]) -> "CubicCurve":
        coeffs = [float(c) for c in coeffs]
        if len(coeffs) != 10:
            raise ValueError(f"expected 10 coefficients, got {len(coeffs)}")
        return cls(*coeffs)

    @property
    def coefficients(self) -> Tuple[float, ...]:
        return tuple(getattr(self, n) for n in NAMES)

    def as_array(self) -> np.ndarray:
        return np.array(self.coefficients)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coefficients))

    def scaled(self, s: float) -> "CubicCurve":
        return CubicCurve(*(s * c for c in self.coefficients))

    def normalized(self) -> "CubicCurve":
        """Scaled so the largest-modulus coefficient equals +1."""
        big = max(self.coefficients, key=abs)
        return self.scaled(1.0 / big)

    def replace(self, **changes) -> "CubicCurve":
        vals = dict(zip(NAMES, self.coefficients))
        vals.update(changes)
        return CubicCurve(**vals)

    def __call__(self, p: PointLike) -> float:
        return evaluate(self, p)


def evaluate_xy(curve: CubicCurve, x, y):
    """Evaluate on scalars or numpy arrays."""
    c = curve
    return (((c.c30 * x + c.c21 * y + c.c20) * x + c.c11 * y + c.c10) * x
            + ((c.c12 * x + c.c03 * y + c.c02) * y + c.c01) * y + c.c00)


def evaluate(curve: CubicCurve, p: PointLike) -> float:
    z = as_complex(p)
    return float(evaluate_xy(curve, z.real, z.imag))


def gradient(curve: CubicCurve, p: PointLike) -> Tuple[float, float]:
    z = as_complex(p)
    x, y = z.real, z.imag
    c = curve
    fx = 3 * c.c30 * x * x + 2 * c.c21 * x * y + c.c12 * y * y + 2 * c.c20 * x + c.c11 * y + c.c10
    fy = c.c21 * x * x + 2 * c.c12 * x * y + 3 * c.c03 * y * y + c.c11 * x + 2 * c.c02 * y + c.c01
    return fx, fy


def hessian(curve: CubicCurve, p: PointLike) -> Tuple[float, float, float]:
    """(f_xx, f_xy, f_yy)."""
    z = as_complex(p)
    x, y = z.real, z.imag
    c = curve
    fxx = 6 * c.c30 * x + 2 * c.c21 * y + 2 * c.c20
    fxy = 2 * c.c21 * x + 2 * c.c12 * y + c.c11
    fyy = 2 * c.c12 * x + 6 * c.c03 * y + 2 * c.c02
    return fxx, fxy, fyy


def monomial_scale(curve: CubicCurve, p: PointLike) -> float:
    """Sum of |c_ij x^i y^j|, the natural size of f(p) for rounding purposes."""
    z = as_complex(p)
    ax, ay = abs(z.real), abs(z.imag)
    return sum(abs(c) * ax ** i * ay ** j for c, (i, j) in zip(curve.coefficients, MONOMIALS))


def curve_residual(curve: CubicCurve, p: PointLike) -> float:
    """|f(p)| relative to the monomial scale at p."""
    s = monomial_scale(curve, p)
    v = abs(evaluate(curve, p))
    return v / s if s > 0 else v


def is_on_curve(curve: CubicCurve, p: PointLike, tol: Tolerance = DEFAULT_TOL) -> bool:
    return tol.small(evaluate(curve, p), monomial_scale(curve, p))


def length_scale(curve: CubicCurve) -> float:
    """A characteristic length of the curve, homogeneous under dilation."""
    c = np.abs(curve.as_array())
    d3, d2, d1, d0 = c[0:4].sum(), c[4:7].sum(), c[7:9].sum(), c[9]
    return max((d2 / d3), math.sqrt(d1 / d3), (d0 / d3) ** (1 / 3))


def _scale_at_radius(curve: CubicCurve, rho: float) -> float:
    return sum(abs(c) * rho ** (i + j) for c, (i, j) in zip(curve.coefficients, MONOMIALS))


def gradient_is_zero(curve: CubicCurve, p: PointLike, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Singular-point test; the gradient is compared with a first-derivative scale."""
    z = as_complex(p)
    rho = max(abs(z), length_scale(curve))
    gx, gy = gradient(curve, p)
    return tol.small(math.hypot(gx, gy), 3 * _scale_at_radius(curve, rho) / rho)


# --- univariate solving -------------------------------------------------


def _real_quadratic_roots(a: float, b: float, c: float) -> List[float]:
    if a == 0:
        if b == 0:
            return []
        return [-c / b]
    disc = b * b - 4 * a * c
    if abs(disc) <= _DISC_EPS * (b * b + abs(4 * a * c)):
        return [-b / (2 * a)] * 2
    if disc < 0:
        return []
    q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
    r1 = q / a
    r2 = c / q if q != 0 else -r1
    return sorted([r1, r2])


def _newton_polish(coeffs: Sequence[float], t: float) -> float:
    """One Newton step on the polynomial with coefficients highest-first."""
    p = dp = 0.0
    for c in coeffs:
        dp = dp * t + p
        p = p * t + c
    if dp == 0 or not math.isfinite(p / dp):
        return t
    step = p / dp
    if abs(step) > 1e-6 * (1 + abs(t)):
        # far from a simple root: leave closed-form value alone
        return t
    return t - step


def real_cubic_roots(a: float, b: float, c: float, d: float) -> List[float]:
    """Real roots, with multiplicity, of a t^3 + b t^2 + c t + d (a != 0).

    Trigonometric form for three real roots, Cardano otherwise, then one
    Newton step per simple root.
    """
    if a == 0:
        return _real_quadratic_roots(b, c, d)
    B, C, D = b / a, c / a, d / a
    shift = B / 3
    p = C - B * B / 3
    q = 2 * B ** 3 / 27 - B * C / 3 + D
    half_q = q / 2
    third_p = p / 3
    disc = half_q * half_q + third_p ** 3
    dscale = half_q * half_q + abs(third_p) ** 3
    if dscale == 0:
        roots = [-shift] * 3
    elif abs(disc) <= _DISC_EPS * dscale:
        if abs(p) <= _DISC_EPS ** (1 / 3) * (abs(B) ** 2 + abs(C)):
            roots = [-shift] * 3
        else:
            single = 3 * q / p
            double = -3 * q / (2 * p)
            roots = [single - shift, double - shift, double - shift]
    elif disc > 0:
        sq = math.sqrt(disc)
        s1 = np.cbrt(-half_q + sq)
        s2 = np.cbrt(-half_q - sq)
        roots = [float(s1 + s2) - shift]
    else:
        r = 2 * math.sqrt(-third_p)
        arg = (3 * q / (2 * p)) * math.sqrt(-3 / p)
        phi = math.acos(max(-1.0, min(1.0, arg))) / 3
        roots = [r * math.cos(phi - 2 * math.pi * k / 3) - shift for k in range(3)]
    poly = (1.0, B, C, D)
    polished = []
    for t in roots:
        if roots.count(t) == 1:
            t = _newton_polish(poly, t)
        polished.append(t)
    return sorted(polished)


# --- lines -------------------------------------------------------------


class LineHit(NamedTuple):
    """Intersection of a parametrized line with a curve.

    ``t`` is ``math.inf`` and ``point`` an :class:`InfinitePoint` when the
    line meets the curve at infinity.
    """

    t: float
    point: Union[PlanePoint, InfinitePoint]


def _binomial_powers(b: float, d: float) -> List[List[float]]:
    # coefficient lists (low to high in t) of (b + t d)^n, n = 0..3
    return [
        [1.0],
        [b, d],
        [b * b, 2 * b * d, d * d],
        [b ** 3, 3 * b * b * d, 3 * b * d * d, d ** 3],
    ]


def _restrict_coeffs(coeffs, bx, by, dx, dy) -> List[float]:
    X = _binomial_powers(bx, dx)
    Y = _binomial_powers(by, dy)
    out = [0.0, 0.0, 0.0, 0.0]
    for c, (i, j) in zip(coeffs, MONOMIALS):
        if c == 0:
            continue
        for m, xm in enumerate(X[i]):
            for n, yn in enumerate(Y[j]):
                out[m + n] += c * xm * yn
    return out


def restrict_to_line(curve: CubicCurve, base: PointLike, direction: Direction):
    """Coefficients (c0, c1, c2, c3) of t -> f(base + t*dir), and their natural scales."""
    b = as_complex(base)
    d = direction.rep
    coeffs = _restrict_coeffs(curve.coefficients, b.real, b.imag, d.real, d.imag)
    scales = _restrict_coeffs([abs(c) for c in curve.coefficients],
                              abs(b.real), abs(b.imag), abs(d.real), abs(d.imag))
    return coeffs, scales


def _deflate(c: Sequence[float], r: float) -> List[float]:
    """Divide polynomial (low-to-high) by (t - r); drops the remainder."""
    n = len(c) - 1
    out = [0.0] * n
    acc = 0.0
    for k in range(n, 0, -1):
        acc = acc * r + c[k]
        out[k - 1] = acc
    return out


def _at(base: complex, d: complex, t: float) -> PlanePoint:
    return PlanePoint.from_complex(base + t * d)


def _remaining_roots(curve: CubicCurve, base: complex, direction: Direction,
                     known: List[float], tol: Tolerance) -> Tuple[List[float], int, List[float]]:
    """Roots beyond ``known``; returns (found, number at infinity, known used)."""
    (c0, c1, c2, c3), (s0, s1, s2, s3) = restrict_to_line(curve, base, direction)
    if all(tol.small(ck, sk) for ck, sk in ((c0, s0), (c1, s1), (c2, s2), (c3, s3))):
        raise ReducibleLineError("curve vanishes identically on the line")
    base_on_curve = not known and tol.small(c0, s0)
    poly = [c0, c1, c2, c3]
    deg = 3
    for k, sk in ((3, s3), (2, s2), (1, s1)):
        if deg == k and tol.small(poly[k], sk):
            deg -= 1
    poly = poly[:deg + 1]
    if base_on_curve:
        known = [_refine(poly, 0.0)]
    n_inf = 3 - deg
    known = known[:deg]

    if deg >= 2 and len(known) == deg - 1:
        return [_last_root(poly, (s0, s1, s2, s3), known)], n_inf, known
    rest = poly
    for r in known:
        rest = _deflate(rest, r)
    d = len(rest) - 1
    if d == 3:
        found = real_cubic_roots(rest[3], rest[2], rest[1], rest[0])
    elif d == 2:
        found = _real_quadratic_roots(rest[2], rest[1], rest[0])
    elif d == 1:
        found = [-rest[0] / rest[1]]
    else:
        found = []
    if d < 3:
        found = [_refine(poly, t) for t in found]
    return found, n_inf, known


def _last_root(poly: Sequence[float], scales: Sequence[float], known: Sequence[float]) -> float:
    """The one root left once all others are known, from Vieta's sum or product.

    The sum cancels badly when a known root is large; the product then wins.
    Whichever leaves the smaller relative residual is kept.
    """
    n = len(poly) - 1
    cands = [-poly[n - 1] / poly[n] - sum(known)]
    prod = math.prod(known)
    if prod != 0:
        cands.append((-1) ** n * poly[0] / (poly[n] * prod))

    def rel(t):
        size = sum(sk * abs(t) ** k for k, sk in enumerate(scales[:n + 1]))
        v = abs(sum(ck * t ** k for k, ck in enumerate(poly)))
        return v / size if size else v

    return _refine(poly, min((t for t in cands if math.isfinite(t)), key=rel, default=cands[0]))


def _refine(poly: Sequence[float], t: float) -> float:
    """Newton-polish a deflated root against the undeflated restriction."""
    hi = poly[::-1]
    for _ in range(2):
        t = _newton_polish(hi, t)
    return t


def line_intersections(curve: CubicCurve, base: PointLike, direction: Direction,
                       known_roots: Sequence[float] = (),
                       tol: Tolerance = DEFAULT_TOL) -> List[LineHit]:
    """All real intersections of the line ``base + t*direction`` with the curve.

    Roots listed in ``known_roots`` are trusted and deflated out before the
    remaining ones are solved in closed form; they are included in the
    result.  Multiplicities are preserved.  When the direction is asymptotic
    the roots lost to infinity are reported as points at infinity.
    """
    if len(known_roots) > 3:
        raise ValueError("at most three known roots")
    b = as_complex(base)
    d = direction.rep
    found, n_inf, known = _remaining_roots(curve, b, direction, [float(t) for t in known_roots], tol)
    hits = [LineHit(t, _at(b, d, t)) for t in sorted(known + found)]
    hits.extend(LineHit(math.inf, InfinitePoint(direction)) for _ in range(n_inf))
    return hits


def _single_remaining(curve, base, direction, known, tol):
    # reparametrize from the foot of the origin, where the expansion is best conditioned
    d = direction.rep
    shift = -(base * d.conjugate()).real / abs(d) ** 2
    foot = base + shift * d
    found, n_inf, _ = _remaining_roots(curve, foot, direction, [t - shift for t in known], tol)
    if found:
        return PlanePoint.from_complex(foot + found[0] * d)
    return InfinitePoint(direction)


def third_point(curve: CubicCurve, p: Union[PointLike, InfinitePoint],
                q: Union[PointLike, InfinitePoint],
                tol: Tolerance = DEFAULT_TOL) -> Union[PlanePoint, InfinitePoint]:
    """The third intersection of line pq with the curve, counting multiplicity.

    ``p == q`` means the tangent at p.  A singular p (or q) is its own answer.
    Infinite points are allowed: the curve's real point at infinity plays
    the role of any other curve point.
    """
    p_inf = isinstance(p, InfinitePoint)
    q_inf = isinstance(q, InfinitePoint)
    if p_inf and q_inf:
        # the tangent at the point at infinity is the asymptote
        line = asymptote_of(curve, tol)
        return _single_remaining(curve, line.foot(), line.direction, [], tol)
    if p_inf:
        p, q = q, p
    if p_inf or q_inf:
        base = as_complex(p)
        if gradient_is_zero(curve, base, tol):
            return PlanePoint.from_complex(base)
        return _single_remaining(curve, base, q.direction, [0.0], tol)

    a, b = as_complex(p), as_complex(q)
    for z in (a, b):
        if gradient_is_zero(curve, z, tol):
            return PlanePoint.from_complex(z)
    if abs(a - b) <= tol.at(max(abs(a), abs(b), length_scale(curve))):
        gx, gy = gradient(curve, a)
        return _single_remaining(curve, a, Direction(complex(-gy, gx)), [0.0, 0.0], tol)
    return _single_remaining(curve, a, Direction(b - a), [0.0, 1.0], tol)


def tangent_line_at(curve: CubicCurve, p: PointLike, tol: Tolerance = DEFAULT_TOL) -> Line:
    if not is_on_curve(curve, p, tol):
        raise NotOnCurveError("point is not on the curve", curve_residual(curve, p))
    if gradient_is_zero(curve, p, tol):
        raise SingularPointError("tangent undefined at a singular point")
    gx, gy = gradient(curve, p)
    z = as_complex(p)
    return Line(-(gx * z.real + gy * z.imag), gx, gy)


# --- isogonal form ------------------------------------------------------


def leading_pair(curve: CubicCurve, tol: Tolerance = DEFAULT_TOL) -> Optional[Tuple[float, float]]:
    """(u, v) when the cubic part is (x^2 + y^2)(u x + v y), else None."""
    c = curve
    scale = abs(c.c30) + abs(c.c21) + abs(c.c12) + abs(c.c03)
    if not (tol.small(c.c30 - c.c12, scale) and tol.small(c.c21 - c.c03, scale)):
        return None
    if c.c30 == 0 and c.c21 == 0:
        return None
    return c.c30, c.c21


def _require_pair(curve, tol):
    pair = leading_pair(curve, tol)
    if pair is None:
        raise NotIsogonalFormError("cubic part is not (x^2+y^2)(ux+vy)")
    return pair


def spiral_center_from_coefficients(curve: CubicCurve, tol: Tolerance = DEFAULT_TOL) -> PlanePoint:
    u, v = _require_pair(curve, tol)
    c = curve
    den = 2 * (u * u + v * v)
    p = (u * c.c02 - u * c.c20 - v * c.c11) / den
    q = (v * c.c20 - u * c.c11 - v * c.c02) / den
    return PlanePoint(p, q)


def asymptote_of(curve: CubicCurve, tol: Tolerance = DEFAULT_TOL) -> Line:
    u, v = _require_pair(curve, tol)
    c = curve
    n2 = u * u + v * v
    return Line(u * u * c.c02 - u * v * c.c11 + v * v * c.c20, n2 * u, n2 * v)


def infinity_direction(curve: CubicCurve, tol: Tolerance = DEFAULT_TOL) -> Direction:
    u, v = _require_pair(curve, tol)
    return Direction(complex(v, -u))


def involution_constant(curve: CubicCurve, center: Optional[PointLike] = None,
                        tol: Tolerance = DEFAULT_TOL) -> complex:
    """k such that z -> P + k/(z - P) preserves the curve.

    Centered at P the curve reads |w|^2 (Im(conj(S) w) + M) - Im(conj(k) S w)
    with S = v - iu, so k comes straight from the gradient at P.
    """
    u, v = _require_pair(curve, tol)
    P = as_complex(center) if center is not None else spiral_center_from_coefficients(curve, tol).z
    alpha, beta = gradient(curve, P)
    S = complex(v, -u)
    return ((-beta - 1j * alpha) / S).conjugate()


def newton_line_of(curve: CubicCurve, center: Optional[PointLike] = None,
                   tol: Tolerance = DEFAULT_TOL) -> Line:
    """Locus of midpoints of conjugate pairs, from the coefficients alone.

    Centered at P it is u x' + v y' + M/2 = 0 where M is the x^2 coefficient
    of the re-centered curve (the asymptote is u x' + v y' + M = 0).
    """
    u, v = _require_pair(curve, tol)
    P = as_complex(center) if center is not None else spiral_center_from_coefficients(curve, tol).z
    fxx, _, fyy = hessian(curve, P)
    M = (fxx + fyy) / 4
    return Line(M / 2 - u * P.real - v * P.imag, u, v)


@dataclass(frozen=True)
class HomogeneousPoint:
    X: complex
    Y: complex
    Z: complex

    def normalized(self) -> "HomogeneousPoint":
        for c in (self.X, self.Y, self.Z):
            if c != 0:
                return HomogeneousPoint(self.X / c, self.Y / c, self.Z / c)
        raise ValueError("zero homogeneous vector")

    def dehomogenize(self) -> Optional[complex]:
        """(X/Z, Y/Z) as a complex pair x + iy when real and finite, else None."""
        if self.Z == 0:
            return None
        x, y = self.X / self.Z, self.Y / self.Z
        return complex(x.real, y.real)

    def equals(self, other: "HomogeneousPoint", tol: Tolerance = DEFAULT_TOL) -> bool:
        a = np.array([self.X, self.Y, self.Z])
        b = np.array([other.X, other.Y, other.Z])
        crossv = np.cross(a, b)
        return float(np.linalg.norm(crossv)) <= tol.at(np.linalg.norm(a) * np.linalg.norm(b))


def homogeneous_gradient(curve: CubicCurve, X: complex, Y: complex, Z: complex):
    c = curve
    gx = (3 * c.c30 * X * X + 2 * c.c21 * X * Y + c.c12 * Y * Y
          + 2 * c.c20 * X * Z + c.c11 * Y * Z + c.c10 * Z * Z)
    gy = (c.c21 * X * X + 2 * c.c12 * X * Y + 3 * c.c03 * Y * Y
          + c.c11 * X * Z + 2 * c.c02 * Y * Z + c.c01 * Z * Z)
    gz = (c.c20 * X * X + c.c11 * X * Y + c.c02 * Y * Y
          + 2 * c.c10 * X * Z + 2 * c.c01 * Y * Z + 3 * c.c00 * Z * Z)
    return gx, gy, gz


def evaluate_homogeneous(curve: CubicCurve, X: complex, Y: complex, Z: complex) -> complex:
    terms = (X ** 3, X * X * Y, X * Y * Y, Y ** 3, X * X * Z, X * Y * Z, Y * Y * Z,
             X * Z * Z, Y * Z * Z, Z ** 3)
    return sum(c * t for c, t in zip(curve.coefficients, terms))


def circular_tangency_check(curve: CubicCurve, tol: Tolerance = DEFAULT_TOL):
    """Meet of the tangents at the circular points I, J; does it lie on the curve?

    Returns ``(holds, meet)``.  For real coefficients the meet is real and
    dehomogenizes to the spiral center.
    """
    _require_pair(curve, tol)
    tI = np.array(homogeneous_gradient(curve, 1, 1j, 0), dtype=complex)
    tJ = tI.conj()
    m = np.cross(tI, tJ) / 1j  # cross(a, conj a) is purely imaginary
    m = m.real.astype(complex)
    meet = HomogeneousPoint(complex(m[0]), complex(m[1]), complex(m[2]))
    if abs(m[2]) <= 1e-14 * float(np.linalg.norm(m)):
        return False, meet
    p = meet.dehomogenize()
    value = evaluate(curve, p)
    scale = _scale_at_radius(curve, max(abs(p), length_scale(curve)))
    return tol.small(value, scale), meet


# --- reducibility --------------------------------------------------------


def _cubic_form_directions(curve: CubicCurve) -> List[complex]:
    """Real directions (unit complex) on which the cubic part vanishes."""
    c3 = np.array(curve.coefficients[:4])
    norm = float(np.abs(c3).sum())
    dirs = []
    # parametrize (t, 1): c30 t^3 + c21 t^2 + c12 t + c03
    if abs(c3[0]) <= 1e-9 * norm:
        dirs.append(1 + 0j)
    coeffs = np.trim_zeros(c3 if abs(c3[0]) > 1e-9 * norm else c3[1:], "f")
    if len(coeffs) > 1:
        for r in np.roots(coeffs):
            if abs(r.imag) <= 1e-6 * (1 + abs(r)):
                d = complex(r.real, 1.0)
                dirs.append(d / abs(d))
    return dirs


def _product_matrix(line: Sequence[float]) -> np.ndarray:
    """10x6 matrix of conic -> (l1 x + l2 y + l0) * conic in monomial order."""
    l1, l2, l0 = line
    conic_mons = ((2, 0), (1, 1), (0, 2), (1, 0), (0, 1), (0, 0))
    index = {m: k for k, m in enumerate(MONOMIALS)}
    A = np.zeros((10, 6))
    for col, (i, j) in enumerate(conic_mons):
        A[index[(i + 1, j)], col] += l1
        A[index[(i, j + 1)], col] += l2
        A[index[(i, j)], col] += l0
    return A


def divide_by_line(curve: CubicCurve, line: Line) -> Tuple[np.ndarray, float]:
    """Least-squares conic quotient and the relative remainder norm."""
    ln = np.array([line.l1, line.l2, line.l0])
    ln = ln / np.linalg.norm(ln)
    A = _product_matrix(ln)
    f = curve.as_array()
    q, *_ = np.linalg.lstsq(A, f, rcond=None)
    rem = float(np.linalg.norm(A @ q - f)) / float(np.linalg.norm(f))
    return q, rem


def reducibility(curve: CubicCurve, tol: Tolerance = DEFAULT_TOL):
    """``(line, conic)`` if the curve is a line times a conic, else None.

    The conic is six coefficients in the order x^2, xy, y^2, x, y, 1.
    """
    best = None
    for d in _cubic_form_directions(curve):
        n = 1j * d
        # c_k(s) for the line s*n + t*d has degree <= 3 - k in s
        samples = np.array([-1.0, 0.0, 1.0, 2.0])
        rows = np.array([restrict_to_line(curve, s * n, Direction(d))[0] for s in samples])
        candidates = []
        for k in range(3):
            poly = np.polyfit(samples, rows[:, k], 3 - k)
            poly = np.trim_zeros(np.where(np.abs(poly) <= 1e-12 * np.abs(poly).max(initial=0), 0, poly), "f")
            if len(poly) > 1:
                candidates.extend(r.real for r in np.roots(poly) if abs(r.imag) <= 1e-6 * (1 + abs(r)))
        for s in candidates:
            line = Line.through_direction(s * n, Direction(d))
            conic, rem = divide_by_line(curve, line)
            if best is None or rem < best[2]:
                best = (line, conic, rem)
    if best is not None and best[2] <= tol.rel_eps:
        return best[0], best[1]
    return None


# --- classification -----------------------------------------------------


class Reason(str, enum.Enum):
    LeadingPairMismatch = "LeadingPairMismatch"
    LeadingAllZero = "LeadingAllZero"
    SpiralCenterOffCurve = "SpiralCenterOffCurve"
    Reducible = "Reducible"
    Ok = "Ok"


@dataclass(frozen=True)
class IsoCubicProfile:
    """Intrinsic data of an isogonal cubic."""

    u: float
    v: float
    spiral_center: PlanePoint
    involution_k: complex
    asymptote: Line
    infinity_direction: Direction
    newton_line: Line

    def conjugate(self, z: complex) -> complex:
        P = self.spiral_center.z
        return P + self.involution_k / (z - P)


@dataclass(frozen=True)
class ClassificationReport:
    is_isogonal: bool
    reason: Reason
    profile: Optional[IsoCubicProfile] = None
    spiral_center_residual: Optional[float] = None


def profile_from_coefficients(curve: CubicCurve, tol: Tolerance = DEFAULT_TOL) -> IsoCubicProfile:
    u, v = _require_pair(curve, tol)
    P = spiral_center_from_coefficients(curve, tol)
    return IsoCubicProfile(
        u=u,
        v=v,
        spiral_center=P,
        involution_k=involution_constant(curve, P, tol),
        asymptote=asymptote_of(curve, tol),
        infinity_direction=infinity_direction(curve, tol),
        newton_line=newton_line_of(curve, P, tol),
    )


def spiral_center_residual(curve: CubicCurve, tol: Tolerance = DEFAULT_TOL) -> float:
    """|f(P)| relative to the curve's size at radius max(|P|, length scale)."""
    P = spiral_center_from_coefficients(curve, tol)
    scale = _scale_at_radius(curve, max(abs(P), length_scale(curve)))
    return abs(evaluate(curve, P)) / scale


def classify_cubic(curve: CubicCurve, tol: Tolerance = DEFAULT_TOL) -> ClassificationReport:
    if leading_pair(curve, tol) is None:
        c = curve
        lead = abs(c.c30) + abs(c.c21) + abs(c.c12) + abs(c.c03)
        if lead <= tol.rel_eps * float(np.abs(curve.as_array()).sum()):
            return ClassificationReport(False, Reason.LeadingAllZero)
        return ClassificationReport(False, Reason.LeadingPairMismatch)
    if reducibility(curve, tol) is not None:
        return ClassificationReport(False, Reason.Reducible)
    res = spiral_center_residual(curve, tol)
    if res > tol.rel_eps:
        return ClassificationReport(False, Reason.SpiralCenterOffCurve, spiral_center_residual=res)
    return ClassificationReport(True, Reason.Ok, profile_from_coefficients(curve, tol), res)


# --- sampling -----------------------------------------------------------


def scan_direction(curve: CubicCurve) -> Direction:
    """Of a few fixed directions, the one least asymptotic to the curve."""
    candidates = [1 + 0j, 1j, (1 + 1j) / math.sqrt(2), (1 - 1j) / math.sqrt(2)]
    cubic_only = curve.coefficients[:4]

    def lead(d):
        return abs(sum(c * d.real ** i * d.imag ** j
                       for c, (i, j) in zip(cubic_only, MONOMIALS[:4])))

    return Direction(max(candidates, key=lead))


def scanline_points(curve: CubicCurve, offsets: Sequence[float],
                    direction: Optional[Direction] = None,
                    center: PointLike = 0j,
                    tol: Tolerance = DEFAULT_TOL) -> List[PlanePoint]:
    """Curve points on the parallel lines center + h*normal + t*direction."""
    d = direction or scan_direction(curve)
    n = 1j * d.unit()
    c = as_complex(center)
    pts = []
    for h in offsets:
        for hit in line_intersections(curve, c + h * n, Direction(d.unit()), tol=tol):
            if math.isfinite(hit.t):
                pts.append(hit.point)
    return pts


def sample_curve_points(curve: CubicCurve, rng: np.random.Generator, n: int,
                        center: PointLike = 0j, radius: float = 10.0,
                        keep_within: Optional[float] = None) -> List[PlanePoint]:
    """Random curve points from scanlines at uniform offsets around ``center``.

    Points farther than ``keep_within`` (default 4*radius) from the center
    are dropped.
    """
    keep = keep_within if keep_within is not None else 4 * radius
    c = as_complex(center)
    out: List[PlanePoint] = []
    tries = 0
    while len(out) < n and tries < 50 * max(n, 1):
        tries += 1
        h = float(rng.uniform(-radius, radius))
        for p in scanline_points(curve, [h], center=c):
            if abs(p.z - c) <= keep:
                out.append(p)
    rng.shuffle(out)
    return out[:n]


def involution_constant_by_chords(curve: CubicCurve, samples: Sequence[PointLike],
                                  tol: Tolerance = DEFAULT_TOL) -> List[complex]:
    """k recovered as (X - P)(X' - P) with X' built from two chords.

    Y = third point of PX, X' = third point of the line through Y along the
    curve's point at infinity.  One value per usable sample.
    """
    P = spiral_center_from_coefficients(curve, tol).z
    inf = InfinitePoint(infinity_direction(curve, tol))
    ks = []
    for x in samples:
        x = as_complex(x)
        if abs(x - P) <= 1e-6 * max(1.0, abs(P)):
            continue
        y = third_point(curve, P, x, tol)
        xp = third_point(curve, inf, y, tol)
        if isinstance(xp, InfinitePoint):
            continue
        ks.append((x - P) * (xp.z - P))
    return ks
