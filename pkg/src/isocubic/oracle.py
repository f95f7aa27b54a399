"""Brute-force verifiers kept independent of the closed-form paths.

Nothing here calls into the constructions or the closed-form cubic solver.
Root isolation works by recursion on derivatives: the real critical points
split the line into monotone pieces and each sign change is bisected.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .cubic import MONOMIALS, CubicCurve, evaluate, gradient
from .errors import ComponentError, DegenerateInputError
from .geom import Circle, PlanePoint, PointLike, as_complex

# |p(c)| below this fraction of sum |a_i c^i| counts as a root at critical point c
_ZERO_REL = 1e-11


def _horner(c: Sequence[float], t: float) -> float:
    v = 0.0
    for a in c:
        v = v * t + a
    return v


def _abs_scale(c: Sequence[float], t: float) -> float:
    v = 0.0
    at = abs(t)
    for a in c:
        v = v * at + abs(a)
    return v


def _bisect(c, lo, hi, flo):
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        fm = _horner(c, mid)
        if fm == 0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _isolate(c: np.ndarray) -> List[Tuple[float, int]]:
    """Distinct real roots with multiplicity of a polynomial (highest first)."""
    n = len(c) - 1
    if n <= 0:
        return []
    if n == 1:
        return [(float(-c[1] / c[0]), 1)]
    crit = _isolate(np.polyder(c))
    bound = 1 + float(np.max(np.abs(c[1:] / c[0])))
    roots: List[Tuple[float, int]] = []
    flat = set()
    for t, m in crit:
        if abs(_horner(c, t)) <= _ZERO_REL * _abs_scale(c, t):
            roots.append((float(t), m + 1))
            flat.add(t)
    pts = [-bound] + [t for t, _ in crit] + [bound]
    for lo, hi in zip(pts[:-1], pts[1:]):
        if lo in flat or hi in flat:
            # monotone piece ending at a root: nothing else inside
            continue
        flo, fhi = _horner(c, lo), _horner(c, hi)
        if flo == 0:
            roots.append((float(lo), 1))
        elif (flo < 0) != (fhi < 0) and fhi != 0:
            roots.append((float(_bisect(c, lo, hi, flo)), 1))
    roots.sort()
    merged: List[Tuple[float, int]] = []
    for t, m in roots:
        if merged and abs(t - merged[-1][0]) <= 1e-12 * (1 + abs(t)):
            merged[-1] = (merged[-1][0], merged[-1][1] + m)
        else:
            merged.append((t, m))
    return merged


def _trimmed(poly: Sequence[float]) -> np.ndarray:
    c = np.asarray(poly, dtype=float)
    nz = np.nonzero(c)[0]
    if len(nz) == 0:
        raise ValueError("zero polynomial has every number as a root")
    return c[nz[0]:]


def real_roots(poly: Sequence[float]) -> List[float]:
    """Real roots, repeated by multiplicity, of a polynomial of degree <= 4.

    Coefficients are highest degree first.
    """
    c = _trimmed(poly)
    if len(c) - 1 > 4:
        raise ValueError("real_roots handles degree <= 4")
    return [t for t, m in _isolate(c) for _ in range(m)]


def real_roots_any_degree(poly: Sequence[float]) -> List[float]:
    c = _trimmed(poly)
    return [t for t, m in _isolate(c) for _ in range(m)]


def fd_gradient(curve: CubicCurve, p: PointLike, h: float = 1e-6) -> Tuple[float, float]:
    if h <= 0:
        raise ValueError("step must be positive")
    z = as_complex(p)
    fx = (evaluate(curve, z + h) - evaluate(curve, z - h)) / (2 * h)
    fy = (evaluate(curve, z + 1j * h) - evaluate(curve, z - 1j * h)) / (2 * h)
    return fx, fy


def _circle_polynomial(curve: CubicCurve, circle: Circle, absolute: bool = False) -> np.ndarray:
    """f on x = cx + r(1-t^2)/(1+t^2), y = cy + 2rt/(1+t^2), times (1+t^2)^3."""
    P = np.polynomial.polynomial
    cx, cy = circle.center.x, circle.center.y
    r = circle.radius
    coeffs = curve.coefficients
    if absolute:
        cx, cy = abs(cx), abs(cy)
        coeffs = [abs(c) for c in coeffs]
        X = np.array([cx + r, 0.0, cx + r])
    else:
        X = np.array([cx + r, 0.0, cx - r])
    Y = np.array([cy, 2 * r, cy])
    W = np.array([1.0, 0.0, 1.0])
    total = np.zeros(7)
    for c, (i, j) in zip(coeffs, MONOMIALS):
        term = P.polymul(P.polymul(P.polypow(X, i), P.polypow(Y, j)), P.polypow(W, 3 - i - j))
        total[:len(term)] += c * term
    return total[::-1]  # highest first


def _polish_on_circle(curve: CubicCurve, circle: Circle, z: complex) -> complex:
    c = circle.center.z
    for _ in range(3):
        f = evaluate(curve, z)
        g = abs(z - c) ** 2 - circle.radius_sq
        fx, fy = gradient(curve, z)
        gx, gy = 2 * (z - c).real, 2 * (z - c).imag
        det = fx * gy - fy * gx
        if det == 0:
            break
        dx = (f * gy - fy * g) / det
        dy = (fx * g - f * gx) / det
        z = z - complex(dx, dy)
    return z


def circle_curve_intersections(curve: CubicCurve, circle: Circle) -> List[PlanePoint]:
    """Real points where the curve meets a real circle, by multiplicity."""
    if not circle.radius_sq > 0:
        raise ValueError("needs a real circle")
    poly = _circle_polynomial(curve, circle)
    shadow = _circle_polynomial(curve, circle, absolute=True)
    if np.all(np.abs(poly) <= 1e-10 * shadow.sum()):
        raise ComponentError("circle is a component of the curve")
    c = circle.center.z
    r = circle.radius
    out = []
    lead_small = abs(poly[0]) <= 1e-12 * shadow.sum()
    c_poly = poly[1:] if lead_small else poly
    c_poly = np.trim_zeros(c_poly, "f")
    for t in real_roots_any_degree(c_poly) if len(c_poly) > 1 else []:
        w = 1 + t * t
        z = c + r * complex((1 - t * t) / w, 2 * t / w)
        out.append(_polish_on_circle(curve, circle, z))
    if lead_small:
        # t = infinity is the point (cx - r, cy)
        out.append(_polish_on_circle(curve, circle, c - r))
    return [PlanePoint.from_complex(z) for z in out]


def conic_through_five(points: Sequence[PointLike]) -> np.ndarray:
    """(x^2, xy, y^2, x, y, 1) coefficients of the conic through five points."""
    pts = [as_complex(p) for p in points]
    if len(pts) != 5:
        raise ValueError("need exactly five points")
    rows = [[z.real ** 2, z.real * z.imag, z.imag ** 2, z.real, z.imag, 1.0] for z in pts]
    A = np.array(rows)
    _, s, vt = np.linalg.svd(A)
    if s[4] <= 1e-10 * s[0]:
        raise DegenerateInputError("five points do not determine a unique conic")
    v = vt[-1]
    return v / v[np.argmax(np.abs(v))]


# --- exact fixtures -----------------------------------------------------


class GaussFrac:
    """Exact complex number with Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re, self.im = Fraction(re), Fraction(im)

    def __add__(self, o):
        return GaussFrac(self.re + o.re, self.im + o.im)

    def __sub__(self, o):
        return GaussFrac(self.re - o.re, self.im - o.im)

    def __mul__(self, o):
        return GaussFrac(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def __truediv__(self, o):
        n = o.re * o.re + o.im * o.im
        return GaussFrac((self.re * o.re + self.im * o.im) / n, (self.im * o.re - self.re * o.im) / n)

    def conj(self):
        return GaussFrac(self.re, -self.im)

    def __eq__(self, o):
        return self.re == o.re and self.im == o.im

    def __repr__(self):
        return f"GaussFrac({self.re}, {self.im})"


def exact_cubic_coefficients(quad: Sequence[Tuple]) -> List[Fraction]:
    """Exact isogonal-cubic coefficients for rational vertices.

    Expands Im[(z-a)(z-c) conj((z-b)(z-d))] with z = x + iy symbolically as
    polynomials in x, y with Gaussian-rational coefficients.
    """
    a, b, c, d = (GaussFrac(Fraction(x), Fraction(y)) for x, y in quad)

    def lin(s, conj):
        iy = GaussFrac(0, -1 if conj else 1)
        s = s.conj() if conj else s
        return {(1, 0): GaussFrac(1), (0, 1): iy, (0, 0): GaussFrac(0) - s}

    def mul(p, q):
        out: Dict = {}
        for k1, c1 in p.items():
            for k2, c2 in q.items():
                k = (k1[0] + k2[0], k1[1] + k2[1])
                out[k] = out.get(k, GaussFrac(0)) + c1 * c2
        return out

    f = mul(mul(lin(a, False), lin(c, False)), mul(lin(b, True), lin(d, True)))
    return [f.get(m, GaussFrac(0)).im for m in MONOMIALS]


def exact_spiral_center(quad: Sequence[Tuple]) -> Tuple[Fraction, Fraction]:
    a, b, c, d = (GaussFrac(Fraction(x), Fraction(y)) for x, y in quad)
    P = (a * c - b * d) / (a + c - b - d)
    return P.re, P.im


def _frac(v) -> Fraction:
    return Fraction(str(v)) if isinstance(v, str) else Fraction(v)


def load_fixtures(path) -> List[dict]:
    """Read regression fixtures, turning every number into a Fraction.

    Records carry ``name``, ``quad``, ``expected_coefficients``,
    ``expected_P``, ``expected_asymptote`` and ``expected_third_points``;
    rationals may be written as strings such as ``"-36/13"``.
    """
    raw = json.loads(Path(path).read_text())

    def conv(x):
        if isinstance(x, list):
            return [conv(v) for v in x]
        if isinstance(x, dict):
            return {k: conv(v) for k, v in x.items()}
        if isinstance(x, (int, float)) or (isinstance(x, str) and _looks_numeric(x)):
            return _frac(x)
        return x

    return [conv(rec) for rec in raw]


def _looks_numeric(s: str) -> bool:
    try:
        Fraction(s)
    except ValueError:
        return False
    return True
