"""Property suite run against one scene: each property reports pass/fail and its worst residual."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np

from . import cubic as cb
from .constructions import (
    CurveContext,
    circle_fourth_point,
    conjugate_on_curve,
    cubic_add,
    generating_quadrilateral,
    third_point_by_reflection,
    tangent_by_reflection,
)
from .cubic import CubicCurve
from .errors import GeometryError
from .geom import DEFAULT_TOL, Circle, InfinitePoint, PlanePoint, Tolerance, circumcenter
from .quad import Quadrilateral, _synthesize, spiral_center

# thresholds per property
LIMITS = {
    "classification": None,
    "vertex_incidence": 1e-9,
    "spiral_center_agreement": 1e-8,
    "involution": 1e-9,
    "tangent_equivalence": 1e-7,
    "third_point_equivalence": 1e-8,
    "circle_fourth_point": 1e-8,
    "cubic_addition": 1e-8,
    "regeneration": 1e-9,
}


@dataclass
class PropertyResult:
    name: str
    passed: bool = True
    max_residual: float = 0.0
    checked: int = 0
    skipped: bool = False
    note: Optional[str] = None

    def record(self, residual: float, limit: float):
        self.checked += 1
        if not math.isfinite(residual) or residual > limit:
            self.passed = False
        if math.isfinite(self.max_residual):
            self.max_residual = max(self.max_residual, residual) if math.isfinite(residual) else math.inf

    def as_dict(self) -> dict:
        d = {"pass": self.passed, "max_residual": self.max_residual, "checked": self.checked}
        if self.skipped:
            d["skipped"] = True
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class SuiteReport:
    properties: Dict[str, PropertyResult] = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        return all(p.passed for p in self.properties.values())

    def as_dict(self) -> dict:
        return {"all_pass": self.all_pass,
                "properties": {k: v.as_dict() for k, v in self.properties.items()}}


def _samples(ctx: CurveContext, rng: np.random.Generator, n: int) -> List[complex]:
    """On-curve, non-singular points not too close to P."""
    L = ctx.scale()
    pts = cb.sample_curve_points(ctx.curve, rng, 3 * n + 10, center=ctx.P, radius=2 * L)
    out = []
    for p in pts:
        z = p.z
        if abs(z - ctx.P) < 1e-3 * L or cb.gradient_is_zero(ctx.curve, z, ctx.tol):
            continue
        out.append(z)
        if len(out) == n:
            break
    return out


def _local_scale(ctx: CurveContext, *zs) -> float:
    return max([ctx.scale()] + [abs(z) for z in zs if z is not None])


def _check_involution(ctx, pts, res: PropertyResult):
    lim = LIMITS["involution"]
    for x in pts:
        xc = ctx.conj(PlanePoint.from_complex(x))
        if isinstance(xc, InfinitePoint):
            continue
        back = ctx.conj(xc)
        s = _local_scale(ctx, x, xc.z)
        res.record(abs(back.z - x) / s, lim)
        res.record(cb.curve_residual(ctx.curve, xc.z), lim)
        mid = (x + xc.z) / 2
        res.record(ctx.profile.newton_line.distance(mid) / s, lim)
        chord = conjugate_on_curve(ctx, PlanePoint.from_complex(x)).x_conj
        if not isinstance(chord, InfinitePoint):
            res.record(abs(chord.z - xc.z) / s, 1e-8)
    if ctx.quad is not None:
        a, b, c, d = ctx.quad.complex_vertices()
        for p, q in ((a, c), (b, d)):
            res.record(abs(ctx.profile.conjugate(p) - q) / _local_scale(ctx, p, q), lim)


def _check_tangent(ctx, pts, res: PropertyResult):
    for x in pts:
        ref = tangent_by_reflection(ctx, PlanePoint.from_complex(x))
        grad = cb.tangent_line_at(ctx.curve, x, ctx.tol)
        res.record(ref.direction.angle_to(grad.direction), LIMITS["tangent_equivalence"])


def _check_third(ctx, pts, res: PropertyResult):
    lim = LIMITS["third_point_equivalence"]
    for x, y in zip(pts[0::2], pts[1::2]):
        if abs(x - y) < 1e-6 * ctx.scale():
            continue
        w, z = third_point_by_reflection(ctx, PlanePoint.from_complex(x), PlanePoint.from_complex(y))
        oracle = cb.third_point(ctx.curve, PlanePoint.from_complex(x), PlanePoint.from_complex(y), ctx.tol)
        if isinstance(w, InfinitePoint) or isinstance(oracle, InfinitePoint):
            ok = isinstance(w, InfinitePoint) and isinstance(oracle, InfinitePoint)
            res.record(0.0 if ok else math.inf, lim)
            continue
        res.record(abs(w.z - oracle.z) / _local_scale(ctx, x, y, w.z), lim)
        if isinstance(z, InfinitePoint):
            continue
        try:
            o = circumcenter(ctx.P, x, y)
        except GeometryError:
            continue
        r = abs(x - o)
        res.record(abs(abs(z.z - o) - r) / max(r, ctx.scale()), lim)


def _check_circle(ctx, pts, res: PropertyResult):
    lim = LIMITS["circle_fourth_point"]
    for e, f, g in zip(pts[0::3], pts[1::3], pts[2::3]):
        try:
            base = Circle.through(e, f, g)
        except GeometryError:
            continue
        h = circle_fourth_point(ctx, *(PlanePoint.from_complex(p) for p in (e, f, g)))
        res.record(cb.curve_residual(ctx.curve, h.z), lim)
        res.record(abs(base.residual(h)) / max(base.radius, ctx.scale()), lim)


def _check_addition(ctx, pts, res: PropertyResult):
    for x in pts:
        xc = ctx.conj(PlanePoint.from_complex(x))
        if isinstance(xc, InfinitePoint) or abs(xc.z - x) < 1e-6 * ctx.scale():
            continue
        w = cubic_add(ctx, PlanePoint.from_complex(x), xc)
        if isinstance(w, InfinitePoint):
            continue
        s = _local_scale(ctx, x, xc.z, w.z)
        res.record(abs(abs(w.z - x) - abs(w.z - xc.z)) / s, LIMITS["cubic_addition"])


def _check_regeneration(ctx, pts, res: PropertyResult):
    target = ctx.curve.as_array()
    for s1, s2 in zip(pts[0::2], pts[1::2]):
        try:
            q = generating_quadrilateral(ctx, PlanePoint.from_complex(s1), PlanePoint.from_complex(s2))
        except GeometryError:
            continue
        v = _synthesize(q).as_array()
        cos = abs(v @ target) / (np.linalg.norm(v) * np.linalg.norm(target))
        res.record(1.0 - cos, LIMITS["regeneration"])


def run_suite(curve: CubicCurve, quad: Optional[Quadrilateral] = None, trials: int = 100,
              seed: int = 0, tol: Tolerance = DEFAULT_TOL) -> SuiteReport:
    report = SuiteReport()
    props = report.properties

    cls = PropertyResult("classification")
    rep = cb.classify_cubic(curve, tol)
    cls.checked = 1
    cls.passed = rep.is_isogonal
    cls.max_residual = rep.spiral_center_residual if rep.spiral_center_residual is not None else math.inf
    cls.note = rep.reason.value
    props["classification"] = cls

    if quad is not None:
        inc = PropertyResult("vertex_incidence")
        for v in quad.vertices:
            inc.record(cb.curve_residual(curve, v), LIMITS["vertex_incidence"])
        props["vertex_incidence"] = inc

    sampled: Dict[str, Callable] = {
        "involution": _check_involution,
        "tangent_equivalence": _check_tangent,
        "third_point_equivalence": _check_third,
        "circle_fourth_point": _check_circle,
        "cubic_addition": _check_addition,
        "regeneration": _check_regeneration,
    }
    if not rep.is_isogonal:
        for name in ["spiral_center_agreement"] + list(sampled):
            props[name] = PropertyResult(name, passed=False, max_residual=math.inf, skipped=True,
                                         note="curve is not an isogonal cubic")
        return report

    ctx = CurveContext.from_quadrilateral(quad, tol) if quad is not None else CurveContext.from_curve(curve, tol)

    sc = PropertyResult("spiral_center_agreement")
    P = ctx.P
    L = ctx.scale()
    holds, meet = cb.circular_tangency_check(curve, tol)
    m = meet.dehomogenize()
    sc.record(abs(m - P) / L if m is not None else math.inf, LIMITS["spiral_center_agreement"])
    if quad is not None:
        sc.record(abs(spiral_center(quad, tol).z - P) / L, LIMITS["spiral_center_agreement"])
    sc.record(cb.spiral_center_residual(curve, tol), 1e-9)
    if not holds:
        sc.passed = False
    props["spiral_center_agreement"] = sc

    rng = np.random.default_rng(seed)
    pts = _samples(ctx, rng, trials) if trials > 0 else []
    for name, check in sampled.items():
        res = PropertyResult(name)
        # every property draws the same points in a property-specific order
        local = list(pts)
        np.random.default_rng([seed, len(name)]).shuffle(local)
        try:
            check(ctx, local, res)
        except GeometryError as exc:
            res.passed = False
            res.max_residual = math.inf
            res.note = f"{type(exc).__name__}: {exc}"
        props[name] = res
    return report
