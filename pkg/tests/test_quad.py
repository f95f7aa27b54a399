import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from _util import KITE, KITE_COEFFS, WORKED, WORKED_COEFFS, cosine, curve_samples, generic_quads
from isocubic.constructions import CurveContext
from isocubic.cubic import CubicCurve, curve_residual
from isocubic.errors import CoincidenceError, ConjugateAtInfinity, DegeneracyError
from isocubic.geom import Direction, Line, isogonality_residual, isogonality_scale
from isocubic.oracle import exact_cubic_coefficients
from isocubic.quad import (
    DegeneracyClass,
    Quadrilateral,
    classify,
    cubic_from_quadrilateral,
    involution_k,
    is_isogonal_pair_in_quad,
    newton_line,
    profile_from_quadrilateral,
    spiral_center,
    spiral_inverse,
)

MONOS = ((3, 0), (2, 1), (1, 2), (0, 3), (2, 0), (1, 1), (0, 2), (1, 0), (0, 1), (0, 0))


def fitted_coefficients(q: Quadrilateral, rng) -> np.ndarray:
    """Oracle: evaluate the defining Im-product at random points, solve for coefficients."""
    a, b, c, d = q.complex_vertices()
    pts = rng.uniform(-5, 5, size=(30, 2))
    rows, rhs = [], []
    for x, y in pts:
        z = complex(x, y)
        rhs.append(((z - a) * (z - c) * ((z - b) * (z - d)).conjugate()).imag)
        rows.append([x ** i * y ** j for i, j in MONOS])
    sol, *_ = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)
    return sol


def tangential_quad():
    # tangent lines to the unit circle at four angles; incenter at the origin
    angles = [math.radians(t) for t in (0, 100, 200, 290)]
    verts = []
    for s, t in zip(angles, angles[1:] + angles[:1]):
        if t < s:
            t += 2 * math.pi
        verts.append(cmath.exp(1j * (s + t) / 2) / math.cos((t - s) / 2))
    return Quadrilateral.of(*[(z.real, z.imag) for z in verts])


class TestClassify:
    @pytest.mark.parametrize("pts,expected", [
        (((0, 0), (1, 0), (1, 1), (0, 1)), DegeneracyClass.Parallelogram),
        (((1, 0), (2, 0), (6, 0), (3, 0)), DegeneracyClass.Collinear),
        (KITE, DegeneracyClass.ReducibleCubic),
        (WORKED, DegeneracyClass.Generic),
    ])
    def test_examples(self, pts, expected):
        assert classify(Quadrilateral.of(*pts)) is expected

    def test_coincident_vertices_rejected(self):
        with pytest.raises(CoincidenceError):
            Quadrilateral.of((0, 0), (1, 0), (0, 0), (0, 1))

    def test_collinear_checked_before_parallelogram(self):
        # collinear and a + c = b + d at once
        assert classify(Quadrilateral.of((-2, 0), (-1, 0), (2, 0), (1, 0))) is DegeneracyClass.Collinear


class TestSynthesis:
    def test_worked_coefficients_against_fit(self):
        q = Quadrilateral.of(*WORKED)
        got = cubic_from_quadrilateral(q).as_array()
        fit = fitted_coefficients(q, np.random.default_rng(3))
        assert np.allclose(got, fit, atol=1e-9)
        assert np.allclose(got, WORKED_COEFFS, atol=1e-12)

    def test_worked_coefficients_exact(self):
        assert exact_cubic_coefficients(WORKED) == list(WORKED_COEFFS)

    def test_vertices_on_curve(self):
        q = Quadrilateral.of(*WORKED)
        f = cubic_from_quadrilateral(q)
        for v in q.vertices:
            assert f(v) == 0

    def test_kite_expansion_and_factorization(self):
        assert exact_cubic_coefficients(KITE) == list(KITE_COEFFS)
        # x * (x^2 + y^2 + 6y - 1), expanded by hand
        rng = np.random.default_rng(0)
        curve = CubicCurve(*KITE_COEFFS)
        for x, y in rng.uniform(-3, 3, size=(10, 2)):
            assert curve((x, y)) == pytest.approx(x * (x * x + y * y + 6 * y - 1), abs=1e-12)

    @pytest.mark.parametrize("pts", [((0, 0), (1, 0), (1, 1), (0, 1)), ((1, 0), (2, 0), (6, 0), (3, 0))])
    def test_degenerate_inputs_raise(self, pts):
        with pytest.raises(DegeneracyError):
            cubic_from_quadrilateral(Quadrilateral.of(*pts))

    @given(generic_quads(), st.integers(0, 2 ** 32 - 1))
    def test_matches_fit_on_random_quads(self, q, seed):
        got = cubic_from_quadrilateral(q).as_array()
        fit = fitted_coefficients(q, np.random.default_rng(seed))
        assert np.allclose(got, fit, rtol=1e-7, atol=1e-7 * np.abs(got).max())


class TestSpiralCenter:
    def test_worked(self):
        q = Quadrilateral.of(*WORKED)
        P = spiral_center(q).z
        assert P == 4 + 4j
        a, b, c, d = q.complex_vertices()
        # the spiral similarity about P takes A to B and D to C
        assert abs((b - P) / (a - P) - (c - P) / (d - P)) < 1e-14

    def test_kite(self):
        assert spiral_center(Quadrilateral.of(*KITE)).as_tuple() == pytest.approx((0, -3))

    def test_isosceles_trapezoid_on_axis(self):
        q = Quadrilateral.of((-2, 0), (2, 0), (1, 3), (-1, 3))
        assert abs(spiral_center(q).x) < 1e-12

    def test_parallelogram_has_no_center(self):
        with pytest.raises(DegeneracyError):
            spiral_center(Quadrilateral.of((0, 0), (1, 0), (1, 1), (0, 1)))

    @given(generic_quads())
    def test_on_curve_and_isogonal(self, q):
        P = spiral_center(q).z
        f = cubic_from_quadrilateral(q)
        assert curve_residual(f, P) <= 1e-9
        a, b, c, d = q.complex_vertices()
        assert abs(isogonality_residual(P, a, c, b, d)) <= 1e-9 * isogonality_scale(P, a, c, b, d)

    @given(generic_quads())
    def test_diagonal_products_agree(self, q):
        P = spiral_center(q).z
        a, b, c, d = q.complex_vertices()
        k1, k2 = (a - P) * (c - P), (b - P) * (d - P)
        assert abs(k1 - k2) <= 1e-9 * max(abs(k1), abs(k2))


class TestSpiralInverse:
    def setup_method(self):
        self.q = Quadrilateral.of(*WORKED)
        self.prof = profile_from_quadrilateral(self.q)

    def test_worked_vertex(self):
        assert self.prof.involution_k == -4 + 12j
        assert spiral_inverse((4, 0), self.prof).as_tuple() == pytest.approx((1, 3), abs=1e-14)

    def test_fixed_points(self):
        r = cmath.sqrt(-4 + 12j)
        for fp in (4 + 4j + r, 4 + 4j - r):
            assert abs(spiral_inverse(fp, self.prof).z - fp) <= 1e-9
        assert (4 + 4j + r) == pytest.approx(6.0796 + 6.885j, abs=1e-3)

    def test_center_goes_to_infinity(self):
        with pytest.raises(ConjugateAtInfinity) as info:
            spiral_inverse((4, 4), self.prof)
        assert info.value.direction.equals(Direction(2 + 1j))

    def test_off_curve_points_allowed(self):
        assert spiral_inverse((100, -3), self.prof) is not None

    @given(generic_quads())
    def test_swaps_diagonals(self, q):
        prof = profile_from_quadrilateral(q)
        a, b, c, d = q.complex_vertices()
        s = q.scale()
        assert abs(spiral_inverse(a, prof).z - c) <= 1e-9 * s * 10
        assert abs(spiral_inverse(b, prof).z - d) <= 1e-9 * s * 10

    @given(generic_quads(), st.integers(0, 2 ** 32 - 1))
    def test_involution_and_midpoints(self, q, seed):
        ctx = CurveContext.from_quadrilateral(q)
        rng = np.random.default_rng(seed)
        pts = curve_samples(ctx, rng, 20)
        prof = ctx.profile
        for x in pts:
            y = spiral_inverse(x, prof).z
            s = max(abs(x), abs(y), ctx.scale())
            assert abs(spiral_inverse(y, prof).z - x) <= 1e-9 * s
            assert newton_line(q).distance((x + y) / 2) <= 1e-9 * s

    @given(generic_quads(), st.integers(0, 2 ** 32 - 1))
    def test_completeness(self, q, seed):
        ctx = CurveContext.from_quadrilateral(q)
        pts = curve_samples(ctx, np.random.default_rng(seed), 2, avoid_P=0.1)
        if len(pts) < 2:
            return
        x, y = pts
        xp, yp = (ctx.profile.conjugate(p) for p in (x, y))
        f = ctx.curve
        for l1, l2 in ((Line.through(x, y), Line.through(xp, yp)), (Line.through(x, yp), Line.through(xp, y))):
            m = l1.intersect(l2)
            if m is None or abs(m.z) > 1e4 * ctx.scale():
                continue
            assert curve_residual(f, m) <= 1e-8

    @given(generic_quads(), st.integers(0, 2 ** 32 - 1))
    def test_conjugate_quadrilateral_has_same_curve(self, q, seed):
        ctx = CurveContext.from_quadrilateral(q)
        pts = curve_samples(ctx, np.random.default_rng(seed), 2, avoid_P=0.1)
        if len(pts) < 2:
            return
        x, y = pts
        xp, yp = (ctx.profile.conjugate(p) for p in (x, y))
        try:
            q2 = Quadrilateral.of(x, y, xp, yp)
        except CoincidenceError:
            return
        assert cosine(cubic_from_quadrilateral(q2).as_array(), ctx.curve.as_array()) >= 1 - 1e-9


class TestNewtonLine:
    def test_worked(self):
        ln = newton_line(Quadrilateral.of(*WORKED))
        assert ln.proportional_to(Line(0.5, 1, -2))
        assert ln.value((1.5, 1)) == pytest.approx(0, abs=1e-14)
        assert ln.value((2.5, 1.5)) == pytest.approx(0, abs=1e-14)

    def test_kite_is_axis(self):
        assert newton_line(Quadrilateral.of(*KITE)).proportional_to(Line(0, 1, 0))

    @given(generic_quads())
    def test_direction_is_infinity_direction(self, q):
        prof = profile_from_quadrilateral(q)
        assert prof.newton_line.direction.equals(prof.infinity_direction)
        assert prof.asymptote.direction.equals(prof.infinity_direction)


class TestProfile:
    def test_worked(self):
        prof = profile_from_quadrilateral(Quadrilateral.of(*WORKED))
        assert (prof.u, prof.v) == (1, -2)
        assert prof.spiral_center.as_tuple() == (4, 4)
        assert prof.involution_k == -4 + 12j
        assert prof.asymptote.proportional_to(Line(-3, 1, -2))

    def test_relabeled_same_curve_and_center(self):
        a, b, c, d = WORKED
        q1, q2 = Quadrilateral.of(a, b, c, d), Quadrilateral.of(b, a, d, c)
        assert cosine(cubic_from_quadrilateral(q1).as_array(), cubic_from_quadrilateral(q2).as_array()) == pytest.approx(1)
        assert spiral_center(q2).as_tuple() == pytest.approx(spiral_center(q1).as_tuple())

    def test_scaled_quadrilateral(self):
        q = Quadrilateral.of(*WORKED)
        p1, p2 = profile_from_quadrilateral(q), profile_from_quadrilateral(q.scaled(2))
        assert p2.spiral_center.z == pytest.approx(2 * p1.spiral_center.z)
        assert abs(p1.u * p2.v - p1.v * p2.u) < 1e-12
        # asymptote x - 2y - 3 = 0 becomes x - 2y - 6 = 0
        assert p2.asymptote.proportional_to(Line(-6, 1, -2))

    def test_degenerate_profile_raises(self):
        with pytest.raises(DegeneracyError):
            profile_from_quadrilateral(Quadrilateral.of(*KITE))

    def test_involution_k_products(self):
        q = Quadrilateral.of(*WORKED)
        assert involution_k(q) == -4 + 12j


class TestIsogonalPair:
    def test_on_curve_samples_pair_with_their_inverse(self):
        q = Quadrilateral.of(*WORKED)
        ctx = CurveContext.from_quadrilateral(q)
        pts = curve_samples(ctx, np.random.default_rng(11), 100)
        verts = q.complex_vertices()
        checked = 0
        for x in pts:
            y = ctx.profile.conjugate(x)
            if min(abs(v - p) for v in verts for p in (x, y)) < 1e-6:
                continue
            assert is_isogonal_pair_in_quad(x, y, q)
            checked += 1
        assert checked >= 90

    def test_incenter_is_self_conjugate(self):
        q = tangential_quad()
        assert is_isogonal_pair_in_quad(0j, 0j, q)

    def test_off_curve_point_fails(self):
        q = Quadrilateral.of(*WORKED)
        prof = profile_from_quadrilateral(q)
        x = 5 + 5j
        assert abs(cubic_from_quadrilateral(q)(x)) > 1
        assert not is_isogonal_pair_in_quad(x, spiral_inverse(x, prof), q)

    def test_vertex_raises(self):
        with pytest.raises(CoincidenceError):
            is_isogonal_pair_in_quad(0j, 3 + 2j, Quadrilateral.of(*WORKED))
