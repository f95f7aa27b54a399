from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from _util import DATA, KITE_COEFFS, worked_ctx, worked_curve
from isocubic.cubic import CubicCurve, curve_residual, gradient
from isocubic.errors import ComponentError, DegenerateInputError
from isocubic.geom import Circle, PlanePoint
from isocubic.oracle import (
    GaussFrac,
    circle_curve_intersections,
    conic_through_five,
    exact_cubic_coefficients,
    exact_spiral_center,
    fd_gradient,
    load_fixtures,
    real_roots,
)

root = st.floats(min_value=-50, max_value=50, allow_nan=False)


class TestRealRoots:
    def test_cubic(self):
        r = real_roots([1, -11, 28, 0])
        assert r == pytest.approx([0, 4, 7])
        for t in r:
            assert abs(np.polyval([1, -11, 28, 0], t)) <= 1e-12 * max(1, abs(t)) ** 3 * 40

    def test_double(self):
        assert real_roots([1, -2, 1]) == pytest.approx([1, 1])

    def test_none(self):
        assert real_roots([1, 0, 1]) == []

    def test_quadruple(self):
        assert real_roots([1, -4, 6, -4, 1]) == pytest.approx([1, 1, 1, 1], abs=1e-3)

    def test_zero_polynomial(self):
        with pytest.raises(ValueError):
            real_roots([0, 0, 0])

    def test_degree_limit(self):
        with pytest.raises(ValueError):
            real_roots([1, 0, 0, 0, 0, 1])

    @given(st.lists(root, min_size=1, max_size=4))
    def test_recovers_separated_roots(self, roots):
        roots = sorted(roots)
        if any(b - a < 1e-2 for a, b in zip(roots, roots[1:])):
            return
        got = real_roots(np.poly(roots))
        assert got == pytest.approx(roots, rel=1e-7, abs=1e-7)


class TestCircleIntersections:
    def test_kite_circle_component(self):
        curve = CubicCurve(*KITE_COEFFS)
        # x^2 + y^2 + 6y - 1 = 0 is the circle centered (0, -3) with r^2 = 10
        with pytest.raises(ComponentError):
            circle_curve_intersections(curve, Circle(PlanePoint(0, -3), 10))

    def test_tiny_circle_on_curve(self):
        f = worked_curve()
        pts = circle_curve_intersections(f, Circle(PlanePoint(7, 0), 1e-4))
        assert len(pts) == 2
        assert all(curve_residual(f, p) <= 1e-9 for p in pts)

    def test_tiny_circle_off_curve(self):
        assert circle_curve_intersections(worked_curve(), Circle(PlanePoint(10, -8), 1e-4)) == []

    def test_circle_through_vertices(self):
        f = worked_curve()
        c = Circle.through(0j, 4 + 0j, 3 + 2j)
        pts = circle_curve_intersections(f, c)
        assert len(pts) == 4
        for v in (0j, 4 + 0j, 3 + 2j):
            assert min(abs(p.z - v) for p in pts) <= 1e-9

    def test_point_at_parameter_infinity(self):
        # circle whose leftmost point (the t = infinity point) is the curve point (0, 0)
        f = worked_curve()
        pts = circle_curve_intersections(f, Circle(PlanePoint(2, 0), 4))
        assert min(abs(p.z) for p in pts) <= 1e-9

    def test_real_circle_required(self):
        with pytest.raises(ValueError):
            circle_curve_intersections(worked_curve(), Circle(PlanePoint(0, 0), -1))


class TestFdGradient:
    def test_worked_origin(self):
        fx, fy = fd_gradient(worked_curve(), (0, 0), 1e-6)
        assert abs(fx - 28) <= 1e-5 and abs(fy + 36) <= 1e-5

    def test_even_function(self):
        # (x^2 + y^2) y + y^2 - x^2 + 3 is even in x
        f = CubicCurve(0, 1, 0, 1, -1, 0, 1, 0, 0, 3)
        assert abs(fd_gradient(f, (0, 1.7), 1e-4)[0]) <= 1e-9

    def test_second_order(self):
        f = worked_curve()
        exact = gradient(f, 1.3 - 0.4j)
        e1 = abs(fd_gradient(f, 1.3 - 0.4j, 1e-2)[0] - exact[0])
        e2 = abs(fd_gradient(f, 1.3 - 0.4j, 5e-3)[0] - exact[0])
        assert e1 / e2 == pytest.approx(4, rel=1e-3)

    def test_step_must_be_positive(self):
        with pytest.raises(ValueError):
            fd_gradient(worked_curve(), (0, 0), 0)


class TestConicFit:
    def test_circle(self):
        pts = [2 + 1j + 3 * np.exp(1j * t) for t in (0.1, 1.2, 2.0, 3.9, 5.5)]
        fit = conic_through_five(pts)
        # (x-2)^2 + (y-1)^2 - 9 = x^2 + y^2 - 4x - 2y - 4
        ref = np.array([1, 0, 1, -4, -2, -4.0])
        assert np.allclose(fit / fit[0], ref)

    def test_four_collinear(self):
        with pytest.raises(DegenerateInputError):
            conic_through_five([0, 1, 2, 3, 1j])

    def test_needs_five(self):
        with pytest.raises(ValueError):
            conic_through_five([0, 1, 2, 3])


class TestExactFixtures:
    def test_gauss_frac(self):
        a, b = GaussFrac(1, 2), GaussFrac(Fraction(1, 3), -1)
        assert (a * b) / b == a
        assert (a - a) == GaussFrac(0)

    def test_fixture_records(self):
        recs = load_fixtures(DATA / "fixtures.json")
        assert {r["name"] for r in recs} >= {"worked", "kite"}
        for rec in recs:
            quad = [tuple(p) for p in rec["quad"]]
            got = exact_cubic_coefficients(quad)
            exp = rec["expected_coefficients"]
            i = next(k for k, v in enumerate(exp) if v != 0)
            ratio = got[i] / exp[i]
            assert all(g == ratio * e for g, e in zip(got, exp))
            assert list(exact_spiral_center(quad)) == rec["expected_P"]

    def test_rational_strings(self):
        recs = load_fixtures(DATA / "fixtures.json")
        worked = next(r for r in recs if r["name"] == "worked")
        assert worked["expected_third_points"][1]["point"] == [Fraction(-36, 13), Fraction(-24, 13)]


def test_oracle_does_not_import_constructions():
    import isocubic.oracle as o
    src = open(o.__file__).read()
    assert "constructions" not in src.split('"""', 2)[2]
    assert worked_ctx() is not None
