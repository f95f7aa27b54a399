import math

import numpy as np
import pytest

from isocubic.degenerate import (
    LineAndCircle,
    LineAtInfinityAndHyperbola,
    collinear_locus,
    degenerate_locus,
    parallelogram_locus,
)
from isocubic.errors import DegeneracyError
from isocubic.geom import Direction, Line, isogonality_residual, isogonality_scale
from isocubic.oracle import conic_through_five, real_roots
from isocubic.quad import Quadrilateral

SQUARE = ((0, 0), (1, 0), (1, 1), (0, 1))


def on_x_axis(*xs):
    return Quadrilateral.of(*[(x, 0) for x in xs])


def excellent_point_on_line(q, base, direction):
    """Oracle: a root of the isogonality residual along a line, away from the vertices."""
    a, b, c, d = q.complex_vertices()
    ts = np.array([-1.0, 0.0, 1.0, 2.0])
    vals = [((z - a) * (z - c) * ((z - b) * (z - d)).conjugate()).imag
            for z in (base + t * direction for t in ts)]
    poly = np.polyfit(ts, vals, 3)
    poly[np.abs(poly) < 1e-12 * np.abs(poly).max()] = 0
    for t in real_roots(poly):
        z = base + t * direction
        if min(abs(z - v) for v in (a, b, c, d)) > 1e-6:
            return z
    raise AssertionError("no excellent point on this line")


class TestCollinear:
    def test_inversion_circle(self):
        loc = collinear_locus(on_x_axis(1, 2, 6, 3))
        assert isinstance(loc, LineAndCircle) and loc.variant == "LineAndCircle"
        assert loc.circle.center.as_tuple() == (0, 0)
        assert loc.circle.radius_sq == 6
        assert loc.line.proportional_to(Line(0, 0, 1))
        # inversion swaps a <-> c and b <-> d
        assert (1 - 0) * (6 - 0) == (2 - 0) * (3 - 0) == 6

    def test_negative_power_gives_line_only(self):
        loc = collinear_locus(on_x_axis(0, 1, 3, 4))
        assert loc.circle is None

    def test_symmetric_placement_line_only(self):
        assert collinear_locus(on_x_axis(-2, -1, 2, 1)).circle is None

    def test_slanted_line(self):
        e = complex(3, 4) / 5
        base = 1 + 1j
        pts = [base + s * e for s in (1, 2, 6, 3)]
        q = Quadrilateral.of(*[(z.real, z.imag) for z in pts])
        loc = collinear_locus(q)
        o = loc.circle.center.z
        a, b, c, d = pts
        along = lambda z: ((z - o) * e.conjugate()).real  # noqa: E731
        assert along(a) * along(c) == pytest.approx(loc.circle.radius_sq)
        assert along(b) * along(d) == pytest.approx(loc.circle.radius_sq)
        assert abs(((o - base) * e.conjugate()).imag) < 1e-12

    def test_circle_points_are_excellent(self):
        q = on_x_axis(1, 2, 6, 3)
        loc = collinear_locus(q)
        a, b, c, d = q.complex_vertices()
        r = loc.circle.radius
        for th in np.linspace(0.1, 3.0, 25):
            x = loc.circle.center.z + r * complex(math.cos(th), math.sin(th))
            res = isogonality_residual(x, a, c, b, d)
            assert abs(res) <= 1e-9 * isogonality_scale(x, a, c, b, d)

    def test_not_collinear_raises(self):
        with pytest.raises(DegeneracyError):
            collinear_locus(Quadrilateral.of(*SQUARE))


class TestParallelogram:
    def test_unit_square(self):
        q = Quadrilateral.of(*SQUARE)
        loc = parallelogram_locus(q)
        assert isinstance(loc, LineAtInfinityAndHyperbola)
        assert loc.center.as_tuple() == (0.5, 0.5)
        for v in q.vertices:
            assert abs(loc.value(v)) <= 1e-12
        dirs = loc.asymptote_directions
        assert any(d.equals(Direction(1 + 1j)) for d in dirs)
        assert any(d.equals(Direction(1 - 1j)) for d in dirs)
        assert loc.discriminant() > 0

    @pytest.mark.parametrize("pts", [SQUARE, ((0, 0), (3, 0), (4, 2), (1, 2)), ((1, 1), (4, -1), (6, 3), (3, 5))])
    def test_matches_five_point_fit(self, pts):
        q = Quadrilateral.of(*pts)
        loc = parallelogram_locus(q)
        a, b, c, d = q.complex_vertices()
        e = excellent_point_on_line(q, (a + b) / 2 + 0.3j, 1 + 0.2j)
        fit = conic_through_five([a, b, c, d, e])
        ours = np.array(loc.conic)
        assert abs(abs(fit @ ours) / (np.linalg.norm(fit) * np.linalg.norm(ours)) - 1) <= 1e-9

    def test_rhombus_asymptotes_on_axes(self):
        loc = parallelogram_locus(Quadrilateral.of((2, 0), (0, 1), (-2, 0), (0, -1)))
        assert any(d.equals(Direction(1)) for d in loc.asymptote_directions)
        assert any(d.equals(Direction(1j)) for d in loc.asymptote_directions)

    def test_central_symmetry(self):
        q = Quadrilateral.of((1, 1), (4, -1), (6, 3), (3, 5))
        loc = parallelogram_locus(q)
        a, b, c, d = q.complex_vertices()
        m = loc.center.z
        for v in (a, b, c, d, 0.5 + 2j, 7 - 1j):
            assert loc.value(v) == pytest.approx(loc.value(2 * m - v), abs=1e-9)

    def test_hyperbola_points_are_excellent(self):
        q = Quadrilateral.of((0, 0), (3, 0), (4, 2), (1, 2))
        loc = parallelogram_locus(q)
        A, B, C, D, E, F = loc.conic
        a, b, c, d = q.complex_vertices()
        checked = 0
        for x in np.linspace(-5, 9, 29):
            for y in real_roots([C, B * x + E, A * x * x + D * x + F]):
                z = complex(x, y)
                if min(abs(z - v) for v in (a, b, c, d)) < 1e-6:
                    continue
                assert abs(isogonality_residual(z, a, c, b, d)) <= 1e-9 * isogonality_scale(z, a, c, b, d)
                checked += 1
        assert checked > 20

    def test_not_parallelogram_raises(self):
        with pytest.raises(DegeneracyError):
            parallelogram_locus(Quadrilateral.of((0, 0), (4, 0), (3, 2), (1, 3)))


def test_dispatch():
    assert isinstance(degenerate_locus(on_x_axis(1, 2, 6, 3)), LineAndCircle)
    assert isinstance(degenerate_locus(Quadrilateral.of(*SQUARE)), LineAtInfinityAndHyperbola)
