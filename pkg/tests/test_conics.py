from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from isoconic.conics import (
    Conic,
    ConicClass,
    conic_axes,
    conic_center,
    conic_classify,
    conic_conic_intersect,
    conic_through_five_points,
    cross_ratio_on_conic,
    extreme_points,
    fourth_common_point,
    intersection_multiplicity_at,
    line_conic_intersect,
    pole,
    polar,
    second_intersection,
    second_intersection_flagged,
    tangent_line_at,
)
from isoconic.errors import (
    CircleAxesUndefined,
    ConicsNotThroughPoints,
    FourthPointCoincides,
    IdenticalConics,
    LineNotThroughPoint,
    NotExactlyRepresentable,
    ParabolaHasNoCenter,
    PointNotOnConic,
    UnderdeterminedConic,
)
from isoconic.projective import HLine, HPoint, cross_ratio_line, join, meet

from oracles import match_points, quartic_intersection_oracle

F = Fraction
UNIT = Conic.circle(0, 0, 1)
XY1 = Conic.from_coefficients(0, 1, 0, 0, 0, -1)
ELLIPSE = Conic.from_coefficients(F(1, 4), 0, 1, 0, 0, -1)


def circle_point(t) -> HPoint:
    """Rational point of the unit circle by the tangent half-angle."""
    return HPoint(1 - t * t, 2 * t, 1 + t * t)


def hyperbola_point(t) -> HPoint:
    return HPoint(t, 1 / F(t))


def affine(p: HPoint):
    return tuple(float(c) for c in p.affine_float())


small_params = st.fractions(min_value=-10, max_value=10, max_denominator=40)


class TestFivePoints:
    def test_hyperbola(self):
        pts = [HPoint(1, 1), HPoint(-1, -1), HPoint(2, F(1, 2)), HPoint(F(1, 2), 2), HPoint(-2, F(-1, 2))]
        assert conic_through_five_points(*pts) == XY1

    def test_repeated_point(self):
        pts = [HPoint(0, 0), HPoint(1, 0), HPoint(0, 1), HPoint(1, 1)]
        with pytest.raises(UnderdeterminedConic):
            conic_through_five_points(*pts, pts[2])

    def test_recovers_unit_circle(self):
        ts = [F(0), F(1, 2), F(2), F(-1, 3), F(5, 7)]
        C = conic_through_five_points(*(circle_point(t) for t in ts))
        assert C == UNIT
        for k in range(20):
            assert C.value(circle_point(F(k - 10, 3))) == 0

    @given(st.lists(small_params, min_size=5, max_size=5, unique=True))
    def test_exact_residuals_vanish(self, ts):
        assume(all(t != 0 for t in ts))
        pts = [hyperbola_point(t) for t in ts]
        C = conic_through_five_points(*pts)
        assert all(C.value(p) == 0 for p in pts)
        assert C == XY1

    def test_float_residuals(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            pts = [HPoint(*rng.uniform(-5, 5, 2)) for _ in range(5)]
            C = conic_through_five_points(*pts)
            assert max(C.residual(p) for p in pts) <= 1e-10


class TestLineConic:
    def test_secant(self):
        res = line_conic_intersect(HLine(0, 1, 0), UNIT)
        assert sorted(affine(p) for p in res.real_points()) == [(-1.0, 0.0), (1.0, 0.0)]
        assert [m for _, m in res.points] == [1, 1]

    def test_tangent(self):
        res = line_conic_intersect(HLine(1, 0, -1), UNIT)
        assert res.points == [(HPoint(1, 0), 2)]
        assert res.total_multiplicity == 2

    def test_conjugate_pair(self):
        res = line_conic_intersect(HLine(1, 0, -2), UNIT)
        assert res.points == [] and len(res.conjugate_pairs) == 1
        assert res.total_multiplicity == 2
        ys = sorted((v[1] / v[2] for v in res.conjugate_pairs[0].complex_points()), key=lambda z: z.imag)
        xs = [v[0] / v[2] for v in res.conjugate_pairs[0].complex_points()]
        assert all(abs(x - 2) < 1e-12 for x in xs)
        # y^2 + 3 = 0 on the line x = 2
        assert ys[0] == pytest.approx(-1j * math.sqrt(3)) and ys[1] == pytest.approx(1j * math.sqrt(3))


class TestSecondIntersection:
    def test_chord(self):
        assert second_intersection(UNIT, HPoint(1, 0), HLine(1, -1, -1)) == HPoint(0, -1)

    def test_tangent_returns_point(self):
        q, tangent = second_intersection_flagged(UNIT, HPoint(1, 0), HLine(1, 0, -1))
        assert q == HPoint(1, 0) and tangent

    def test_point_at_infinity(self):
        assert second_intersection(XY1, HPoint(1, 1), HLine(1, 0, -1)) == HPoint(0, 1, 0)

    def test_errors(self):
        with pytest.raises(PointNotOnConic):
            second_intersection(UNIT, HPoint(2, 0), HLine(0, 1, 0))
        with pytest.raises(LineNotThroughPoint):
            second_intersection(UNIT, HPoint(1, 0), HLine(0, 1, -1))

    @given(small_params, small_params)
    def test_exact_and_on_conic(self, t, s):
        p = circle_point(t)
        other = HPoint(s, 3 * s + 1)
        assume(other != p)
        l = join(p, other)
        q = second_intersection(UNIT, p, l)
        assert q.is_exact and UNIT.value(q) == 0


class TestConicConic:
    def test_two_unit_circles(self):
        res = conic_conic_intersect(UNIT.to_float(), Conic.circle(1.0, 0.0, 1.0))
        got = sorted(affine(p) for p in res.real_points())
        assert match_points(got, [(0.5, -math.sqrt(3) / 2), (0.5, math.sqrt(3) / 2)]) < 1e-12
        assert res.total_multiplicity == 4

    def test_double_tangency(self):
        res = conic_conic_intersect(Conic.circle(0, 0, 2), XY1)
        assert sorted((affine(p), m) for p, m in res.points) == [((-1.0, -1.0), 2), ((1.0, 1.0), 2)]

    def test_ellipse_and_circle(self):
        res = conic_conic_intersect(UNIT, ELLIPSE)
        assert sorted((affine(p), m) for p, m in res.points) == [((0.0, -1.0), 2), ((0.0, 1.0), 2)]

    def test_identical(self):
        with pytest.raises(IdenticalConics):
            conic_conic_intersect(UNIT, Conic.circle(0, 0, 1))

    def test_irrational_points_in_exact_mode(self):
        with pytest.raises(NotExactlyRepresentable):
            conic_conic_intersect(UNIT, Conic.circle(1, 0, 1))

    def test_random_pairs_agree_with_oracle(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            C1, C2 = (conic_through_five_points(*(HPoint(*rng.uniform(-3, 3, 2)) for _ in range(5)))
                      for _ in range(2))
            res = conic_conic_intersect(C1, C2)
            assert res.total_multiplicity == 4
            want = quartic_intersection_oracle(C1.to_float().entries, C2.to_float().entries)
            assert match_points([affine(p) for p in res.real_points()], want) <= 1e-8


class TestFourthCommonPoint:
    def test_exact_fourth_point(self):
        a, b, c = circle_point(F(0)), circle_point(F(1, 2)), circle_point(F(3))
        C2 = conic_through_five_points(a, b, c, HPoint(F(1, 3), F(1, 5)), HPoint(-2, F(1, 7)))
        D = fourth_common_point(UNIT, C2, a, b, c)
        assert UNIT.value(D) == 0 and C2.value(D) == 0
        assert D not in (a, b, c)

    def test_identical(self):
        a, b, c = circle_point(F(0)), circle_point(F(1, 2)), circle_point(F(3))
        with pytest.raises(IdenticalConics):
            fourth_common_point(UNIT, Conic.circle(0, 0, 1), a, b, c)

    def test_not_through_points(self):
        a, b, c = circle_point(F(0)), circle_point(F(1, 2)), HPoint(5, 5)
        with pytest.raises(ConicsNotThroughPoints):
            fourth_common_point(UNIT, XY1, a, b, c)

    def test_tangent_forces_coincidence(self):
        # conics through a, b, c with a common tangent at a
        a, b, c = circle_point(F(0)), circle_point(F(1, 2)), circle_point(F(3))
        tangent = tangent_line_at(UNIT, a)
        # UNIT + k * (tangent line) * (line bc) touches UNIT at a and passes b, c
        bc = join(b, c)
        l, m = tangent.coords, bc.coords
        prod = Conic([[2 * l[0] * m[0], l[0] * m[1] + l[1] * m[0], l[0] * m[2] + l[2] * m[0]],
                      [l[0] * m[1] + l[1] * m[0], 2 * l[1] * m[1], l[1] * m[2] + l[2] * m[1]],
                      [l[0] * m[2] + l[2] * m[0], l[1] * m[2] + l[2] * m[1], 2 * l[2] * m[2]]])
        C2 = Conic([[u + v for u, v in zip(r1, r2)] for r1, r2 in zip(_matrix(UNIT), _matrix(prod))])
        with pytest.raises(FourthPointCoincides) as info:
            fourth_common_point(UNIT, C2, a, b, c)
        assert info.value.point == a


def _matrix(C: Conic):
    A, B, Cc, D, E, Fv = C.entries
    return [[A, B, D], [B, Cc, E], [D, E, Fv]]


class TestTangentsAndPolarity:
    def test_examples(self):
        assert tangent_line_at(UNIT, HPoint(1, 0)) == HLine(1, 0, -1)
        assert tangent_line_at(XY1, HPoint(1, 1)) == HLine(1, 1, -2)
        res = line_conic_intersect(tangent_line_at(XY1, HPoint(1, 1)), XY1)
        assert res.points == [(HPoint(1, 1), 2)]

    def test_center_polar(self):
        assert polar(UNIT, HPoint(0, 0)) == HLine(0, 0, 1)

    @given(small_params, small_params, small_params, small_params)
    def test_duality(self, x1, y1, x2, y2):
        p, q = HPoint(x1, y1), HPoint(x2, y2)
        assert pole(ELLIPSE, polar(ELLIPSE, p)) == p
        # reciprocity: p on polar(q) iff q on polar(p)
        lhs = sum(a * b for a, b in zip(polar(ELLIPSE, q), p))
        rhs = sum(a * b for a, b in zip(polar(ELLIPSE, p), q))
        assert (lhs == 0) == (rhs == 0)


class TestMetric:
    def test_centers(self):
        assert conic_center(UNIT) == HPoint(0, 0)
        assert conic_center(Conic.from_coefficients(F(1, 4), 0, 1, -1, 0, 0)) == HPoint(2, 0)
        assert conic_center(XY1) == HPoint(0, 0)
        with pytest.raises(ParabolaHasNoCenter):
            conic_center(Conic.from_coefficients(1, 0, 0, 0, -1, 0))

    def test_axes(self):
        assert set(conic_axes(ELLIPSE)) == {HLine(0, 1, 0), HLine(1, 0, 0)}
        assert set(conic_axes(XY1)) == {HLine(1, -1, 0), HLine(1, 1, 0)}
        rotated = Conic.from_coefficients(5, 8, 5, 0, 0, -9)
        assert set(conic_axes(rotated)) == {HLine(1, -1, 0), HLine(1, 1, 0)}
        with pytest.raises(CircleAxesUndefined):
            conic_axes(UNIT)

    def test_irrational_axes_in_exact_mode(self):
        with pytest.raises(NotExactlyRepresentable):
            conic_axes(Conic.from_coefficients(1, 1, 2, 0, 0, -1))

    def test_extreme_points(self):
        pts = sorted(affine(p) for p in extreme_points(ELLIPSE))
        assert pts == [(-2.0, 0.0), (0.0, -1.0), (0.0, 1.0), (2.0, 0.0)]
        assert sorted(affine(p) for p in extreme_points(XY1)) == [(-1.0, -1.0), (1.0, 1.0)]
        rotated = Conic.from_coefficients(5.0, 8.0, 5.0, 0.0, 0.0, -9.0)
        pts = extreme_points(rotated)
        assert len(pts) == 4
        r = 1 / math.sqrt(2)
        # on y = x: 18 x^2 = 9; on y = -x: 2 x^2 = 9
        want = [(r, r), (-r, -r), (3 * r, -3 * r), (-3 * r, 3 * r)]
        assert match_points([affine(p) for p in pts], want) < 1e-12

    @given(st.floats(0.2, 5), st.floats(0.2, 5), st.floats(-3, 3), st.floats(-3, 3), st.floats(0, math.pi))
    def test_extreme_points_tangent_perpendicular_to_radius(self, a, b, cx, cy, th):
        assume(abs(a - b) > 1e-2)
        c, s = math.cos(th), math.sin(th)
        # ((x-cx)c + (y-cy)s)^2/a^2 + (-(x-cx)s + (y-cy)c)^2/b^2 = 1
        A = c * c / a**2 + s * s / b**2
        B = c * s * (1 / a**2 - 1 / b**2)
        C = s * s / a**2 + c * c / b**2
        D = -(A * cx + B * cy)
        E = -(B * cx + C * cy)
        Fv = A * cx * cx + 2 * B * cx * cy + C * cy * cy - 1
        K = Conic([[A, B, D], [B, C, E], [D, E, Fv]])
        O = affine(conic_center(K))
        for p in extreme_points(K):
            t = tangent_line_at(K, p, 1e-8).normalized()
            x, y = affine(p)
            # tangent direction (t1, -t0) is perpendicular to p - O
            assert abs(t[1] * (x - O[0]) - t[0] * (y - O[1])) <= 1e-8 * math.hypot(x - O[0], y - O[1])

    def test_classification(self):
        assert conic_classify(UNIT) is ConicClass.CIRCLE
        assert conic_classify(XY1) is ConicClass.HYPERBOLA
        assert conic_classify(ELLIPSE) is ConicClass.REAL_ELLIPSE
        assert conic_classify(Conic.from_coefficients(1, 0, 0, 0, -1, 0)) is ConicClass.PARABOLA
        assert conic_classify(Conic.from_coefficients(1, 0, 0, 0, 0, 0)) is ConicClass.DEGENERATE_DOUBLE_LINE
        assert conic_classify(Conic.from_coefficients(1, 0, -1, 0, 0, 0)) is ConicClass.DEGENERATE_LINE_PAIR
        assert conic_classify(Conic.circle(0, 0, -1)) is ConicClass.IMAGINARY_ELLIPSE

    @given(st.integers(1, 50))
    def test_classification_scale_invariant(self, k):
        assert conic_classify(Conic.from_coefficients(k, 0, 4 * k, 0, 0, -k)) is ConicClass.REAL_ELLIPSE


class TestMultiplicity:
    def test_double_tangency(self):
        assert intersection_multiplicity_at(Conic.circle(0, 0, 2), XY1, HPoint(1, 1)) == 2

    def test_not_common(self):
        assert intersection_multiplicity_at(UNIT, ELLIPSE, HPoint(1, 0)) == 0

    def test_vertex_osculation(self):
        osc = Conic.circle(F(3, 2), 0, F(1, 4))
        assert intersection_multiplicity_at(ELLIPSE, osc, HPoint(2, 0)) == 4
        assert intersection_multiplicity_at(ELLIPSE.to_float(), osc.to_float(), HPoint(2.0, 0.0)) == 4

    def test_transverse(self):
        assert intersection_multiplicity_at(UNIT, Conic.circle(1, 0, 1), HPoint(F(1, 2), 0, 1)) == 0
        p = HPoint(1, 0)
        assert intersection_multiplicity_at(UNIT, Conic.circle(1, 1, 1), p) == 1

    def test_sums_to_four(self):
        rng = np.random.default_rng(3)
        for _ in range(30):
            C1, C2 = (conic_through_five_points(*(HPoint(*rng.uniform(-3, 3, 2)) for _ in range(5)))
                      for _ in range(2))
            res = conic_conic_intersect(C1, C2)
            total = sum(intersection_multiplicity_at(C1, C2, p, on_tol=1e-9) for p in res.real_points())
            assert total == sum(m for _, m in res.points)


class TestCrossRatioOnConic:
    def test_harmonic(self):
        a, b, c, d = HPoint(1, 0), HPoint(-1, 0), HPoint(0, 1), HPoint(0, -1)
        e = circle_point(F(1, 3))
        assert cross_ratio_on_conic(UNIT, a, b, c, d, e) == -1
        assert cross_ratio_on_conic(UNIT, a, b, c, d, circle_point(F(-5, 2))) == -1

    @given(st.lists(small_params, min_size=6, max_size=6, unique=True))
    def test_independent_of_vertex_and_matches_projection(self, ts):
        assume(all(t != 0 for t in ts))
        a, b, c, d, e, e2 = (hyperbola_point(t) for t in ts)
        x = cross_ratio_on_conic(XY1, a, b, c, d, e)
        assert x == cross_ratio_on_conic(XY1, a, b, c, d, e2)
        # project from e onto a fixed line not through e
        target = HLine(1, 3, -F(1, 7))
        assume(sum(u * v for u, v in zip(target, e)) != 0)
        proj = [meet(join(e, p), target) for p in (a, b, c, d)]
        assert x == cross_ratio_line(*proj)

    def test_off_conic(self):
        with pytest.raises(PointNotOnConic):
            cross_ratio_on_conic(UNIT, HPoint(1, 0), HPoint(-1, 0), HPoint(0, 1), HPoint(0, -1), HPoint(3, 3))
