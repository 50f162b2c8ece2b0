import math

import numpy as np
import pytest

from wirtinger import circle, cone
from wirtinger.angles import AngleVector, parse_angles
from wirtinger.errors import InputError
from wirtinger.sampling import random_angles

R3 = math.sqrt(3)


def wedges(text):
    return cone.ConeWedges(parse_angles(text))


def feasible_omega(rng, n):
    return rng.uniform(0.1 * n, 0.9 * math.pi * n)


def random_convex_support(rng, w, spread=0.3):
    """Perturb 1 until every side stays positive."""
    m = circle.build_closed(w.angles).matrix
    for _ in range(100):
        h = 1 + spread * rng.uniform(-1, 1, w.n)
        if np.all(m @ h > 0):
            return h
        spread *= 0.5
    return np.ones(w.n)


class TestEdgeLengths:
    def test_triangle(self):
        np.testing.assert_allclose(cone.edge_lengths(wedges("2pi/3 x3"), np.ones(3)), 2 * R3, rtol=1e-14)

    def test_square(self):
        np.testing.assert_allclose(cone.edge_lengths(wedges("pi/2 x4"), np.ones(4)), 2.0, rtol=1e-14)

    def test_operator_identity(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            n = int(rng.integers(3, 40))
            a = random_angles(rng, n, feasible_omega(rng, n))
            w = cone.ConeWedges(a)
            x = rng.standard_normal(n)
            mx = circle.build_closed(a).matrix @ x
            assert np.linalg.norm(cone.edge_lengths(w, x) - mx) <= 1e-12 * np.linalg.norm(mx)

    def test_bad_length(self):
        with pytest.raises(InputError):
            cone.edge_lengths(wedges("pi/2 x4"), [1, 1, 1])

    def test_dirichlet_rejected(self):
        with pytest.raises(InputError):
            cone.ConeWedges(parse_angles("pi/3 x3", "dirichlet"))


class TestPolygon:
    def test_square(self):
        p = cone.build_polygon(wedges("pi/2 x4"), np.ones(4))
        assert p.perimeter == pytest.approx(8.0, rel=1e-14)
        assert p.area == pytest.approx(4.0, rel=1e-14)
        assert p.geometric_perimeter == pytest.approx(8.0, rel=1e-14)
        assert p.geometric_area == pytest.approx(4.0, rel=1e-14)
        assert p.convex

    def test_triangle(self):
        w = wedges("2pi/3 x3")
        p = cone.build_polygon(w, np.ones(3))
        assert p.perimeter == pytest.approx(6 * R3, rel=1e-14)
        assert p.area == pytest.approx(3 * R3, rel=1e-14)
        assert cone.perimeter(w, np.ones(3)) == pytest.approx(6 * R3, rel=1e-14)
        assert cone.area(w, np.ones(3)) == pytest.approx(3 * R3, rel=1e-14)

    def test_tangency_distance(self):
        w = wedges("2pi/5 x5")
        p = cone.build_polygon(w, np.ones(5))
        for i in range(5):
            start, end = p.vertices[i]
            # side i lies on the line x = 1 of its chart, tangent to the unit circle
            assert start[0] == pytest.approx(1.0, abs=1e-14)
            assert end[0] == pytest.approx(1.0, abs=1e-14)

    def test_geometry_matches_algebra(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            n = int(rng.integers(3, 30))
            a = random_angles(rng, n, feasible_omega(rng, n))
            w = cone.ConeWedges(a)
            h = random_convex_support(rng, w)
            p = cone.build_polygon(w, h)
            assert p.geometric_perimeter == pytest.approx(p.perimeter, rel=1e-10)
            assert p.geometric_area == pytest.approx(p.area, rel=1e-10)
            assert p.perimeter == pytest.approx(cone.perimeter(w, h), rel=1e-10)
            assert p.area == pytest.approx(cone.area(w, h), rel=1e-10)

    def test_json(self):
        w = wedges("pi/2 x4")
        d = cone.polygon_to_json(w, cone.build_polygon(w, np.ones(4)))
        assert d["perimeter"] == pytest.approx(8.0)
        assert d["vertices"][3]["wedge_pair"] == [4, 1]


class TestDeficit:
    def test_circumscribed_polygon_has_zero_deficit(self):
        for text in ("2pi/3 x3", "pi/2 x4", "pi/3 x5", "pi/2 x6"):
            w = wedges(text)
            assert cone.isoperimetric_deficit(w, 3.7 * np.ones(w.n)) == pytest.approx(0.0, abs=1e-12)

    def test_deficit_is_quadratic_form(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            n = int(rng.integers(3, 25))
            a = random_angles(rng, n, feasible_omega(rng, n))
            w = cone.ConeWedges(a)
            wm = circle.build_closed(a)
            h = rng.uniform(0.5, 2.0, n)
            one = np.ones(n)
            f = h - (one @ wm.matrix @ h) / (one @ wm.weights) * one
            expected = -0.5 * f @ wm.matrix @ f
            assert cone.isoperimetric_deficit(w, h) == pytest.approx(expected, rel=1e-9, abs=1e-10)

    def test_sign_by_regime(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            n = int(rng.integers(4, 20))
            below = cone.ConeWedges(random_angles(rng, n, rng.uniform(0.4, 1.9) * math.pi))
            h = random_convex_support(rng, below)
            assert cone.isoperimetric_deficit(below, h) > -1e-12

    def test_translation_class_at_two_pi(self):
        rng = np.random.default_rng(8)
        for _ in range(30):
            n = int(rng.integers(3, 20))
            a = random_angles(rng, n, 2 * math.pi)
            w = cone.ConeWedges(a)
            theta = w.cumulative
            v = rng.standard_normal(2) * 0.2
            h = 1 + v[0] * np.cos(theta) + v[1] * np.sin(theta)
            assert cone.isoperimetric_deficit(w, h) == pytest.approx(0.0, abs=1e-10)
            # anything outside the translation class is strictly worse
            g = h + 0.05 * rng.standard_normal(n)
            x, y = circle.trig_kernel(a) if a.exact else (np.cos(theta), np.sin(theta))
            basis = np.linalg.qr(np.column_stack([np.ones(n), x, y]))[0]
            if np.linalg.norm(g - basis @ (basis.T @ g)) > 1e-6:
                assert cone.isoperimetric_deficit(w, g) > 0

    def test_uniqueness_below_two_pi(self):
        w = wedges("pi/3 x5")
        rng = np.random.default_rng(1)
        for _ in range(50):
            h = 1 + 0.1 * rng.standard_normal(5)
            if np.ptp(h) > 1e-6:
                assert cone.isoperimetric_deficit(w, h) > 0


class TestImprove:
    @pytest.mark.parametrize("text", ["2pi/5 x5", "pi/3 x6", "2pi/3 x3", "pi/4 x7"])
    def test_none_when_not_above_two_pi(self, text):
        assert cone.improve_polygon(wedges(text)) is None

    @pytest.mark.parametrize("text", ["pi/2 x5", "3pi/4 x3", "4pi/5 x4", "5pi/6 x12"])
    def test_beats_circumscribed(self, text):
        w = wedges(text)
        h = cone.improve_polygon(w)
        one = np.ones(w.n)
        assert cone.perimeter(w, h) == pytest.approx(cone.perimeter(w, one), rel=1e-12)
        assert cone.area(w, h) > cone.area(w, one)
        assert cone.isoperimetric_deficit(w, h) < 0
        assert cone.build_polygon(w, h).convex
        assert np.all(h > 0)

    def test_random_above(self):
        rng = np.random.default_rng(12)
        for _ in range(40):
            n = int(rng.integers(4, 30))
            omega = rng.uniform(2.1, min(0.9 * n, 6.0)) * math.pi
            w = cone.ConeWedges(random_angles(rng, n, omega))
            h = cone.improve_polygon(w)
            assert h is not None
            assert cone.isoperimetric_deficit(w, h) < 0
            assert np.all(cone.edge_lengths(w, h) > 0)


def test_equal_angle_vector_roundtrip():
    a = AngleVector.equal(6, 2 * math.pi)
    assert cone.ConeWedges.from_angles(a).omega == pytest.approx(2 * math.pi)
    assert cone.ConeWedges.from_angles(list(a.angles)).n == 6
