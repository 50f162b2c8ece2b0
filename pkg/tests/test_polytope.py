import math

import numpy as np
import pytest
from scipy.spatial import ConvexHull, HalfspaceIntersection

from wirtinger import polytope, spectral
from wirtinger.errors import DomainError, InputError

R3 = math.sqrt(3)


def hull_area(normals, h):
    """Independent surface area: halfspace intersection then hull area."""
    hs = np.column_stack([normals, -np.asarray(h, dtype=float)])
    pts = HalfspaceIntersection(hs, np.zeros(3)).intersections
    return ConvexHull(pts).area


def box_area(h):
    d = np.array([h[0] + h[1], h[2] + h[3], h[4] + h[5]])
    return 2 * (d[0] * d[1] + d[1] * d[2] + d[0] * d[2])


@pytest.fixture(scope="module")
def cube():
    return polytope.build_fan(polytope.cube_normals())


@pytest.fixture(scope="module")
def tet():
    return polytope.build_fan(polytope.tetrahedron_normals())


@pytest.fixture(scope="module")
def fans():
    rng = np.random.default_rng(2024)
    return [polytope.random_fan(rng, int(n)) for n in rng.integers(6, 25, size=8)]


class TestFan:
    def test_cube_combinatorics(self, cube):
        assert cube.counts() == (6, 12, 8)
        assert all(len(c) == 4 for c in cube.facet_cycles)
        for (i, j), th in cube.theta.items():
            assert th == pytest.approx(math.pi / 2)

    def test_tetrahedron_combinatorics(self, tet):
        assert tet.counts() == (4, 6, 4)
        assert all(len(c) == 3 for c in tet.facet_cycles)

    def test_euler(self, fans):
        for fan in fans:
            f, e, v = fan.counts()
            assert v - e + f == 2
            assert 2 * e == 3 * v

    def test_repeated_normals(self):
        nrm = np.vstack([polytope.cube_normals(), [[1.0, 0, 0]]])
        with pytest.raises(InputError, match="repeated normals: 0, 6"):
            polytope.build_fan(nrm)

    @pytest.mark.parametrize("normals", [
        [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        [[1, 0, 0], [0, 1, 0], [0, 0, 1], [0, 0.6, 0.8]],
        [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0]],
        [[2, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]],
    ])
    def test_rejects(self, normals):
        with pytest.raises(InputError):
            polytope.build_fan(normals)

    def test_octahedron_is_degenerate(self):
        # cube vertices as normals: four per hull face, so P(1) has degree-4 vertices
        v = np.array([[a, b, c] for a in (1, -1) for b in (1, -1) for c in (1, -1)]) / R3
        with pytest.raises(InputError, match="coplanar"):
            polytope.build_fan(v)


class TestSurfaceArea:
    def test_cube(self, cube):
        assert polytope.surface_area(cube, np.ones(6)) == pytest.approx(24.0, rel=1e-14)

    def test_box(self, cube):
        h = [1, 1, 1, 1, 2, 2]
        assert polytope.surface_area(cube, h) == pytest.approx(40.0, rel=1e-14)

    def test_tetrahedron(self, tet):
        assert polytope.surface_area(tet, np.ones(4)) == pytest.approx(24 * R3, rel=1e-13)

    def test_matches_halfspace_oracle(self, fans):
        rng = np.random.default_rng(0)
        for fan in fans:
            r = polytope.estimate_valid_radius(fan)
            for _ in range(5):
                h = 1 + 0.5 * r * rng.uniform(-1, 1, fan.n)
                assert polytope.surface_area(fan, h) == pytest.approx(hull_area(fan.normals, h), rel=1e-9)

    def test_outside_cell(self):
        # cube with one corner cut off; the cut disappears once its support passes sqrt(3)
        fan = polytope.build_fan(np.vstack([polytope.cube_normals(), np.ones(3) / R3]))
        assert polytope.combinatorics_ok(fan, np.ones(7))
        h = np.r_[np.ones(6), 1.8]
        assert not polytope.combinatorics_ok(fan, h)
        with pytest.raises(DomainError):
            polytope.surface_area(fan, h)

    def test_data(self, cube):
        data = polytope.support_polytope(cube, np.ones(6))
        assert data.vertices.shape == (8, 3)
        np.testing.assert_allclose(np.abs(data.vertices), 1.0, atol=1e-15)
        np.testing.assert_allclose(data.facet_areas, 4.0, rtol=1e-14)


class TestQuermassMatrix:
    def test_cube_matches_box_formula(self, cube):
        m = polytope.quermass_matrix(cube).M
        expected = np.full((6, 6), 1 / 3)
        for c in range(3):
            expected[2 * c:2 * c + 2, 2 * c:2 * c + 2] = 0
        np.testing.assert_allclose(m, expected, atol=1e-14)

    def test_cube_quadratic_exact(self, cube):
        m = polytope.quermass_matrix(cube).M
        rng = np.random.default_rng(1)
        for _ in range(20):
            h = rng.uniform(0.2, 3, 6)
            assert h @ m @ h == pytest.approx(box_area(h) / 3, rel=1e-13)

    def test_in_radius_identity(self, fans):
        rng = np.random.default_rng(3)
        for fan in fans:
            form = polytope.quermass_matrix(fan)
            for _ in range(5):
                h = 1 + 0.5 * form.valid_radius * rng.uniform(-1, 1, fan.n)
                assert h @ form.M @ h == pytest.approx(hull_area(fan.normals, h) / 3, rel=1e-9)

    def test_w1_of_one(self, fans, tet):
        for fan in fans + [tet]:
            m = polytope.quermass_matrix(fan).M
            one = np.ones(fan.n)
            assert one @ m @ one == pytest.approx(polytope.surface_area(fan, one) / 3, rel=1e-12)

    def test_translation_kernel(self, fans, cube):
        for fan in fans + [cube]:
            m = polytope.quermass_matrix(fan).M
            for t in polytope.translation_vectors(fan):
                assert np.linalg.norm(m @ t) <= 1e-10 * np.linalg.norm(m, 2)

    def test_symmetric_and_sparse(self, fans):
        for fan in fans:
            m = polytope.quermass_matrix(fan).M
            assert np.array_equal(m, m.T)
            adj = set(fan.facet_adjacency)
            for i in range(fan.n):
                for j in range(i + 1, fan.n):
                    if (i, j) not in adj:
                        assert abs(m[i, j]) <= 1e-12 * np.abs(m).max()
                    else:
                        assert m[i, j] > 0


class TestVerify:
    def test_cube(self, cube):
        rep = polytope.verify_hyperplane_form(polytope.quermass_matrix(cube))
        assert rep.holds
        assert rep.signature.as_tuple() == (1, 3, 2) == rep.expected_signature
        assert rep.w1_of_one == pytest.approx(8.0, rel=1e-13)
        assert rep.surface_area_of_one == pytest.approx(24.0)
        assert rep.restricted_zero_count == 3
        assert rep.adjacent_offdiag_positive

    def test_tetrahedron(self, tet):
        rep = polytope.verify_hyperplane_form(polytope.quermass_matrix(tet))
        assert rep.holds
        assert rep.signature.as_tuple() == (1, 3, 0)

    def test_random(self, fans):
        for k, fan in enumerate(fans):
            rep = polytope.verify_hyperplane_form(polytope.quermass_matrix(fan), samples=300, seed=k)
            assert rep.holds and rep.signature_matches
            assert rep.kernel_angle <= 1e-8
            assert rep.sampled_max <= rep.tolerance

    def test_detects_non_form(self, cube):
        form = polytope.quermass_matrix(cube)
        bad = polytope.QuermassForm(-form.M + 2 * np.eye(6), cube, form.valid_radius, form.step)
        assert not polytope.verify_hyperplane_form(bad, samples=50).holds


def test_signature_helper_agrees(cube):
    m = polytope.quermass_matrix(cube).M
    assert spectral.signature(m).as_tuple() == (1, 3, 2)
