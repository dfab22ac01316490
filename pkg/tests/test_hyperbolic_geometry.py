import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from automorphic.errors import DomainError
from automorphic.hyperbolic_geometry import (IMAG_AXIS, GeodesicLine, MoebiusReal, UhpPoint, apply, cosh_dist,
                                             cylindrical, dist, dist_to_line, geodesic_nodes, horocycle_nodes,
                                             integrate_geodesic, integrate_horocycle, laplacian_fd, polar,
                                             u_invariant)
from automorphic.modular_group import GroupElement

xs = st.floats(-5, 5)
ys = st.floats(0.05, 8)
points = st.builds(complex, xs, ys)
ints = st.integers(-6, 6)


@st.composite
def sl2z(draw):
    """Random word in S and T."""
    g = GroupElement(1, 0, 0, 1)
    for _ in range(draw(st.integers(0, 6))):
        g = g @ GroupElement(1, draw(ints), 0, 1) @ GroupElement(0, -1, 1, 0)
    return g


class TestInvariant:
    def test_examples(self):
        assert u_invariant(1j, 1j) == 0
        np.testing.assert_allclose(u_invariant(1j, 2j), 1 / 8)
        np.testing.assert_allclose(u_invariant(1 + 1j, 1j), 1 / 4)

    def test_distance_examples(self):
        np.testing.assert_allclose(dist(1j, math.e * 1j), 1.0, rtol=1e-15)
        np.testing.assert_allclose(dist(1j, 2j), math.log(2.0), rtol=1e-15)
        S = MoebiusReal(0, -1, 1, 0)
        np.testing.assert_allclose(dist(S.apply(1 + 1j), S.apply(2j)), dist(1 + 1j, 2j), rtol=1e-14)

    def test_small_distance_stable(self):
        z = 0.3 + 1.1j
        np.testing.assert_allclose(dist(z, z + 1e-9j), 1e-9 / 1.1, rtol=1e-6)

    def test_rejects_lower_half_plane(self):
        with pytest.raises(DomainError):
            UhpPoint(0.0, -1.0)
        with pytest.raises(DomainError):
            dist(1j, -1j)

    @settings(max_examples=200, deadline=None)
    @given(points, points)
    def test_roundtrip_and_symmetry(self, z, w):
        u = u_invariant(z, w)
        np.testing.assert_allclose(u, (cosh_dist(z, w) - 1) / 2, rtol=1e-12, atol=1e-15)
        np.testing.assert_allclose(u, u_invariant(w, z), rtol=1e-14)
        assert u >= 0

    @settings(max_examples=200, deadline=None)
    @given(points, points, points)
    def test_triangle_inequality(self, z, w, v):
        assert dist(z, v) <= dist(z, w) + dist(w, v) + 1e-10

    @settings(max_examples=200, deadline=None)
    @given(sl2z(), st.builds(complex, st.floats(-2, 2), st.floats(0.3, 3)),
           st.builds(complex, st.floats(-2, 2), st.floats(0.3, 3)))
    def test_group_invariance(self, g, z, w):
        m = g.as_moebius()
        # roundoff grows with the entry size of g
        tol = 1e-14 * (1 + m.a ** 2 + m.b ** 2 + m.c ** 2 + m.d ** 2)
        assert abs(dist(apply(m, z), apply(m, w)) - dist(z, w)) < max(tol, 1e-12)


class TestMoebius:
    def test_apply_examples(self):
        np.testing.assert_allclose(MoebiusReal.identity().apply(1 + 2j), 1 + 2j)
        np.testing.assert_allclose(MoebiusReal(1, 1, 0, 1).apply(1j), 1 + 1j)
        np.testing.assert_allclose(MoebiusReal(0, -1, 1, 0).apply(1j), 1j)

    def test_degenerate(self):
        with pytest.raises(DomainError):
            MoebiusReal(1, 1, 1, 1)

    def test_sign_identification(self):
        assert MoebiusReal(2, 1, 1, 1) == MoebiusReal(-2, -1, -1, -1)

    @settings(max_examples=100, deadline=None)
    @given(points, st.floats(-3, 3), st.floats(0.2, 5))
    def test_image_height(self, z, b, k):
        m = MoebiusReal.normalized(k + 0.3 * b, b, 0.3, 1.0)
        w = m.apply(z)
        np.testing.assert_allclose(w.imag, z.imag / abs(m.c * z + m.d) ** 2, rtol=1e-12)


class TestLines:
    def test_examples(self):
        assert dist_to_line(3j) == 0
        np.testing.assert_allclose(dist_to_line(1 + 1j), math.acosh(math.sqrt(2)), rtol=1e-14)

    def test_beardon_example(self):
        z, rho = 1 + 2j, 0.7
        lhs = cosh_dist(z, 1j * math.exp(rho))
        rhs = math.cosh(rho - math.log(abs(z))) * math.cosh(dist_to_line(z))
        assert abs(lhs - rhs) < 1e-12

    @settings(max_examples=200, deadline=None)
    @given(points, st.floats(-4, 4))
    def test_beardon_random(self, z, rho):
        lhs = cosh_dist(z, 1j * math.exp(rho))
        rhs = math.cosh(rho - math.log(abs(z))) * math.cosh(dist_to_line(z))
        np.testing.assert_allclose(lhs, rhs, rtol=1e-10)

    @settings(max_examples=100, deadline=None)
    @given(points, st.floats(-4, 4))
    def test_lower_bound(self, z, rho):
        assert dist_to_line(z) <= dist(z, 1j * math.exp(rho)) + 1e-12

    def test_conjugated_line(self):
        m = MoebiusReal.normalized(2.0, 1.0, 1.0, 1.0)
        line = GeodesicLine(m)
        z = 0.4 + 0.9j
        np.testing.assert_allclose(dist_to_line(m.apply(z), line), dist_to_line(z), rtol=1e-12)
        pts = line.point(np.linspace(-1, 1, 5))
        np.testing.assert_allclose(dist_to_line(pts, line), 0.0, atol=1e-7)


class TestCoordinates:
    def test_polar(self):
        p = polar(2j)
        np.testing.assert_allclose(p.rho, math.log(2))
        np.testing.assert_allclose(p.theta, math.pi / 2)
        c = polar(1j)
        assert c.rho == 0 and c.theta is None

    def test_sinh_rho(self):
        z = 1 + 2j
        # sinh rho = 2 sqrt(u (1 + u)) from the invariant
        u = u_invariant(1j, z)
        np.testing.assert_allclose(math.sinh(polar(z).rho), 2 * math.sqrt(u * (1 + u)), rtol=1e-13)

    def test_cylindrical(self):
        r, theta = cylindrical(1 + 1j)
        np.testing.assert_allclose(r, 0.5 * math.log(2))
        # sin(theta) cosh d(z, axis) = 1
        np.testing.assert_allclose(math.sin(theta) * math.cosh(dist_to_line(1 + 1j)), 1.0, rtol=1e-14)


class TestQuadrature:
    def test_geodesic_weights(self):
        nodes = geodesic_nodes(IMAG_AXIS, 1.0, 2)
        assert len(nodes) == 2
        np.testing.assert_allclose(sum(w for _, w in nodes), 1.0, rtol=1e-14)
        for p, _ in nodes:
            assert p.x == 0 and 1.0 < p.y < math.e

    def test_geodesic_constant(self):
        val, err = integrate_geodesic(lambda z: np.ones(z.shape), IMAG_AXIS, 1.0)
        np.testing.assert_allclose(val, 1.0, rtol=1e-14)

    def test_geodesic_closed_form(self):
        ell, c = 2.5, 0.8
        f = lambda z: np.cosh(np.log(np.abs(z)) - c) ** -2.0
        val, _ = integrate_geodesic(f, IMAG_AXIS, ell)
        np.testing.assert_allclose(val, math.tanh(ell - c) - math.tanh(-c), rtol=1e-12)

    @pytest.mark.parametrize("a, n", [(0.5, 1), (10.0, 7), (3.0, 64)])
    def test_horocycle_weights(self, a, n):
        nodes = horocycle_nodes(a, n)
        np.testing.assert_allclose(sum(w for _, w in nodes), 1.0, rtol=1e-14)
        assert all(p.y == a and 0 <= p.x <= 1 for p, _ in nodes)

    def test_horocycle_periodic(self):
        val, _ = integrate_horocycle(lambda z: np.cos(2 * np.pi * z.real) ** 2, 2.0)
        np.testing.assert_allclose(val, 0.5, rtol=1e-13)


class TestLaplacian:
    def test_eigenfunction(self):
        s = 1.7
        f = lambda z: np.imag(z) ** s
        lap, val = laplacian_fd(f, 0.3 + 1.4j, h=1e-3)
        np.testing.assert_allclose(lap, s * (1 - s) * val, rtol=1e-6)
