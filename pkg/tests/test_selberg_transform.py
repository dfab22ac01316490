import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from automorphic.errors import DivergenceError, DomainError, PoleError
from automorphic.selberg_transform import (QuadratureConfig, RadialKernel, TestFunction, eval_test,
                                           forward_transform, h_transform, h_values, inverse_transform,
                                           series_identity_G, series_identity_G_tilde, shift_factor,
                                           shift_identity)
from automorphic.special_functions import a_coeff
from oracles import values as V


class TestFamilies:
    @pytest.mark.parametrize("args, expected", V.PLAIN_G_S_BETA)
    def test_g_s_beta(self, args, expected):
        s, beta, u = args
        np.testing.assert_allclose(complex(TestFunction.g_s_beta(s, beta)(u)), expected, rtol=1e-13)

    @pytest.mark.parametrize("args, expected", V.G_S_BETA)
    def test_G_s_beta(self, args, expected):
        s, beta, u = args
        np.testing.assert_allclose(complex(TestFunction.G_s_beta(s, beta)(u)), expected, rtol=1e-12)

    @pytest.mark.parametrize("args, expected", V.G_TILDE)
    def test_G_tilde(self, args, expected):
        nu, beta, u = args
        np.testing.assert_allclose(complex(TestFunction.G_tilde(nu, beta)(u)), expected, rtol=1e-12)

    @pytest.mark.parametrize("args, expected", V.G_ELL)
    def test_g_ell(self, args, expected):
        s, u = args
        np.testing.assert_allclose(complex(TestFunction.g_ell(s)(u)), expected, rtol=1e-12)

    def test_g_ell_is_G_s_0(self):
        u = np.linspace(0.05, 6.0, 40)
        a = TestFunction.g_ell(2.3)(u)
        b = TestFunction.G_s_beta(2.3, 0.0)(u)
        np.testing.assert_allclose(a, b, rtol=1e-12)

    def test_g_s_closed_form(self):
        s, u = 2.0, 0.8
        expected = math.sqrt(2 * math.pi) * math.gamma(1.5) / math.gamma(2.0) * math.cosh(u) ** -1.5
        np.testing.assert_allclose(complex(TestFunction.g_s(s)(u)), expected, rtol=1e-14)

    def test_domain(self):
        with pytest.raises(DomainError):
            TestFunction.g_s(0.5)
        with pytest.raises(DomainError):
            TestFunction.g_ell(2.0)(0.0)
        with pytest.raises(DomainError):
            eval_test("nope", {}, 1.0)
        with pytest.raises(DomainError):
            TestFunction.g_s(2.0)(-1.0)

    def test_sum_and_scale(self):
        f = TestFunction.g_s(2.0) + TestFunction.g_s(3.0).scaled(2.0)
        u = np.array([0.0, 0.5, 3.0])
        np.testing.assert_allclose(f(u), TestFunction.g_s(2.0)(u) + 2.0 * TestFunction.g_s(3.0)(u), rtol=1e-15)
        assert f.decay == 1.5


class TestCosineTransform:
    @pytest.mark.parametrize("args, expected", V.A_COEFF)
    def test_g_s_against_a(self, args, expected):
        s, r = args
        h = h_transform(TestFunction.g_s(s), r)
        assert abs(h - expected) / abs(expected) < 1e-8

    def test_even_in_r(self):
        g = TestFunction.g_s_beta(2.5, 2.0)
        np.testing.assert_allclose(h_transform(g, 1.3), h_transform(g, -1.3), rtol=1e-15)

    def test_imaginary_r_limit(self):
        g = TestFunction.g_s(2.0)
        with pytest.raises(DivergenceError):
            h_values(g, [2.0j])
        np.testing.assert_allclose(h_transform(g, 0.25j), a_coeff(0.25, 2.0), rtol=1e-8)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(1.2, 5.0), st.floats(0.0, 8.0))
    def test_random_against_a(self, s, r):
        h = h_transform(TestFunction.g_s(s), r)
        ref = complex(a_coeff(0.5 + 1j * r, s))
        assert abs(h - ref) <= 1e-8 * abs(ref) + 1e-13


class TestForward:
    def test_cosh_power(self):
        s, r = 2.5, 1.1
        Q, g, h = forward_transform(RadialKernel.cosh_power(s), r)
        u = np.array([0.0, 0.4, 2.0])
        np.testing.assert_allclose(g(u), TestFunction.g_s(s)(u), rtol=1e-10)
        np.testing.assert_allclose(h, a_coeff(0.5 + 1j * r, s), rtol=1e-8)

    def test_sinh_power_guard(self):
        with pytest.raises(DivergenceError):
            forward_transform(RadialKernel.sinh_power(2.5))
        Q, g, h = forward_transform(RadialKernel.sinh_power(1.5))
        assert np.isfinite(h)
        np.testing.assert_allclose(g(np.array([0.9])), TestFunction.g_ell(1.5)(np.array([0.9])), rtol=1e-8)

    def test_custom_kernel(self):
        # k = e^{-u}: Q(v) = sqrt(pi) e^{-v}
        k = RadialKernel.custom(lambda u: np.exp(-u), 0.0, 50.0)
        Q, g, h = forward_transform(k, 0.0)
        v = np.array([0.0, 0.5, 2.0])
        np.testing.assert_allclose(Q(v), math.sqrt(math.pi) * np.exp(-v), rtol=1e-10)


class TestInverse:
    def test_recovers_cosh_power(self):
        s = 3.0
        u = np.array([0.1, 0.5, 1.5])
        h = lambda r: a_coeff(0.5 + 1j * np.asarray(r), s)
        g, Q, k = inverse_transform(h, u, r_max=60.0)
        np.testing.assert_allclose(g, TestFunction.g_s(s)(u), rtol=1e-8)
        np.testing.assert_allclose(k, (1 + 2 * u) ** -s, rtol=1e-6)


class TestSeries:
    @pytest.mark.parametrize("u", [0.0, 0.5, 1.0, 2.0])
    def test_G(self, u):
        res = series_identity_G(2.2, 3.0, u)
        assert res.residual < 1e-10

    @pytest.mark.parametrize("u", [0.0, 0.5, 1.0, 2.0])
    def test_G_tilde(self, u):
        res = series_identity_G_tilde(2.2, 3.0, u)
        assert res.residual < 1e-10

    def test_G_tilde_shifted_differs(self):
        res = series_identity_G_tilde(2.2, 3.0, 1.0, shifted=True)
        assert res.residual > 1e-3

    def test_fixed_kmax_tail(self):
        res = series_identity_G(2.2, 3.0, 0.5, kmax=5)
        assert res.residual > 0
        assert res.terms == 6

    def test_domain(self):
        with pytest.raises(DomainError):
            series_identity_G(2.2, 0.0, 0.5)


class TestShift:
    @pytest.mark.parametrize("s", [1.5, 2.7])
    @pytest.mark.parametrize("n", [1, 2])
    @pytest.mark.parametrize("r", [0.0, 1.3, 0.25j])
    def test_identity(self, s, n, r):
        assert shift_identity(r, s, n).residual < 1e-10

    def test_quadrature_variant(self):
        assert shift_identity(1.3, 2.7, 1, quadrature=True).residual < 1e-8

    def test_factor_trivial(self):
        assert shift_factor(0.7, 2.0, 0) == 1

    def test_pole(self):
        # s/2 - 1/4 - ir/2 = 0 at r = -i (s - 1/2)
        with pytest.raises(PoleError):
            shift_factor(-1.0j, 1.5, 1)


class TestConfig:
    def test_rejects_bad_tolerance(self):
        with pytest.raises(DomainError):
            QuadratureConfig(abs_tol=0.0)
