import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from automorphic.errors import DomainError, SingularityError, TruncationError
from automorphic.kernels import (TruncationBudget, automorphic_K, automorphic_K_series, greens_function,
                                 heat_kernel_M, heat_kernel_plane, heat_profile, hypergeom_kernel,
                                 orbit_cosh_distances, poisson_kernel, poisson_scalar)
from automorphic.modular_group import GroupElement, S
from automorphic.special_functions import legendre_q
from oracles import values as V
from oracles.forms import definite_orbit

RHO = complex(0.5, math.sqrt(3) / 2)
# compact region near the fundamental domain keeps the enumerated balls small
near = st.builds(complex, st.floats(-0.5, 0.5), st.floats(0.9, 2.0))
short_words = st.lists(st.integers(-2, 2), min_size=0, max_size=2)
EXACT = TruncationBudget(group_bound=20.0, complete_tail=False)


def word(ns):
    g = GroupElement(1, 0, 0, 1)
    for n in ns:
        g = g @ GroupElement(1, n, 0, 1) @ S
    return g


class TestBudget:
    def test_validation(self):
        with pytest.raises(DomainError):
            TruncationBudget(group_bound=0.5)
        with pytest.raises(DomainError):
            TruncationBudget(tail_policy="fail_if_above")
        with pytest.raises(DomainError):
            TruncationBudget(tail_policy="other")

    def test_fail_if_above(self):
        bud = TruncationBudget(group_bound=5.0, tail_policy="fail_if_above", tail_tol=1e-12)
        with pytest.raises(TruncationError):
            automorphic_K(2j, 1 + 1j, 2.0, bud)


class TestFormsOracle:
    @pytest.mark.parametrize("z", [2j, 0.3 + 1.2j, -0.45 + 0.95j])
    def test_orbit_of_i(self, z):
        R = math.acosh(40.0)
        X = orbit_cosh_distances(z, 1 + 1j, R)
        ref = np.repeat(definite_orbit(z, -4, 40.0), 2)
        np.testing.assert_allclose(X, ref, rtol=1e-12)

    @pytest.mark.parametrize("z", [2j, 0.3 + 1.2j])
    def test_orbit_of_rho(self, z):
        R = math.acosh(40.0)
        X = orbit_cosh_distances(z, RHO, R)
        ref = np.repeat(definite_orbit(z, -3, 40.0), 3)
        np.testing.assert_allclose(X, ref, rtol=1e-12)

    def test_K_s(self):
        z, s = 2j, 2.5
        kv = automorphic_K(z, 1j, s, EXACT)
        ref = 2.0 * np.sum(definite_orbit(z, -4, 200.0) ** -s)
        np.testing.assert_allclose(kv.value, ref, rtol=1e-12)

    def test_G_s(self):
        z, s = 2j, 2.0
        kv = greens_function(z, 1j, s, EXACT)
        X = definite_orbit(z, -4, 200.0)
        ref = 2.0 * np.sum(legendre_q(s - 1.0, X).real) / (2 * math.pi)
        np.testing.assert_allclose(kv.value, ref, rtol=1e-11)

    def test_completion_improves(self):
        z, s = 2j, 2.0
        ref = automorphic_K(z, 1j, s, TruncationBudget(group_bound=400.0)).value
        raw = automorphic_K(z, 1j, s, TruncationBudget(group_bound=40.0, complete_tail=False)).value
        done = automorphic_K(z, 1j, s, TruncationBudget(group_bound=40.0))
        assert abs(done.value - ref) < 0.1 * abs(raw - ref)
        assert abs(done.value - ref) < 5 * done.tail_estimate


class TestGroupSums:
    def test_K_series_matches_single(self):
        vals = automorphic_K_series(2j, 1 + 1j, [2.0, 3.0])
        np.testing.assert_allclose(vals[1].value, automorphic_K(2j, 1 + 1j, 3.0).value, rtol=1e-14)

    def test_domain(self):
        with pytest.raises(DomainError):
            automorphic_K(2j, 1j, 1.0)
        with pytest.raises(SingularityError):
            greens_function(1j, 1 + 1j, 2.0)

    def test_hypergeom_modes(self):
        bud = TruncationBudget(group_bound=60.0, series_kmax=60)
        a = hypergeom_kernel(2j, 1 + 1j, 2.5, bud, mode="direct")
        b = hypergeom_kernel(2j, 1 + 1j, 2.5, bud, mode="series")
        np.testing.assert_allclose(a.value, b.value, rtol=1e-8)

    @settings(max_examples=100, deadline=None)
    @given(near, near)
    def test_K_symmetric_positive(self, z, w):
        a = automorphic_K(z, w, 2.5, EXACT).value
        b = automorphic_K(w, z, 2.5, EXACT).value
        assert a.real > 0
        np.testing.assert_allclose(a, b, rtol=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(near, near, short_words)
    def test_K_invariant(self, z, w, ns):
        g = word(ns)
        a = automorphic_K(z, w, 2.5, EXACT).value
        b = automorphic_K(complex(g.apply(z)), w, 2.5, EXACT).value
        c = automorphic_K(z, complex(g.apply(w)), 2.5, EXACT).value
        np.testing.assert_allclose(b, a, rtol=1e-10)
        np.testing.assert_allclose(c, a, rtol=1e-10)

    @settings(max_examples=100, deadline=None)
    @given(near, near, short_words)
    def test_G_symmetric_invariant_positive(self, z, w, ns):
        if abs(z - w) < 1e-3:
            return
        try:
            a = greens_function(z, w, 2.0, EXACT).value
        except SingularityError:
            return
        g = word(ns)
        b = greens_function(w, complex(g.apply(z)), 2.0, EXACT).value
        assert a.real > 0
        np.testing.assert_allclose(b, a, rtol=1e-9)


class TestHeat:
    @pytest.mark.parametrize("args, expected", V.HEAT_PLANE)
    def test_plane_oracle(self, args, expected):
        rho, t = args
        val = heat_kernel_plane(1j, 1j * math.exp(rho), t)
        assert abs(val - expected) < 1e-9

    def test_profile_matches_plane(self):
        prof = heat_profile(1.0, 6.0)
        for rho in (0.0, 1.0, 4.0):
            np.testing.assert_allclose(prof(np.array([rho]))[0].real,
                                       heat_kernel_plane(1j, 1j * math.exp(rho), 1.0), rtol=1e-8, atol=1e-14)

    def test_mass(self):
        prof = heat_profile(1.0, 14.0)
        mass = 2 * math.pi * prof.table.integral(np.sinh)
        assert abs(mass - 1.0) < 1e-4

    def test_domain(self):
        with pytest.raises(DomainError):
            heat_kernel_plane(1j, 2j, 0.0)

    @settings(max_examples=100, deadline=None)
    @given(near, near, short_words)
    def test_M_invariants(self, z, w, ns):
        bud = TruncationBudget(group_bound=8.0)
        a = heat_kernel_M(z, w, 1.0, bud).value
        b = heat_kernel_M(w, complex(word(ns).apply(z)), 1.0, bud).value
        assert a.real > 0
        np.testing.assert_allclose(b, a, rtol=1e-9)


class TestPoisson:
    def test_scalar(self):
        val = poisson_scalar(2.0, 1.3, 0.25)[0]
        assert abs(val - math.exp(-1.3 * 1.5)) < 1e-9

    @settings(max_examples=100, deadline=None)
    @given(st.floats(0.0, 30.0), st.floats(0.2, 5.0), st.floats(0.0, 3.0))
    def test_scalar_random(self, lam, u, Z):
        val = poisson_scalar(lam, u, Z)[0]
        assert abs(val - math.exp(-u * math.sqrt(lam + Z))) < 1e-9

    def test_floors(self):
        poisson_kernel(1j, 2j, 1.0, -0.2, on="plane")
        with pytest.raises(DomainError):
            poisson_kernel(1j, 2j, 1.0, -0.3, on="plane")
        with pytest.raises(DomainError):
            poisson_kernel(1j, 2j, 1.0, -0.1, on="surface")
        with pytest.raises(DomainError):
            poisson_kernel(1j, 2j, -1.0)

    def test_surface_positive_symmetric(self):
        bud = TruncationBudget(group_bound=8.0)
        a = poisson_kernel(2j, 0.3 + 1.1j, 1.0, 0.5, on="surface", budget=bud).value
        b = poisson_kernel(0.3 + 1.1j, 2j, 1.0, 0.5, on="surface", budget=bud).value
        assert a.real > 0
        np.testing.assert_allclose(a, b, rtol=1e-10)
