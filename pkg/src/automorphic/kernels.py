"""Automorphic kernels on the modular surface, computed as truncated group sums.

Truncation semantics: a budget with Frobenius bound B sums over all
eta in PSL(2, Z) with d(z, eta w) <= R, R = arccosh(B^2/2).  This set is
independent of the representatives of z and w, so truncated kernels are
symmetric and Gamma-invariant up to rounding.  With ``complete_tail`` the
omitted terms are replaced by their main-term estimate from the orbit count
#{eta : d(z, eta w) <= R} ~ 6 (cosh R - 1), and ``tail_estimate`` is the
change of the completed sum when R is lowered by log 2 and 2 log 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from ._numerics import ChebyshevTable, gauss_legendre, graded_breaks, panel_rule, power_tail, uniform_breaks
from .errors import DomainError, SingularityError, TruncationError
from .hyperbolic_geometry import as_complex, dist
from .modular_group import ball_for_radius, radius_of_bound
from .selberg_transform import (DEFAULT_CONFIG, QuadratureConfig, TestFunction, h_values, kernel_profile)
from .special_functions import b_coeff, c_coeff, legendre_p_conical, legendre_q

__all__ = [
    "TruncationBudget",
    "KernelValue",
    "HeatConfig",
    "orbit_cosh_distances",
    "orbit_cosh_distances_many",
    "automorphic_K",
    "automorphic_K_series",
    "heat_kernel_plane",
    "heat_kernel_M",
    "heat_profile",
    "poisson_scalar",
    "poisson_kernel",
    "greens_function",
    "hypergeom_kernel",
    "wave_action",
    "greens_contour",
    "ContourResult",
    "contour_partial_integrals",
    "radial_group_sum",
]


@dataclass(frozen=True)
class TruncationBudget:
    """Group-sum truncation.

    ``tail_policy`` is "estimate_and_report" or "fail_if_above"; the latter
    raises TruncationError when the tail estimate exceeds ``tail_tol``.
    """

    group_bound: float = 60.0
    series_kmax: int = 60
    tail_policy: str = "estimate_and_report"
    tail_tol: Optional[float] = None
    complete_tail: bool = True

    def __post_init__(self):
        if self.group_bound < 1:
            raise DomainError("group_bound must be >= 1")
        if self.series_kmax < 0:
            raise DomainError("series_kmax must be >= 0")
        if self.tail_policy not in ("estimate_and_report", "fail_if_above"):
            raise DomainError(f"unknown tail policy {self.tail_policy!r}")
        if self.tail_policy == "fail_if_above" and (self.tail_tol is None or self.tail_tol <= 0):
            raise DomainError("fail_if_above needs a positive tail_tol")

    @property
    def radius(self) -> float:
        return radius_of_bound(self.group_bound)

    def check(self, tail: float, what: str):
        if self.tail_policy == "fail_if_above" and tail > self.tail_tol:
            raise TruncationError(f"{what}: tail estimate {tail:.3e} exceeds {self.tail_tol:.3e}")


@dataclass(frozen=True)
class KernelValue:
    value: complex
    tail_estimate: float
    terms_used: int

    def __post_init__(self):
        if not self.tail_estimate >= 0:
            raise DomainError("tail_estimate must be >= 0")


# ---------------------------------------------------------------------------
# Orbit distances and generic radial sums
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _orbit_cached(z: complex, w: complex, radius: float) -> np.ndarray:
    ball = ball_for_radius(radius + float(dist(1j, z)) + float(dist(1j, w)))
    den = ball.c * w + ball.d
    ew = (ball.a * w + ball.b) / den
    dz = z - ew
    u = (dz.real ** 2 + dz.imag ** 2) / (4.0 * z.imag * ew.imag)
    X = 1.0 + 2.0 * u
    X = np.sort(X[X <= math.cosh(radius)])
    X.setflags(write=False)
    return X


def orbit_cosh_distances(z, w, radius: float) -> np.ndarray:
    """Sorted cosh d(z, eta w) over all eta with d(z, eta w) <= radius."""
    return _orbit_cached(complex(as_complex(z)), complex(as_complex(w)), float(radius))


def orbit_cosh_distances_many(z, ws, radius: float) -> list[np.ndarray]:
    """orbit_cosh_distances(z, w, radius) for several w from one shared ball."""
    zc = complex(as_complex(z))
    wc = np.asarray([complex(as_complex(w)) for w in ws])
    ball = ball_for_radius(radius + float(dist(1j, zc)) + float(np.max(dist(1j, wc))))
    top = math.cosh(radius)
    out = []
    for w in wc:
        ew = (ball.a * w + ball.b) / (ball.c * w + ball.d)
        dz = zc - ew
        X = 1.0 + 2.0 * (dz.real ** 2 + dz.imag ** 2) / (4.0 * zc.imag * ew.imag)
        out.append(np.sort(X[X <= top]))
    return out


def radial_group_sum(X: np.ndarray, f: Callable[[np.ndarray], np.ndarray], radius: float,
                     completion: Optional[Callable[[float], complex]], budget: TruncationBudget,
                     what: str = "group sum") -> KernelValue:
    """Sum f over sorted cosh distances X with optional tail completion.

    ``completion(R)`` estimates the contribution of distances beyond R.
    """
    vals = np.asarray(f(X))
    csum = np.cumsum(vals) if vals.size else np.zeros(1)
    total = complex(csum[-1]) if vals.size else 0.0

    def partial(rr):
        n = int(np.searchsorted(X, math.cosh(rr), side="right"))
        return complex(csum[n - 1]) if n > 0 else 0.0

    if completion is not None and budget.complete_tail:
        value = total + complex(completion(radius))
        tail = 0.0
        for j in (1, 2):
            rj = radius - j * math.log(2.0)
            if rj > 0:
                tail = max(tail, abs(value - (partial(rj) + complex(completion(rj)))))
    else:
        value = total
        tail = abs(complex(completion(radius))) if completion is not None else 0.0
    budget.check(tail, what)
    return KernelValue(value, float(tail), int(vals.size))


def _check_re(s: complex, bound: float, name: str):
    if complex(s).real <= bound:
        raise DomainError(f"{name} needs Re > {bound:g}, got {s}")


def _orbit(z, w, budget: TruncationBudget, singular: bool = False):
    R = budget.radius
    X = orbit_cosh_distances(z, w, R)
    if singular and X.size and X[0] - 1.0 < 1e-12:
        raise SingularityError("z lies in the Gamma-orbit of w (logarithmic singularity)")
    return X, R


# ---------------------------------------------------------------------------
# K_s and its k-series relatives
# ---------------------------------------------------------------------------

def _power_completion(s: complex):
    return lambda R: 6.0 * math.cosh(R) ** (1.0 - s) / (s - 1.0)


def automorphic_K(z, w, s: complex, budget: TruncationBudget = TruncationBudget()) -> KernelValue:
    """K_s(z, w) = sum over eta of cosh(d(z, eta w))^{-s}."""
    s = complex(s)
    _check_re(s, 1.0, "automorphic_K")
    X, R = _orbit(z, w, budget)
    return radial_group_sum(X, lambda x: x ** (-s), R, _power_completion(s), budget, "K_s")


def automorphic_K_series(z, w, s_values, budget: TruncationBudget = TruncationBudget()) -> list[KernelValue]:
    """K_{s_j}(z, w) for several s over one shared orbit set."""
    X, R = _orbit(z, w, budget)
    out = []
    for s in s_values:
        s = complex(s)
        _check_re(s, 1.0, "automorphic_K")
        out.append(radial_group_sum(X, lambda x, s=s: x ** (-s), R, _power_completion(s), budget, "K_s"))
    return out


# ---------------------------------------------------------------------------
# Heat kernels
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HeatConfig:
    """r-quadrature resolution for the heat and Poisson kernels."""

    order: int = 20
    gaussian_digits: float = 40.0


def _spectral_r_nodes(r_max: float, rho_max: float, order: int):
    # geometric grading from 1e-6 resolves r tanh(pi r) at the origin
    head = graded_breaks(0.0, min(1.0, r_max), levels=20, ratio=0.5)
    width = min(0.5, math.pi / max(1.0, rho_max) / 2.0)
    body = uniform_breaks(head[-1], r_max, width) if r_max > head[-1] else np.array([head[-1]])
    return panel_rule(np.concatenate([head[:-1], body]), order)


def _spectral_integral(weight: Callable[[np.ndarray], np.ndarray], rho: np.ndarray, r_max: float,
                       cfg: HeatConfig) -> np.ndarray:
    """(1/2 pi) int_0^r_max r tanh(pi r) weight(r) P_{-1/2+ir}(cosh rho) dr."""
    rho = np.atleast_1d(np.asarray(rho, dtype=float))
    r, wr = _spectral_r_nodes(r_max, float(np.max(rho)) if rho.size else 1.0, cfg.order)
    base = wr * r * np.tanh(math.pi * r) * weight(r) / (2.0 * math.pi)
    out = np.empty(rho.shape, dtype=complex)
    for i, rv in enumerate(rho):
        out[i] = np.sum(base * legendre_p_conical(r, math.cosh(rv)))
    return out


def _heat_r_max(t: float, cfg: HeatConfig) -> float:
    return math.sqrt(cfg.gaussian_digits * math.log(10.0) / t)


def heat_kernel_plane(z, w, t: float, cfg: HeatConfig = HeatConfig()) -> float:
    """K_H(z, w; t) = (1/2 pi) int_0^inf r tanh(pi r) e^{-(r^2+1/4)t} P_{-1/2+ir}(cosh d) dr."""
    if t <= 0:
        raise DomainError("heat kernel needs t > 0")
    rho = float(dist(z, w))
    val = _spectral_integral(lambda r: np.exp(-(r * r + 0.25) * t), np.array([rho]), _heat_r_max(t, cfg), cfg)
    return float(val[0].real)


@dataclass
class RadialProfile:
    """Chebyshev table of a radial kernel in the distance rho, with its mass beyond 0."""

    table: ChebyshevTable
    rho_max: float
    mass: complex

    def __call__(self, rho):
        return self.table(rho)

    def completion(self, R: float) -> complex:
        """6 int_R^inf k sinh, from the total mass to avoid far-field cancellation."""
        inner = self.table.integral(np.sinh, upto=R)
        return (3.0 / math.pi) * (self.mass - 2.0 * math.pi * inner)


def _mehler_profile_values(weight, rho: np.ndarray, r_max: float, rho_max: float, cfg: HeatConfig,
                           n_t: int = 64) -> np.ndarray:
    """Same integral as _spectral_integral with the Mehler form of P swapped
    inside: (sqrt 2/pi) int_0^rho F(t) / sqrt(cosh rho - cosh t) dt, where
    F(t) = (1/2 pi) int r tanh(pi r) weight(r) cos(r t) dr is tabulated once.
    """
    r, wr = _spectral_r_nodes(r_max, rho_max, cfg.order)
    base = wr * r * np.tanh(math.pi * r) * weight(r) / (2.0 * math.pi)

    def F_fn(t):
        out = np.empty(t.shape, dtype=complex)
        for i in range(0, t.size, 512):
            out[i:i + 512] = np.cos(np.outer(t[i:i + 512], r)) @ base
        return out

    F = ChebyshevTable(F_fn, 0.0, rho_max, max(4, int(math.ceil(rho_max / 0.125))), 20)
    x, wx = gauss_legendre(n_t)
    w = 0.5 * (x + 1.0)
    ww = 0.5 * wx
    out = np.empty(rho.shape, dtype=complex)
    for i, b in enumerate(rho):
        if b == 0.0:
            out[i] = F(np.array([0.0]))[0]
            continue
        t = b * (1.0 - w * w)
        denom = np.sqrt(2.0 * np.sinh(0.5 * (b + t)) * np.sinh(0.5 * b * w * w))
        out[i] = (math.sqrt(2.0) / math.pi) * np.sum(ww * 2.0 * b * w / denom * F(t))
    return out


def _profile_from_spectral(weight, r_max: float, rho_max: float, mass: complex, cfg: HeatConfig) -> RadialProfile:
    panels = max(4, int(math.ceil(rho_max / 0.25)))
    tab = ChebyshevTable(lambda rho: _mehler_profile_values(weight, rho, r_max, rho_max, cfg),
                         0.0, rho_max, panels, 16)
    return RadialProfile(tab, rho_max, mass)


@lru_cache(maxsize=16)
def heat_profile(t: float, rho_max: float, cfg: HeatConfig = HeatConfig()) -> RadialProfile:
    """Tabulated plane heat kernel in rho on [0, rho_max] (mass 1)."""
    if t <= 0:
        raise DomainError("heat kernel needs t > 0")
    return _profile_from_spectral(lambda r: np.exp(-(r * r + 0.25) * t), _heat_r_max(t, cfg), rho_max, 1.0, cfg)


def heat_kernel_M(z, w, t: float, budget: TruncationBudget = TruncationBudget(),
                  cfg: HeatConfig = HeatConfig()) -> KernelValue:
    """K_M(z, w; t) = sum over eta of K_H(z, eta w; t)."""
    if t <= 0:
        raise DomainError("heat kernel needs t > 0")
    R = budget.radius
    prof = heat_profile(float(t), float(R), cfg)
    X = orbit_cosh_distances(z, w, R)
    return radial_group_sum(X, lambda x: prof(np.arccosh(np.maximum(x, 1.0))).real, R,
                            lambda rr: prof.completion(rr).real, budget, "heat_M")


# ---------------------------------------------------------------------------
# Poisson kernels
# ---------------------------------------------------------------------------

def _check_poisson(u: complex, Z: complex, on: str):
    if u.real <= 0 or (u * u).real <= 0:
        raise DomainError("Poisson kernel needs Re u > 0 and Re u^2 > 0")
    floor = -0.25 if on == "plane" else 0.0
    if Z.real < floor:
        raise DomainError(f"Poisson kernel on the {on} needs Re Z >= {floor:g}")


def poisson_scalar(lam, u: complex, Z: complex = 0.0, n: int = 400) -> np.ndarray:
    """(u / sqrt(4 pi)) int_0^inf e^{-(lam+Z)t} e^{-u^2/4t} t^{-3/2} dt by t = e^tau.

    The closed form is e^{-u sqrt(lam + Z)} (principal branch).  ``lam`` may be
    an array.
    """
    u, Z = complex(u), complex(Z)
    lam = np.atleast_1d(np.asarray(lam, dtype=complex))
    m = lam + Z
    # window in tau: below lo the factor e^{-u^2/4t} is negligible, above hi
    # either e^{-m t} is or (m -> 0) the algebraic decay e^{-tau/2} is
    u2 = (u * u).real
    lo = math.log(u2 / 320.0)
    cap = math.log(u2 / 4.0) + 84.0
    hi = np.minimum(np.log(80.0 / np.maximum(m.real, 1e-300)), cap)
    x, wx = gauss_legendre(n)
    out = np.empty(lam.shape, dtype=complex)
    for i in range(lam.size):
        hi_i = max(float(hi[i]), lo + 8.0)
        tau = 0.5 * (hi_i - lo) * x + 0.5 * (hi_i + lo)
        wt = 0.5 * (hi_i - lo) * wx
        t = np.exp(tau)
        f = np.exp(-m[i] * t - u * u / (4.0 * t)) * t ** -0.5
        out[i] = u / math.sqrt(4.0 * math.pi) * np.sum(wt * f)
    return out


def _poisson_weight(u: complex, Z: complex):
    def weight(r):
        lam = r * r + 0.25
        return poisson_scalar(lam, u, Z)
    return weight


def _poisson_r_max(u: complex, Z: complex, digits: float) -> float:
    return digits * math.log(10.0) / u.real + 1.0


@lru_cache(maxsize=16)
def _poisson_profile(u: complex, Z: complex, rho_max: float, cfg: HeatConfig) -> RadialProfile:
    mass = np.exp(-u * np.sqrt(complex(Z)))
    return _profile_from_spectral(_poisson_weight(u, Z), _poisson_r_max(u, Z, 17.0), rho_max, complex(mass), cfg)


def poisson_kernel(z, w, u: complex, Z: complex = 0.0, on: str = "plane",
                   budget: TruncationBudget = TruncationBudget(), cfg: HeatConfig = HeatConfig()):
    """Translated Poisson kernel.

    ``on="plane"`` returns a complex value; ``on="surface"`` returns a
    KernelValue for the group sum over eta.
    """
    u, Z = complex(u), complex(Z)
    if on not in ("plane", "surface"):
        raise DomainError("on must be 'plane' or 'surface'")
    _check_poisson(u, Z, on)
    if on == "plane":
        rho = float(dist(z, w))
        val = _spectral_integral(_poisson_weight(u, Z), np.array([rho]), _poisson_r_max(u, Z, 17.0), cfg)
        return complex(val[0])
    R = budget.radius
    prof = _poisson_profile(u, Z, float(R), cfg)
    X = orbit_cosh_distances(z, w, R)
    return radial_group_sum(X, lambda x: prof(np.arccosh(np.maximum(x, 1.0))), R, prof.completion,
                            budget, "poisson_M")


# ---------------------------------------------------------------------------
# Green's function and the hypergeometric kernel
# ---------------------------------------------------------------------------

def _greens_terms(s: complex):
    return lambda X: legendre_q(s - 1.0, X) / (2.0 * math.pi)


def _greens_completion(s: complex):
    f = _greens_terms(s)
    return lambda R: 6.0 * power_tail(f, math.cosh(R), s.real)


def greens_function(z, w, s: complex, budget: TruncationBudget = TruncationBudget()) -> KernelValue:
    """G_s(z, w) = (1/2 pi) sum over eta of Q_{s-1}(1 + 2u(z, eta w))."""
    s = complex(s)
    _check_re(s, 1.0, "greens_function")
    X, R = _orbit(z, w, budget, singular=True)
    return radial_group_sum(X, _greens_terms(s), R, _greens_completion(s), budget, "G_s")


def _kappa_direct_terms(nu: np.ndarray, X: np.ndarray, kmax: int = 400, tol: float = 1e-17) -> np.ndarray:
    """Matrix 2^nu e^{-nu rho} F(nu, 1/2; nu + 1/2; e^{-2 rho}) for rho = arccosh X.

    Shape (len(nu), len(X)); the power series in q = e^{-2 rho} is contracted
    against a coefficient matrix.
    """
    nu = np.atleast_1d(np.asarray(nu, dtype=complex))
    rho = np.arccosh(np.maximum(X, 1.0))
    q = np.exp(-2.0 * rho)
    qmax = float(np.max(q)) if q.size else 0.0
    if qmax >= 1.0:
        raise SingularityError("hypergeometric kernel needs z not in the orbit of w")
    nterm = kmax
    if qmax > 0:
        nterm = min(kmax, max(2, int(math.ceil(math.log(tol) / math.log(qmax))) + 4))
    coef = np.ones((nu.size, nterm), dtype=complex)
    for k in range(1, nterm):
        coef[:, k] = coef[:, k - 1] * (nu + k - 1) * (k - 0.5) / ((nu + k - 0.5) * k)
    powers = q[None, :] ** np.arange(nterm)[:, None]  # (nterm, n)
    F = coef @ powers
    return np.exp(nu[:, None] * (math.log(2.0) - rho[None, :])) * F


def _kappa_completion(nu: complex, kmax: int = 200):
    def comp(R):
        XR = math.cosh(R)
        total = 0.0 + 0.0j
        for k in range(kmax):
            term = complex(b_coeff(nu, k)) / math.factorial(k) * 6.0 * XR ** (1.0 - nu - 2 * k) / (nu + 2 * k - 1.0)
            total += term
            if abs(term) < 1e-18 * max(1.0, abs(total)):
                break
        return total
    return comp


def hypergeom_kernel(z, w, nu: complex, budget: TruncationBudget = TruncationBudget(),
                     mode: str = "direct") -> KernelValue:
    """The kernel sum_k b_k(nu)/k! K_{nu+2k}(z, w).

    ``mode="direct"`` uses the single group sum of
    cosh^{-nu} F(nu/2, nu/2+1/2; nu+1/2; cosh^{-2}); ``mode="series"`` sums
    the k-series over K_{nu+2k} up to ``budget.series_kmax``.
    """
    nu = complex(nu)
    _check_re(nu, 1.0, "hypergeom_kernel")
    X, R = _orbit(z, w, budget, singular=True)
    if mode == "direct":
        return radial_group_sum(X, lambda x: _kappa_direct_terms(np.array([nu]), x)[0], R,
                                _kappa_completion(nu), budget, "kappa")
    if mode != "series":
        raise DomainError("mode must be 'direct' or 'series'")
    total, tail, n = 0.0 + 0.0j, 0.0, 0
    for k in range(budget.series_kmax + 1):
        c = complex(b_coeff(nu, k)) / math.factorial(k)
        kv = radial_group_sum(X, lambda x, k=k: x ** (-(nu + 2 * k)), R, _power_completion(nu + 2 * k),
                              budget, "kappa_k")
        total += c * kv.value
        tail += abs(c) * kv.tail_estimate
        n = kv.terms_used
    # omitted k-terms: the next term times a geometric factor in the largest sech^2
    kk = budget.series_kmax + 1
    x0 = 1.0 / X[0] ** 2 if X.size else 0.0
    nxt = complex(b_coeff(nu, kk)) / math.factorial(kk) * np.sum(X ** (-(nu + 2 * kk)))
    tail += abs(nxt) / max(1.0 - x0, 1e-300)
    return KernelValue(total, float(tail), n)


# ---------------------------------------------------------------------------
# Geometric wave-distribution action
# ---------------------------------------------------------------------------

def wave_action(z, w, g: TestFunction, budget: TruncationBudget = TruncationBudget(),
                cfg: QuadratureConfig = DEFAULT_CONFIG, pipeline: Optional[bool] = None) -> KernelValue:
    """Group sum of the inverse transform k of H(., g).

    For g = g_s the kernel is (1 + 2u)^{-s} and the sum is K_s unless
    ``pipeline`` is True, in which case the numerical route
    H -> g' -> k -> group sum is used for every g.
    """
    if g.decay < 0.5:
        raise DomainError("wave_action needs decay exponent a >= 1/2 + eta")
    if g.kind == "g_s" and not pipeline:
        return automorphic_K(z, w, g.params["s"], budget)
    R = budget.radius
    X = orbit_cosh_distances(z, w, R)
    rho = np.arccosh(np.maximum(X, 1.0))
    extra = 4.0
    prof = kernel_profile(lambda r: h_values(g, r, cfg), rho_max=R + extra, cfg=cfg, window=True,
                          decay=g.decay, rho_cut=R + extra)

    def completion(rr):
        # table integral over [rr, rr + extra], exponential extrapolation beyond
        brk = np.linspace(rr, rr + extra, 33)
        nodes, wts = panel_rule(brk, 16)
        body = np.sum(wts * prof.k(nodes) * np.sinh(nodes))
        a1 = prof.k(np.array([rr + extra - 1.0]))[0] * math.sinh(rr + extra - 1.0)
        a2 = prof.k(np.array([rr + extra]))[0] * math.sinh(rr + extra)
        rate = -np.log(np.abs(a2 / a1)) if a1 != 0 and a2 != 0 else math.inf
        beyond = a2 / rate if np.isfinite(rate) and rate > 0 else 0.0
        return 6.0 * (body + beyond)

    terms = prof.k(rho)
    return radial_group_sum(X, lambda x: terms, R, completion, budget, "wave")


# ---------------------------------------------------------------------------
# Contour representation of G_s
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContourResult:
    value: complex
    imag_part: float
    truncation_error: float
    nodes: int


def _kappa_completion_vec(nu: np.ndarray, R: float, kmax: int = 400) -> np.ndarray:
    """Vectorised tail completion of the hypergeometric kernel over an array of nu."""
    XR = math.cosh(R)
    x = XR ** -2.0
    coef = np.ones(nu.shape, dtype=complex)
    total = 6.0 * XR ** (1.0 - nu) / (nu - 1.0)
    base = 6.0 * XR ** (1.0 - nu)
    for k in range(1, kmax):
        coef = coef * (nu / 2.0 + k - 1) * (nu / 2.0 + k - 0.5) / ((nu + k - 0.5) * k) * x
        term = coef * base / (nu + 2 * k - 1.0)
        total += term
        if np.all(np.abs(term) < 1e-18 * np.maximum(1.0, np.abs(total))):
            break
    return total


def _contour_integrand(t: np.ndarray, s: complex, delta: float, X: np.ndarray, R: float,
                       complete: bool, chunk: int = 512, with_bound: bool = False):
    """i c(nu) K_nu / ((s-1/2)^2 - (1/2-nu)^2) on nu = 1 + delta + i t.

    With ``with_bound`` also returns |prefactor| * sum_j |term_j| / rho_j,
    the amplitude entering the integration-by-parts tail bound.
    """
    nu = 1.0 + delta + 1j * t
    out = np.empty(t.shape, dtype=complex)
    amp = np.empty(t.shape)
    rho = np.arccosh(np.maximum(X, 1.0))
    for i in range(0, t.size, chunk):
        nv = nu[i:i + chunk]
        terms = _kappa_direct_terms(nv, X)
        kap = terms.sum(axis=1)
        mag = (np.abs(terms) / rho[None, :]).sum(axis=1)
        if complete:
            comp = _kappa_completion_vec(nv, R)
            kap = kap + comp
            mag = mag + np.abs(comp) / R
        pref = 1j * c_coeff(nv) / ((s - 0.5) ** 2 - (0.5 - nv) ** 2)
        out[i:i + chunk] = pref * kap
        amp[i:i + chunk] = np.abs(pref) * mag
    return (out, amp) if with_bound else out


def contour_partial_integrals(z, w, s: complex, delta: float, T: float, budget: TruncationBudget,
                              panel_width: float = 0.25, order: int = 16):
    """Cumulative integrals I(T') = int_{-T'}^{T'} at panel edges T' in (0, T].

    Returns (edges, I, amplitude at T) with I complex.
    """
    s = complex(s)
    if not 0.0 < delta < 0.5:
        raise DomainError("delta must lie in (0, 1/2)")
    _check_re(s, 1.0 + delta, "greens_contour")
    X, R = _orbit(z, w, budget, singular=True)
    n = int(math.ceil(T / panel_width))
    edges = np.linspace(0.0, T, n + 1)
    t, wt = panel_rule(edges, order)
    fp = _contour_integrand(t, s, delta, X, R, budget.complete_tail)
    fm = _contour_integrand(-t, s, delta, X, R, budget.complete_tail)
    per_panel = (wt * (fp + fm)).reshape(n, order).sum(axis=1)
    cum = np.cumsum(per_panel)
    _, amp = _contour_integrand(np.array([T]), s, delta, X, R, budget.complete_tail, with_bound=True)
    return edges[1:], cum, float(amp[0])


def greens_contour(z, w, s: complex, delta: float = 0.25, T: float = 400.0,
                   budget: TruncationBudget = TruncationBudget(group_bound=40.0),
                   cfg: QuadratureConfig = DEFAULT_CONFIG, panel_width: float = 0.25,
                   order: int = 16) -> ContourResult:
    """G_s(z, w) as the vertical-line integral over Re nu = 1 + delta, |Im nu| <= T.

    The integrand uses the same orbit set (and tail completion) as
    greens_function at this budget.  Every group term oscillates in t with
    frequency rho_j = d(z, eta_j w) > 0, so integrating by parts bounds the
    omitted |t| > T by 2 |prefactor(T)| sum_j |term_j(T)| / rho_j; this is
    reported as ``truncation_error``.
    """
    edges, cum, amp = contour_partial_integrals(z, w, s, delta, T, budget, panel_width, order)
    total = complex(cum[-1])
    return ContourResult(total, float(total.imag), float(2.0 * amp), int(edges.size * order * 2))
