"""Parabolic, hyperbolic and elliptic Eisenstein series for PSL(2, Z) by direct
summation, together with their alternative representations: the k-series
over K_{s+2k}, the geodesic integral of K_s and the horocycle integral of the
Green's function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy import integrate

from .errors import DomainError, SingularityError
from .hyperbolic_geometry import as_complex, dist, dist_to_line, laplacian_fd
from .kernels import (TruncationBudget, _greens_completion, _greens_terms, _power_completion,
                      orbit_cosh_distances, orbit_cosh_distances_many, radial_group_sum)
from .modular_group import (ANCHOR, ElementBatch, EllipticPointData, HyperbolicClassData, ball_for_radius,
                            elliptic_coset_batch, hyperbolic_window_batch, radius_of_bound,
                            reduce_to_fundamental_domain)
from .selberg_transform import DEFAULT_CONFIG, QuadratureConfig
from .special_functions import log_gamma

__all__ = [
    "EisensteinValue",
    "parabolic",
    "hyperbolic",
    "hyperbolic_terms",
    "hyperbolic_reps",
    "elliptic",
    "elliptic_terms",
    "elliptic_reps",
    "elliptic_via_k_series",
    "hyperbolic_via_integral",
    "parabolic_via_horocycle",
    "pde_residual_hyperbolic",
    "pde_residual_elliptic",
    "MIN_ELLIPTIC_DISTANCE",
]

MIN_ELLIPTIC_DISTANCE = 1e-3
"""Elliptic series refuse points closer than this to the orbit of w."""


@dataclass(frozen=True)
class EisensteinValue:
    value: complex
    tail_estimate: float
    representation: str

    def __post_init__(self):
        if self.representation not in ("direct", "k_series", "geodesic_integral", "horocycle_integral"):
            raise DomainError(f"unknown representation {self.representation!r}")
        if not self.tail_estimate >= 0:
            raise DomainError("tail_estimate must be >= 0")


def _check_s(s: complex, name: str):
    if complex(s).real <= 1:
        raise DomainError(f"{name} needs Re s > 1")


# ---------------------------------------------------------------------------
# Parabolic
# ---------------------------------------------------------------------------

_PHI_SIEVE = 1_000_000


@lru_cache(maxsize=1)
def _totients(n: int = _PHI_SIEVE) -> np.ndarray:
    phi = np.arange(n + 1, dtype=np.int64)
    for p in range(2, n + 1):
        if phi[p] == p:
            phi[p::p] -= phi[p::p] // p
    return phi


def _phi_tail(Q: int, s: complex) -> complex:
    """Sum_{c > Q} phi(c) c^{-2s}: sieve up to 10^6, (6/pi^2) integral beyond."""
    phi = _totients()
    c = np.arange(Q + 1, _PHI_SIEVE + 1, dtype=float)
    head = np.sum(phi[Q + 1:] * c ** (-2.0 * s)) if Q < _PHI_SIEVE else 0.0
    C = max(Q, _PHI_SIEVE) + 0.5
    return complex(head + (6.0 / math.pi ** 2) * C ** (2.0 - 2.0 * s) / (2.0 * s - 2.0))


def _binom_neg(s: complex, j: int) -> complex:
    out = 1.0 + 0.0j
    for i in range(j):
        out *= (-s - i) / (i + 1)
    return out


def _half_line_integral(A: np.ndarray, cy: np.ndarray, s: complex) -> np.ndarray:
    """int_A^inf (t^2 + (cy)^2)^{-s} dt for A >= 4 cy, by the binomial series."""
    q = (cy / A) ** 2
    total = np.zeros(A.shape, dtype=complex)
    term_q = np.ones(A.shape)
    for j in range(40):
        total += _binom_neg(s, j) * term_q / (2.0 * s - 1.0 + 2.0 * j)
        term_q = term_q * q
        if np.all(term_q < 1e-18):
            break
    return A ** (1.0 - 2.0 * s) * total


def parabolic(z, s: complex, Q: int = 400) -> "EisensteinValue":
    """E(z, s) = sum over coprime (c, d) modulo sign of y^s / |cz + d|^{2s}.

    Rows 1 <= c <= Q are summed explicitly over |cx + d| <= L_c = max(64, 8cy);
    the d-tails of each residue class mod c are replaced by midpoint-rule
    integrals with their first Euler-Maclaurin correction, and rows c > Q by
    their mean value B(s) y^{1-s} phi(c) c^{-2s}, B(s) = sqrt(pi) Gamma(s-1/2)/Gamma(s).
    """
    s = complex(s)
    _check_s(s, "parabolic")
    if Q < 1:
        raise DomainError("Q must be >= 1")
    zc = complex(as_complex(z))
    x, y = zc.real, zc.imag
    total = y ** s + 0.0j  # (c, d) = (0, 1)
    d_tail = 0.0 + 0.0j
    mid_corr = 0.0
    for c in range(1, Q + 1):
        L = max(64.0, 8.0 * c * y)
        lo, hi = math.ceil(-c * x - L), math.floor(-c * x + L)
        d = np.arange(lo, hi + 1, dtype=np.int64)
        d = d[np.gcd(d, c) == 1]
        t = c * x + d
        total += np.sum(y ** s * (t * t + (c * y) ** 2) ** (-s))
        # residues a mod c coprime to c: first omitted points on each side
        res = np.arange(c, dtype=np.int64)
        res = res[np.gcd(res, c) == 1] if c > 1 else np.array([0])
        # right side: smallest t = cx + d > hi_t with d = a mod c
        start_r = hi + 1 + np.mod(res - (hi + 1), c)
        start_l = lo - 1 - np.mod((lo - 1) - res, c)
        A_r = (c * x + start_r) - 0.5 * c
        A_l = -(c * x + start_l) - 0.5 * c
        A = np.concatenate([A_r, A_l])
        cy = np.full(A.shape, c * y)
        integral = _half_line_integral(A, cy, s)
        fprime = -2.0 * s * A * (A * A + (c * y) ** 2) ** (-s - 1.0)
        d_tail += y ** s * np.sum(integral / c + (c / 24.0) * fprime)
        mid_corr += float(np.sum(np.abs(y ** s * (c ** 3) * A ** (-2.0 * s.real - 3.0))))
    B = math.sqrt(math.pi) * np.exp(log_gamma(s - 0.5) - log_gamma(s))
    c_tail = complex(B * y ** (1.0 - s) * _phi_tail(Q, s))
    value = total + d_tail + c_tail
    # error model: non-constant Fourier terms of the c-tail, and the next
    # Euler-Maclaurin term of the d-tails
    tail = abs(c_tail) * (math.exp(-2.0 * math.pi * y) + 1.0 / Q) + mid_corr
    return EisensteinValue(complex(value), float(tail), "direct")


# ---------------------------------------------------------------------------
# Hyperbolic
# ---------------------------------------------------------------------------

def _axis_radius(bound: float) -> float:
    return radius_of_bound(bound)


def hyperbolic_reps(z, data: HyperbolicClassData, D: float) -> ElementBatch:
    """Window representatives eta of Gamma_gamma \\ Gamma with d(eta z, axis) <= D."""
    zc = complex(as_complex(z))
    anchor_gap = float(dist(zc, ANCHOR)) + float(dist(ANCHOR, 1j))
    sig_i = data.scaling.apply(1j)
    radius = D + data.length + anchor_gap + float(dist(1j, sig_i)) + 1e-9
    ball = ball_for_radius(radius)
    win = hyperbolic_window_batch(data, ball)
    dd = dist_to_line(win.apply(zc), data.axis)
    return win.take(np.nonzero(dd <= D)[0])


def hyperbolic_terms(points: np.ndarray, s: complex, data: HyperbolicClassData, reps: ElementBatch) -> np.ndarray:
    """Sum over fixed representatives of cosh(d(eta z, axis))^{-s} at each point."""
    out = np.empty(len(points), dtype=complex)
    for i, p in enumerate(points):
        dd = dist_to_line(reps.apply(complex(p)), data.axis)
        out[i] = np.sum(np.cosh(np.sort(dd)) ** (-s))
    return out


def _hyp_completion(s: complex, length: float):
    def comp(D):
        # cosh t = e^t (1 + e^{-2t}) / 2, kept in log form to avoid overflow
        h = lambda t: np.exp((1.0 - s) * (t - math.log(2.0) + np.log1p(np.exp(-2.0 * t))))
        f = lambda t: h(t).real
        g = lambda t: h(t).imag
        re = integrate.quad(f, D, np.inf, epsabs=1e-15, epsrel=1e-12, limit=200)[0]
        im = integrate.quad(g, D, np.inf, epsabs=1e-15, epsrel=1e-12, limit=200)[0] if complex(s).imag else 0.0
        return (6.0 * length / math.pi) * complex(re, im)
    return comp


def hyperbolic(z, s: complex, data: HyperbolicClassData, bound: float = 60.0,
               budget: Optional[TruncationBudget] = None) -> EisensteinValue:
    """E^hyp(z, s) = sum over Gamma_gamma \\ Gamma of cosh(d(eta z, axis))^{-s}.

    Cosets with d(eta z, axis) <= D = arccosh(bound^2/2) are summed; the rest
    is completed from the tube count (6 l / pi) sinh D.
    """
    s = complex(s)
    _check_s(s, "hyperbolic")
    bud = budget if budget is not None else TruncationBudget(group_bound=bound)
    D = _axis_radius(bud.group_bound)
    reps = hyperbolic_reps(z, data, D)
    dd = np.sort(dist_to_line(reps.apply(complex(as_complex(z))), data.axis))
    kv = radial_group_sum(np.cosh(dd), lambda X: X ** (-s), D, _hyp_completion(s, data.length), bud, "E_hyp")
    return EisensteinValue(kv.value, kv.tail_estimate, "direct")


def hyperbolic_via_integral(z, s: complex, data: HyperbolicClassData,
                            budget: TruncationBudget = TruncationBudget(),
                            cfg: QuadratureConfig = DEFAULT_CONFIG, n0: int = 32,
                            max_n: int = 1024) -> EisensteinValue:
    """(Gamma(s) 2^{1-s} / Gamma(s/2)^2) times the integral of K_s(z, w) over one
    period of the closed geodesic.

    The truncated K_s is exactly gamma-periodic along the axis, so the period
    integral uses the trapezoid rule on [-l/2, l/2] with doubling.
    """
    s = complex(s)
    _check_s(s, "hyperbolic_via_integral")
    zc = complex(as_complex(z))
    R = budget.radius
    ell = data.length
    norm = complex(np.exp(log_gamma(s) - 2.0 * log_gamma(s / 2.0))) * 2.0 ** (1.0 - s)
    comp = _power_completion(s)

    def period_integral(n):
        tt = -0.5 * ell + ell * (np.arange(n) + 0.5) / n
        pts = data.axis.point(tt)
        Xs = orbit_cosh_distances_many(zc, list(pts), R)
        vals, tails = [], []
        for X in Xs:
            kv = radial_group_sum(X, lambda x: x ** (-s), R, comp, budget, "K_s")
            vals.append(kv.value)
            tails.append(kv.tail_estimate)
        return ell * np.mean(vals), ell * np.mean(tails)

    n = n0
    prev, _ = period_integral(n)
    while True:
        n *= 2
        cur, ktail = period_integral(n)
        qerr = abs(cur - prev)
        # stop once quadrature error is small against the truncation tail
        if qerr <= max(cfg.rel_tol * abs(cur), 1e-2 * ktail) or n >= max_n:
            break
        prev = cur
    value = norm * cur
    return EisensteinValue(complex(value), float(abs(norm) * (ktail + qerr)), "geodesic_integral")


# ---------------------------------------------------------------------------
# Elliptic
# ---------------------------------------------------------------------------

def elliptic_reps(z, data: EllipticPointData, R: float) -> ElementBatch:
    """Coset representatives of Gamma_w \\ Gamma with d(eta z, w) <= R."""
    zc = complex(as_complex(z))
    wc = data.w.z
    ball = ball_for_radius(R + float(dist(1j, zc)) + float(dist(1j, wc)) + 1e-9)
    reps = elliptic_coset_batch(data, ball)
    dd = dist(reps.apply(zc), wc)
    return reps.take(np.nonzero(dd <= R)[0])


def _sinh_sum(dd: np.ndarray, s: complex) -> complex:
    return complex(np.sum(np.sinh(np.sort(dd)) ** (-s)))


def elliptic_terms(points: np.ndarray, s: complex, data: EllipticPointData, reps: ElementBatch) -> np.ndarray:
    """Sum over fixed representatives of sinh(d(eta z, w))^{-s} at each point."""
    wc = data.w.z
    return np.array([_sinh_sum(dist(reps.apply(complex(p)), wc), s) for p in points])


def _ell_completion(s: complex, order: int):
    def comp(R):
        h = lambda t: np.exp((1.0 - s) * (t - math.log(2.0) + np.log1p(-np.exp(-2.0 * t))))
        f = lambda t: h(t).real
        g = lambda t: h(t).imag
        re = integrate.quad(f, R, np.inf, epsabs=1e-15, epsrel=1e-12, limit=200)[0]
        im = integrate.quad(g, R, np.inf, epsabs=1e-15, epsrel=1e-12, limit=200)[0] if complex(s).imag else 0.0
        return (6.0 / order) * complex(re, im)
    return comp


def elliptic(z, s: complex, data: EllipticPointData, bound: float = 60.0,
             budget: Optional[TruncationBudget] = None) -> EisensteinValue:
    """E^ell_w(z, s) = sum over Gamma_w \\ Gamma of sinh(d(eta z, w))^{-s}."""
    s = complex(s)
    _check_s(s, "elliptic")
    bud = budget if budget is not None else TruncationBudget(group_bound=bound)
    R = bud.radius
    reps = elliptic_reps(z, data, R)
    dd = np.sort(dist(reps.apply(complex(as_complex(z))), data.w.z))
    if dd.size and dd[0] < MIN_ELLIPTIC_DISTANCE:
        raise SingularityError("z is too close to the orbit of the elliptic point")
    X = np.cosh(dd)
    kv = radial_group_sum(X, lambda x: np.sinh(np.arccosh(x)) ** (-s), R, _ell_completion(s, data.order),
                          bud, "E_ell")
    return EisensteinValue(kv.value, kv.tail_estimate, "direct")


def elliptic_via_k_series(z, s: complex, data: EllipticPointData, kmax: int = 60,
                          budget: TruncationBudget = TruncationBudget()) -> EisensteinValue:
    """(1/ord) sum_{k <= kmax} (s/2)_k / k! K_{s+2k}(z, w).

    The reported tail adds the K_{s+2k} tails (weighted by the coefficients)
    and a geometric bound of the omitted k > kmax terms.
    """
    s = complex(s)
    _check_s(s, "elliptic_via_k_series")
    R = budget.radius
    X = orbit_cosh_distances(z, data.w.z, R)
    if X.size and math.acosh(X[0]) < MIN_ELLIPTIC_DISTANCE:
        raise SingularityError("z is too close to the orbit of the elliptic point")
    total, tail = 0.0 + 0.0j, 0.0
    lg0 = log_gamma(s / 2.0)
    for k in range(kmax + 1):
        coef = complex(np.exp(log_gamma(s / 2.0 + k) - lg0 - math.lgamma(k + 1.0)))
        with np.errstate(over="ignore", under="ignore"):
            kv = radial_group_sum(X, lambda x, k=k: x ** (-(s + 2 * k)), R, _power_completion(s + 2 * k),
                                  budget, "K_s")
        total += coef * kv.value
        tail += abs(coef) * kv.tail_estimate
    kk = kmax + 1
    coef = abs(complex(np.exp(log_gamma(s / 2.0 + kk) - lg0 - math.lgamma(kk + 1.0))))
    x0 = 1.0 / X[0] ** 2 if X.size else 0.0
    nxt = coef * float(np.sum(X ** (-(s.real + 2 * kk))))
    tail += nxt / max(1.0 - x0, 1e-300)
    return EisensteinValue(complex(total / data.order), float(tail / data.order), "k_series")


# ---------------------------------------------------------------------------
# Parabolic via the Green's function on a horocycle
# ---------------------------------------------------------------------------

def parabolic_via_horocycle(z, s: complex, a: float = 10.0,
                            budget: TruncationBudget = TruncationBudget(),
                            cfg: QuadratureConfig = DEFAULT_CONFIG, normalization: str = "euclidean",
                            n0: int = 9, max_n: int = 729) -> EisensteinValue:
    """(2s - 1) a^{s-1} int_0^1 G_s(z, x + ia) dx.

    ``normalization="hyperbolic"`` instead integrates against the hyperbolic
    arc length dx / a, which differs by the factor 1/a.
    """
    s = complex(s)
    _check_s(s, "parabolic_via_horocycle")
    if normalization not in ("euclidean", "hyperbolic"):
        raise DomainError("normalization must be 'euclidean' or 'hyperbolic'")
    zc = complex(as_complex(z))
    top = reduce_to_fundamental_domain(zc)[0].imag
    if a <= top:
        raise DomainError(f"horocycle height a = {a} must exceed max Im(eta z) = {top:.6g}")
    R = budget.radius
    terms = _greens_terms(s)
    comp = _greens_completion(s)

    def node_values(n):
        xs = (np.arange(n) + 0.5) / n
        Xs = orbit_cosh_distances_many(zc, list(xs + 1j * a), R)
        vals, tails = [], []
        for X in Xs:
            if X.size and X[0] - 1.0 < 1e-12:
                raise SingularityError("horocycle passes through the orbit of z")
            kv = radial_group_sum(X, terms, R, comp, budget, "G_s")
            vals.append(kv.value)
            tails.append(kv.tail_estimate)
        return np.mean(vals), np.mean(tails)

    n = n0
    prev, _ = node_values(n)
    while True:
        n *= 3
        cur, gtail = node_values(n)
        qerr = abs(cur - prev)
        # stop once quadrature error is small against the truncation tail
        if qerr <= max(cfg.rel_tol * abs(cur), 1e-2 * gtail) or n >= max_n:
            break
        prev = cur
    factor = (2.0 * s - 1.0) * a ** (s - 1.0)
    if normalization == "hyperbolic":
        factor = factor / a
    return EisensteinValue(complex(factor * cur), float(abs(factor) * (gtail + qerr)), "horocycle_integral")


# ---------------------------------------------------------------------------
# Differential equations
# ---------------------------------------------------------------------------

def pde_residual_hyperbolic(z, s: complex, data: HyperbolicClassData, bound: float = 60.0,
                            h: float = 5e-4) -> tuple[float, complex, complex]:
    """Residual of (Delta - s(1-s)) E^hyp(., s) = s^2 E^hyp(., s+2) at z.

    Uses one fixed set of coset representatives (chosen at z) for all stencil
    points, so the identity holds term by term; returns (residual, lhs, rhs).
    """
    s = complex(s)
    zc = complex(as_complex(z))
    reps = hyperbolic_reps(zc, data, _axis_radius(bound))
    lap, val = laplacian_fd(lambda pts: hyperbolic_terms(pts, s, data, reps), zc, h)
    lhs = lap - s * (1.0 - s) * val
    rhs = s * s * hyperbolic_terms(np.array([zc]), s + 2.0, data, reps)[0]
    return float(abs(lhs - rhs)), complex(lhs), complex(rhs)


def pde_residual_elliptic(z, s: complex, data: EllipticPointData, bound: float = 60.0,
                          h: float = 5e-4) -> tuple[float, complex, complex]:
    """Residual of (Delta - s(1-s)) E^ell(., s) = -s^2 E^ell(., s+2) at z."""
    s = complex(s)
    zc = complex(as_complex(z))
    reps = elliptic_reps(zc, data, radius_of_bound(bound))
    lap, val = laplacian_fd(lambda pts: elliptic_terms(pts, s, data, reps), zc, h)
    lhs = lap - s * (1.0 - s) * val
    rhs = -s * s * elliptic_terms(np.array([zc]), s + 2.0, data, reps)[0]
    return float(abs(lhs - rhs)), complex(lhs), complex(rhs)
