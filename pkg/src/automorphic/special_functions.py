"""Complex special functions: log-Gamma, Pochhammer, Gauss 2F1 on [0, 1),
conical and second-kind Legendre functions, and the coefficient functions
a_nu(s), b_k(nu), c(nu).

All routines accept numpy arrays and broadcast their arguments.
"""

from __future__ import annotations

import math
from typing import Literal

import numpy as np
from scipy import integrate, special

from ._numerics import gauss_legendre
from .errors import ConvergenceError, DomainError, PoleError

__all__ = [
    "log_gamma",
    "gamma",
    "rgamma",
    "pochhammer",
    "gauss_2f1",
    "legendre_p_conical",
    "legendre_p_mehler",
    "conical_half",
    "legendre_q",
    "legendre_q_spectral",
    "a_coeff",
    "b_coeff",
    "c_coeff",
]

# Lanczos approximation, g = 7, nine terms.
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _is_pole(z: np.ndarray) -> np.ndarray:
    re = z.real
    return (z.imag == 0.0) & (re <= 0.0) & (re == np.round(re))


def _lanczos_log_gamma(z: np.ndarray) -> np.ndarray:
    """log Gamma(z) for Re z >= 1/2 (analytic branch)."""
    zm = z - 1.0
    acc = np.full(z.shape, _LANCZOS[0], dtype=complex)
    for k in range(1, len(_LANCZOS)):
        acc = acc + _LANCZOS[k] / (zm + k)
    t = zm + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (zm + 0.5) * np.log(t) - t + np.log(acc)


def _log_sin_pi(z: np.ndarray) -> np.ndarray:
    """log sin(pi z), stable for large |Im z| (correct modulo 2 pi i)."""
    w = np.pi * z
    out = np.empty(z.shape, dtype=complex)
    up = w.imag >= 0
    wu = w[up]
    out[up] = -1j * wu + np.log1p(-np.exp(2j * wu)) + math.log(0.5) + 0.5j * np.pi
    wd = w[~up]
    out[~up] = 1j * wd + np.log1p(-np.exp(-2j * wd)) + math.log(0.5) - 0.5j * np.pi
    return out


def log_gamma(z):
    """Principal logarithm of Gamma(z).

    The imaginary part is reduced to (-pi, pi], so ``exp(log_gamma(z))`` is
    Gamma(z) and differences of log_gamma values are correct modulo 2 pi i.
    Raises PoleError at non-positive integers.
    """
    zz = np.asarray(z, dtype=complex)
    scalar = zz.ndim == 0
    zz = np.atleast_1d(zz)
    if np.any(_is_pole(zz)):
        raise PoleError(f"Gamma has a pole at {zz[_is_pole(zz)][0].real:g}")
    out = np.empty(zz.shape, dtype=complex)
    right = zz.real >= 0.5
    out[right] = _lanczos_log_gamma(zz[right])
    left = ~right
    if np.any(left):
        zl = zz[left]
        out[left] = math.log(math.pi) - _log_sin_pi(zl) - _lanczos_log_gamma(1.0 - zl)
    im = np.mod(out.imag + np.pi, 2.0 * np.pi) - np.pi
    im = np.where(im == -np.pi, np.pi, im)
    out = out.real + 1j * im
    return out[0] if scalar else out


def gamma(z):
    """Gamma(z) for complex z."""
    return np.exp(log_gamma(z))


def rgamma(z):
    """1/Gamma(z), equal to zero at the poles of Gamma."""
    zz = np.asarray(z, dtype=complex)
    scalar = zz.ndim == 0
    zz = np.atleast_1d(zz)
    out = np.zeros(zz.shape, dtype=complex)
    ok = ~_is_pole(zz)
    if np.any(ok):
        out[ok] = np.exp(-log_gamma(zz[ok]))
    return out[0] if scalar else out


def pochhammer(a, k: int):
    """Rising factorial (a)_k = a (a+1) ... (a+k-1); (a)_0 = 1."""
    if k < 0:
        raise DomainError("pochhammer needs k >= 0")
    aa = np.asarray(a, dtype=complex)
    out = np.ones_like(aa)
    for j in range(int(k)):
        out = out * (aa + j)
    return out


# ---------------------------------------------------------------------------
# Gauss hypergeometric function on [0, 1)
# ---------------------------------------------------------------------------

_CONNECTION_X = 0.75
_INTEGER_GAP = 0.02


def _series_2f1(a, b, c, x, tol, max_terms):
    """Power series with a rigorous geometric tail bound.

    After term k the remaining ratios are bounded by
    x (1 + |a-1|/(j+1)) (1 + |b-c|/(j + Re c)), decreasing in j.
    """
    a, b, c, x = np.broadcast_arrays(np.asarray(a, complex), np.asarray(b, complex),
                                     np.asarray(c, complex), np.asarray(x, float))
    shape = x.shape
    a, b, c, x = (v.ravel().copy() for v in (a, b, c, x))
    total = np.ones(a.shape, dtype=complex)
    term = np.ones(a.shape, dtype=complex)
    active = np.ones(a.shape, dtype=bool)
    amo = np.abs(a - 1.0)
    bmc = np.abs(b - c)
    for k in range(max_terms):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        ak, bk, ck, xk = a[idx], b[idx], c[idx], x[idx]
        t = term[idx] * (ak + k) * (bk + k) / ((ck + k) * (k + 1.0)) * xk
        term[idx] = t
        total[idx] += t
        j = k + 1.0
        denom = j + ck.real
        with np.errstate(divide="ignore", invalid="ignore"):
            beta = xk * (1.0 + amo[idx] / (j + 1.0)) * (1.0 + bmc[idx] / np.where(denom > 0, denom, np.nan))
            bound = np.abs(t) * beta / (1.0 - beta)
        done = (np.abs(t) == 0.0) | ((beta < 1.0) & (bound <= tol * np.abs(total[idx])))
        active[idx[done]] = False
    else:
        if np.any(active):
            raise ConvergenceError(f"2F1 series did not converge in {max_terms} terms "
                                   f"(x = {x[active].max():.6g})")
    return total.reshape(shape)


def _near_integer(v: np.ndarray) -> np.ndarray:
    return (np.abs(v.imag) < _INTEGER_GAP) & (np.abs(v.real - np.round(v.real)) < _INTEGER_GAP)


def gauss_2f1(a, b, c, x, *, method: Literal["auto", "series", "euler", "connection"] = "auto",
              tol: float = 1e-16, max_terms: int = 200000):
    """Gauss hypergeometric function 2F1(a, b; c; x) for real x in [0, 1).

    ``method``:
      * ``series``: the defining power series.
      * ``euler``: (1-x)^{c-a-b} 2F1(c-a, c-b; c; x).
      * ``connection``: expansion about x = 1 (needs c-a-b non-integer).
      * ``auto``: series for x <= 0.75; above that the connection formula
        when c-a-b is not within 0.02 of an integer, otherwise the Euler
        transform when Re(c-a-b) < 0 and the plain series else.
    """
    a, b, c, x = np.broadcast_arrays(np.asarray(a, complex), np.asarray(b, complex),
                                     np.asarray(c, complex), np.asarray(x, float))
    scalar = x.ndim == 0
    a, b, c, x = (np.atleast_1d(v) for v in (a, b, c, x))
    if np.any((x < 0.0) | (x >= 1.0)) or np.any(~np.isfinite(x)):
        raise DomainError("gauss_2f1 is restricted to x in [0, 1)")
    if np.any(_is_pole(c)):
        raise PoleError("2F1 undefined: c is a non-positive integer")
    out = np.empty(x.shape, dtype=complex)
    s = c - a - b
    if method == "auto":
        high = x > _CONNECTION_X
        conn = high & ~_near_integer(s)
        eul = high & ~conn & (s.real < 0)
        ser = ~(conn | eul)
    else:
        ser = np.full(x.shape, method == "series")
        eul = np.full(x.shape, method == "euler")
        conn = np.full(x.shape, method == "connection")
        if method not in ("series", "euler", "connection"):
            raise DomainError(f"unknown 2F1 method {method!r}")
    if np.any(ser):
        out[ser] = _series_2f1(a[ser], b[ser], c[ser], x[ser], tol, max_terms)
    if np.any(eul):
        ae, be, ce, xe = a[eul], b[eul], c[eul], x[eul]
        out[eul] = (1.0 - xe) ** (ce - ae - be) * _series_2f1(ce - ae, ce - be, ce, xe, tol, max_terms)
    if np.any(conn):
        ac, bc, cc, xc = a[conn], b[conn], c[conn], x[conn]
        sc = cc - ac - bc
        if np.any(_is_pole(sc)) or np.any(_is_pole(-sc)):
            raise PoleError("connection formula needs c-a-b non-integer")
        y = 1.0 - xc
        lg_c = log_gamma(cc)
        A = np.exp(lg_c + log_gamma(sc)) * rgamma(cc - ac) * rgamma(cc - bc)
        B = np.exp(lg_c + log_gamma(-sc)) * rgamma(ac) * rgamma(bc)
        f1 = _series_2f1(ac, bc, 1.0 - sc, y, tol, max_terms)
        f2 = _series_2f1(cc - ac, cc - bc, 1.0 + sc, y, tol, max_terms)
        out[conn] = A * f1 + B * y ** sc * f2
    return out[0] if scalar else out


# ---------------------------------------------------------------------------
# Legendre functions
# ---------------------------------------------------------------------------

_SERIES_U_MAX = 5.0
_SERIES_PHASE_MAX = 3.0


def legendre_p_mehler(r, x, extra_nodes: int = 40):
    """Conical function from the Mehler integral

        P_{-1/2+ir}(cosh b) = (sqrt 2 / pi) int_0^b cos(r t) / sqrt(cosh b - cosh t) dt,

    with t = b (1 - w^2) removing the endpoint singularity.  Vectorised over
    r for fixed x; x may be an array, grouped by value.
    """
    rr = np.asarray(r, dtype=complex)
    xx = np.asarray(x, dtype=float)
    rr, xx = np.broadcast_arrays(rr, xx)
    out = np.empty(rr.shape, dtype=float)
    flat_r, flat_x, flat_o = rr.ravel(), xx.ravel(), out.ravel()
    for xv in np.unique(flat_x):
        sel = flat_x == xv
        flat_o[sel] = _mehler_fixed_x(flat_r[sel], float(xv), extra_nodes)
    return out.reshape(rr.shape) if out.ndim else float(out)


def _mehler_fixed_x(r: np.ndarray, x: float, extra_nodes: int) -> np.ndarray:
    if x == 1.0:
        return np.ones(r.shape)
    b = math.acosh(x)
    n = int(extra_nodes + np.ceil(1.2 * np.max(np.abs(r)) * b if r.size else 0))
    w, wt = gauss_legendre(n)
    w = 0.5 * (w + 1.0)
    wt = 0.5 * wt
    t = b * (1.0 - w * w)
    denom = np.sqrt(2.0 * np.sinh(0.5 * (b + t)) * np.sinh(0.5 * b * w * w))
    jac = 2.0 * b * w / denom
    vals = np.cos(np.outer(r, t)) @ (wt * jac)
    return (math.sqrt(2.0) / math.pi) * vals.real


def legendre_p_conical(r, x):
    """Conical function P_{-1/2+ir}(x), x >= 1, r real or in i[-1/2, 1/2].

    Uses (1+u)^{-1/2+ir} 2F1(1/2-ir, 1/2-ir; 1; u/(u+1)), u = (x-1)/2, while
    u <= 5 and |r| sqrt(u/(u+1)) <= 3; otherwise the Mehler integral.
    """
    rr = np.asarray(r, dtype=complex)
    xx = np.asarray(x, dtype=float)
    if np.any(xx < 1.0):
        raise DomainError("conical function needs x >= 1")
    rr, xx = np.broadcast_arrays(rr, xx)
    scalar = rr.ndim == 0
    rr, xx = np.atleast_1d(rr), np.atleast_1d(xx)
    u = 0.5 * (xx - 1.0)
    q = u / (u + 1.0)
    use_series = (u <= _SERIES_U_MAX) & (np.abs(rr) * np.sqrt(q) <= _SERIES_PHASE_MAX)
    out = np.empty(rr.shape, dtype=float)
    if np.any(use_series):
        rs, us, qs = rr[use_series], u[use_series], q[use_series]
        a = 0.5 - 1j * rs
        val = (1.0 + us) ** (-0.5 + 1j * rs) * gauss_2f1(a, a, 1.0, qs)
        out[use_series] = val.real
    rest = ~use_series
    if np.any(rest):
        out[rest] = legendre_p_mehler(rr[rest], xx[rest])
    return float(out[0]) if scalar else out


def conical_half(nu, u):
    """One of the two hypergeometric pieces of P_{nu-1}(1+2u):

        H(nu, u) = 2^nu Gamma(1-2nu)/Gamma(1-nu)^2 (1+2u)^{-nu}
                   2F1(nu/2, (nu+1)/2; nu+1/2; (1+2u)^{-2}),

    so that P_{-1/2+ir}(1+2u) = H(1/2+ir, u) + H(1/2-ir, u) (r != 0).
    """
    nu = np.asarray(nu, dtype=complex)
    uu = np.asarray(u, dtype=float)
    x = 1.0 + 2.0 * uu
    pref = 2.0 ** nu * np.exp(log_gamma(1.0 - 2.0 * nu) - 2.0 * log_gamma(1.0 - nu))
    return pref * x ** (-nu) * gauss_2f1(nu / 2.0, (nu + 1.0) / 2.0, nu + 0.5, x ** -2.0)


def legendre_q(nu, x):
    """Legendre function of the second kind Q_nu(x) for x > 1, Re nu > -1.

    Q_nu(x) = sqrt(pi) Gamma(nu+1) / (Gamma(nu+3/2) (2x)^{nu+1})
              2F1((nu+1)/2, (nu+2)/2; nu+3/2; 1/x^2).
    Close to x = 1 (1/x^2 > 0.9) the equivalent form
    sqrt(pi) Gamma(nu+1)/Gamma(nu+3/2) e^{-(nu+1)d} 2F1(nu+1, 1/2; nu+3/2; e^{-2d}),
    x = cosh d, is used because it converges faster there.
    """
    nn = np.asarray(nu, dtype=complex)
    xx = np.asarray(x, dtype=float)
    if np.any(xx <= 1.0):
        raise DomainError("legendre_q needs x > 1")
    if np.any(nn.real <= -1.0):
        raise DomainError("legendre_q needs Re(nu) > -1")
    nn, xx = np.broadcast_arrays(nn, xx)
    scalar = xx.ndim == 0
    nn, xx = np.atleast_1d(nn), np.atleast_1d(xx)
    pref = math.sqrt(math.pi) * np.exp(log_gamma(nn + 1.0) - log_gamma(nn + 1.5))
    out = np.empty(xx.shape, dtype=complex)
    inv2 = xx ** -2.0
    far = inv2 <= 0.9
    if np.any(far):
        nf, xf = nn[far], xx[far]
        out[far] = pref[far] * (2.0 * xf) ** (-nf - 1.0) * gauss_2f1(
            (nf + 1.0) / 2.0, (nf + 2.0) / 2.0, nf + 1.5, inv2[far], method="series", max_terms=2_000_000)
    near = ~far
    if np.any(near):
        nq, xq = nn[near], xx[near]
        d = np.arccosh(xq)
        q = np.exp(-2.0 * d)
        out[near] = pref[near] * np.exp(-(nq + 1.0) * d) * gauss_2f1(
            nq + 1.0, 0.5, nq + 1.5, q, method="series", max_terms=2_000_000)
    return out[0] if scalar else out


def legendre_q_spectral(s: float, x: float, smooth_cut: float = 16.0, order: int = 24) -> tuple[float, float]:
    """Q_{s-1}(x) from its conical expansion

        Q_{s-1}(cosh b) = int_0^inf r tanh(pi r) / ((s-1/2)^2 + r^2) P_{-1/2+ir}(cosh b) dr.

    tanh = 1 - 2/(e^{2 pi r} + 1) splits the integrand.  The exponentially
    small part is integrated directly to ``smooth_cut``.  For the slowly
    decaying part the Mehler integral is swapped with the r-integral, using
    int_0^inf r cos(rt)/(a^2+r^2) dr = -(e^{-at} Ei(at) + e^{at} Ei(-at))/2.
    Returns (value, quadrature error estimate).
    """
    s, x = float(s), float(x)
    a = s - 0.5
    if a <= 0:
        raise DomainError("legendre_q_spectral needs real s > 1/2")
    if x <= 1.0:
        raise DomainError("legendre_q_spectral needs x > 1")
    b = math.acosh(x)
    nodes, wts = gauss_legendre(order)
    edges = np.linspace(0.0, smooth_cut, int(smooth_cut * 2) + 1)
    r = np.concatenate([0.5 * (hi - lo) * nodes + 0.5 * (hi + lo) for lo, hi in zip(edges[:-1], edges[1:])])
    wr = np.concatenate([0.5 * (hi - lo) * wts for lo, hi in zip(edges[:-1], edges[1:])])
    damp = -2.0 * r / ((a * a + r * r) * (np.exp(2.0 * math.pi * r) + 1.0))
    smooth = float(np.sum(wr * damp * legendre_p_conical(r, x)))

    def cos_kernel(t):
        return -0.5 * (math.exp(-a * t) * special.expi(a * t) + math.exp(a * t) * special.expi(-a * t))

    def integrand(w):
        # t = b (1 - w^2) removes the inverse square root at t = b
        if w == 0.0:
            return 2.0 * b * cos_kernel(b) / math.sqrt(b * math.sinh(b)) if b > 0 else 0.0
        tt = b * (1.0 - w * w)
        den = math.sqrt(2.0 * math.sinh(0.5 * (b + tt)) * math.sinh(0.5 * b * w * w))
        return 2.0 * b * w * cos_kernel(tt) / den if tt > 0 else 0.0

    main, err = integrate.quad(integrand, 0.0, 1.0, epsabs=1e-14, epsrel=1e-13, limit=400)
    return math.sqrt(2.0) / math.pi * main + smooth, math.sqrt(2.0) / math.pi * err


# ---------------------------------------------------------------------------
# Coefficient functions
# ---------------------------------------------------------------------------

def a_coeff(nu, s):
    """a_nu(s) = 2^{s-1} sqrt(pi) Gamma((s-nu)/2) Gamma((s-1+nu)/2) / Gamma(s)."""
    nu = np.asarray(nu, dtype=complex)
    s = np.asarray(s, dtype=complex)
    lg = log_gamma((s - nu) / 2.0) + log_gamma((s - 1.0 + nu) / 2.0) - log_gamma(s)
    return 2.0 ** (s - 1.0) * math.sqrt(math.pi) * np.exp(lg)


def b_coeff(nu, k: int):
    """b_k(nu) = (nu/2)_k (nu/2 + 1/2)_k / (nu + 1/2)_k."""
    nu = np.asarray(nu, dtype=complex)
    den = pochhammer(nu + 0.5, k)
    if np.any(den == 0):
        raise PoleError("b_k(nu): (nu + 1/2)_k vanishes")
    return pochhammer(nu / 2.0, k) * pochhammer(nu / 2.0 + 0.5, k) / den


def c_coeff(nu):
    """c(nu) = 2^{-nu-1} Gamma(nu) / (Gamma(nu - 1/2) pi^{3/2} i)."""
    nu = np.asarray(nu, dtype=complex)
    ratio = np.exp(log_gamma(nu) - log_gamma(nu - 0.5))
    return 2.0 ** (-nu - 1.0) * ratio / (math.pi ** 1.5 * 1j)
