"""Selberg/Harish-Chandra transform by quadrature, the cosine transform H(r, g),
closed test-function families and their series identities.

Conventions: a radial kernel k(u) is a function of the point-pair invariant
u = |z - w|^2 / (4 Im z Im w).  The transform runs

    Q(v) = int_v^inf k(u) / sqrt(u - v) du,
    g(rho) = 2 Q(sinh(rho/2)^2),
    h(r) = 2 int_0^inf g(rho) cos(r rho) d rho,

and the inverse runs backwards through the same three functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.special import erfc

from ._numerics import ChebyshevTable, gauss_legendre, panel_rule, power_tail
from .errors import ConvergenceError, DivergenceError, DomainError, PoleError
from .special_functions import a_coeff, gauss_2f1, legendre_q, log_gamma, pochhammer

__all__ = [
    "RadialKernel",
    "TestFunction",
    "QuadratureConfig",
    "SeriesResult",
    "forward_transform",
    "inverse_transform",
    "h_transform",
    "h_values",
    "eval_test",
    "series_identity_G",
    "series_identity_G_tilde",
    "shift_identity",
    "shift_factor",
    "kernel_profile",
    "KernelProfile",
]


# ---------------------------------------------------------------------------
# Configuration and domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and resolution for the transform quadratures.

    ``oscillatory_cutoff`` is the cosine frequency above which panel widths
    shrink to pi/|r|.  ``spectral_cutoff`` and ``spectral_taper`` describe the
    smooth erfc window applied to h(r) before the inverse cosine transform in
    the pipeline.
    """

    abs_tol: float = 1e-14
    rel_tol: float = 1e-12
    max_panels: int = 20000
    oscillatory_cutoff: float = 1.0
    order: int = 20
    spectral_cutoff: float = 50.0
    spectral_taper: float = 10.0

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise DomainError("quadrature tolerances must be positive")
        if self.max_panels < 1:
            raise DomainError("max_panels must be >= 1")


DEFAULT_CONFIG = QuadratureConfig()


@dataclass(frozen=True)
class RadialKernel:
    """Radial kernel k(u).

    ``small_u_exponent`` p records k(u) = O(u^{-p}) as u -> 0 and
    ``decay_exponent`` q records k(u) = O(u^{-q}) as u -> inf.
    """

    kind: str
    params: tuple
    evaluator: Callable[[np.ndarray], np.ndarray]
    small_u_exponent: float = 0.0
    decay_exponent: float = 2.0

    def __call__(self, u):
        return self.evaluator(np.asarray(u, dtype=float))

    @classmethod
    def cosh_power(cls, s: complex) -> "RadialKernel":
        """k_s(u) = (1 + 2u)^{-s} = cosh(d)^{-s}."""
        s = complex(s)
        if s.real <= 0.5:
            raise DomainError("cosh_power needs Re s > 1/2")
        return cls("cosh_power", (s,), lambda u: (1.0 + 2.0 * u) ** (-s), 0.0, s.real)

    @classmethod
    def sinh_power(cls, s: complex) -> "RadialKernel":
        """k(u) = sinh(d)^{-s} = (4u(u+1))^{-s/2}."""
        s = complex(s)
        if s.real <= 0.5:
            raise DomainError("sinh_power needs Re s > 1/2")
        return cls("sinh_power", (s,), lambda u: (4.0 * u * (u + 1.0)) ** (-s / 2.0), s.real / 2.0, s.real)

    @classmethod
    def legendre_q(cls, s: complex) -> "RadialKernel":
        """k(u) = Q_{s-1}(1 + 2u) (logarithmic at u = 0)."""
        s = complex(s)
        if s.real <= 1.0:
            raise DomainError("legendre_q kernel needs Re s > 1")
        return cls("legendre_q", (s,), lambda u: legendre_q(s - 1.0, 1.0 + 2.0 * u), 0.0, s.real)

    @classmethod
    def custom(cls, fn: Callable, small_u_exponent: float = 0.0, decay_exponent: float = 2.0,
               params: tuple = ()) -> "RadialKernel":
        return cls("custom", params, fn, small_u_exponent, decay_exponent)


@dataclass(frozen=True)
class TestFunction:
    """Even test function g on [0, inf).

    ``decay`` is the exponent a with |g(u)| = O(e^{-a u}).  ``smoothness``
    is the exponent of the leading non-analytic power of u at 0 (None if the
    even extension is smooth); it limits the algebraic decay of H(r, g).
    """

    __test__ = False  # not a pytest class

    kind: str
    params: dict
    evaluator: Callable[[np.ndarray], np.ndarray]
    decay: float
    smoothness: Optional[float] = None
    defined_at_zero: bool = True

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        if not self.defined_at_zero and np.any(u <= 0):
            raise DomainError(f"{self.kind} is not defined at u = 0")
        return self.evaluator(u)

    def __add__(self, other: "TestFunction") -> "TestFunction":
        return _combine(self, other, 1.0, 1.0)

    def scaled(self, alpha: complex) -> "TestFunction":
        return TestFunction(f"{alpha}*{self.kind}", {"parts": (self,)}, lambda u: alpha * self.evaluator(u),
                            self.decay, self.smoothness, self.defined_at_zero)

    # constructors ---------------------------------------------------------

    @classmethod
    def g_s(cls, s: complex) -> "TestFunction":
        s = complex(s)
        _check_s(s)
        return cls("g_s", {"s": s}, lambda u: eval_test("g_s", {"s": s}, u), s.real - 0.5)

    @classmethod
    def g_s_beta(cls, s: complex, beta: complex) -> "TestFunction":
        s, beta = complex(s), complex(beta)
        _check_s(s)
        p = {"s": s, "beta": beta}
        return cls("g_s_beta", p, lambda u: eval_test("g_s_beta", p, u), s.real - 0.5,
                   _non_integer_power(beta))

    @classmethod
    def G_s_beta(cls, s: complex, beta: complex) -> "TestFunction":
        s, beta = complex(s), complex(beta)
        _check_s(s)
        p = {"s": s, "beta": beta}
        return cls("G_s_beta", p, lambda u: eval_test("G_s_beta", p, u), s.real - 0.5,
                   _non_integer_power(beta + 1.0 - s), defined_at_zero=(beta - s + 1.0).real > 0)

    @classmethod
    def G_tilde(cls, nu: complex, beta: complex) -> "TestFunction":
        nu, beta = complex(nu), complex(beta)
        _check_s(nu)
        p = {"nu": nu, "beta": beta}
        return cls("G_tilde", p, lambda u: eval_test("G_tilde", p, u), nu.real - 0.5,
                   _non_integer_power(beta))

    @classmethod
    def g_ell(cls, s: complex) -> "TestFunction":
        s = complex(s)
        _check_s(s)
        p = {"s": s}
        return cls("g_ell", p, lambda u: eval_test("g_ell", p, u), s.real - 0.5,
                   _non_integer_power(1.0 - s), defined_at_zero=False)

    @classmethod
    def custom(cls, fn: Callable, decay: float, smoothness: Optional[float] = None) -> "TestFunction":
        return cls("custom", {}, fn, decay, smoothness)


def _combine(f: TestFunction, g: TestFunction, a: complex, b: complex) -> TestFunction:
    sm = [v for v in (f.smoothness, g.smoothness) if v is not None]
    return TestFunction("sum", {"parts": (f, g)}, lambda u: a * f.evaluator(u) + b * g.evaluator(u),
                        min(f.decay, g.decay), min(sm) if sm else None,
                        f.defined_at_zero and g.defined_at_zero)


def _check_s(s: complex):
    if s.real <= 0.5:
        raise DomainError("test functions need Re s > 1/2")


def _non_integer_power(p: complex) -> Optional[float]:
    p = complex(p)
    if p.imag == 0 and p.real == round(p.real) and p.real >= 0 and int(round(p.real)) % 2 == 0:
        return None
    return p.real


# ---------------------------------------------------------------------------
# Closed-form families
# ---------------------------------------------------------------------------

def _g_s_values(s: complex, u: np.ndarray, log_offset: complex = 0.0) -> np.ndarray:
    """sqrt(2 pi) Gamma(s-1/2)/Gamma(s) cosh(u)^{1/2-s}, overflow-safe."""
    au = np.abs(u)
    # log cosh u = |u| + log1p(e^{-2|u|}) - log 2
    lch = au + np.log1p(np.exp(-2.0 * au)) - math.log(2.0)
    lc = 0.5 * math.log(2.0 * math.pi) + log_gamma(s - 0.5) - log_gamma(s) + log_offset
    return np.exp(lc + (0.5 - s) * lch)


def _tanh_power(u: np.ndarray, p: complex) -> np.ndarray:
    t = np.tanh(np.abs(u))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(t > 0, t.astype(complex) ** p, 0.0 if complex(p).real > 0 else np.inf)
    return out


_BELOW_ONE = 1.0 - 2.0 ** -53


def _sech2(u: np.ndarray) -> np.ndarray:
    # clipped below 1: the hypergeometric factors are continuous at 1
    return np.minimum(1.0 / np.cosh(np.minimum(np.abs(u), 350.0)) ** 2, _BELOW_ONE)


def eval_test(kind: str, params: dict, u) -> np.ndarray:
    """Pointwise values of the closed test-function families.

    kinds: ``g_s``; ``g_s_beta`` = g_s tanh^beta; ``G_s_beta``;
    ``G_tilde`` for nu, beta; ``G_tilde_shifted`` (the variant with
    parameters (nu/2, nu/2 + 1/2)); ``g_ell`` computed from the sinh-kernel
    Q-function.
    """
    uu = np.asarray(u, dtype=float)
    scalar = uu.ndim == 0
    uu = np.atleast_1d(uu)
    if np.any(uu < 0):
        raise DomainError("test functions are evaluated on u >= 0")
    if kind == "g_s":
        out = _g_s_values(complex(params["s"]), uu)
    elif kind == "g_s_beta":
        s, beta = complex(params["s"]), complex(params["beta"])
        out = _g_s_values(s, uu) * _tanh_power(uu, beta)
    elif kind == "G_s_beta":
        s, beta = complex(params["s"]), complex(params["beta"])
        p = beta + 1.0 - s
        if np.any(uu == 0) and p.real <= 0:
            raise DomainError("G_{s,beta}(0) needs Re(beta) > Re(s) - 1")
        out = np.zeros(uu.shape, dtype=complex)
        pos = uu > 0
        up = uu[pos]
        out[pos] = _g_s_values(s, up) * _tanh_power(up, p) * gauss_2f1(0.25, 0.75, s / 2.0 + 0.5, _sech2(up))
    elif kind in ("G_tilde", "G_tilde_shifted"):
        nu, beta = complex(params["nu"]), complex(params["beta"])
        if kind == "G_tilde":
            a, b = nu / 2.0 - 0.25, nu / 2.0 + 0.25
        else:
            a, b = nu / 2.0, nu / 2.0 + 0.5
        out = np.zeros(uu.shape, dtype=complex)
        pos = uu > 0
        up = uu[pos]
        out[pos] = _g_s_values(nu, up) * _tanh_power(up, beta) * gauss_2f1(a, b, nu + 0.5, _sech2(up))
        if np.any(~pos) and complex(beta).real <= 0:
            raise DomainError("G_tilde(0) needs Re(beta) > 0")
    elif kind == "g_ell":
        s = complex(params["s"])
        if np.any(uu == 0):
            raise DomainError("g_ell is not defined at u = 0")
        out = 2.0 * _q_ell(s, np.sinh(0.5 * uu) ** 2)
    else:
        raise DomainError(f"unknown test-function kind {kind!r}")
    return out[0] if scalar else out


def _q_ell(s: complex, v: np.ndarray) -> np.ndarray:
    """Q-function of the sinh kernel, v > 0.

    Closed form 2^{-s} sqrt(pi) Gamma(s-1/2)/Gamma(s) (v+1)^{1/2-s/2} v^{-s/2}
    F(1/2, s/2; s; -1/v); the negative argument is mapped into [0, 1) by
    Pfaff: F(1/2, s/2; s; -1/v) = sqrt(v/(v+1)) F(1/2, s/2; s; 1/(v+1)).
    """
    lc = -s * math.log(2.0) + 0.5 * math.log(math.pi) + log_gamma(s - 0.5) - log_gamma(s)
    pref = np.exp(lc) * (v + 1.0) ** (0.5 - s / 2.0) * v ** (-s / 2.0)
    return pref * np.sqrt(v / (v + 1.0)) * gauss_2f1(0.5, s / 2.0, s, np.minimum(1.0 / (v + 1.0), _BELOW_ONE))


# ---------------------------------------------------------------------------
# Forward transform
# ---------------------------------------------------------------------------

def _q_nodes(scale_hi: float, order: int = 16):
    """Geometric panels in t covering [2^-46, 2^8 scale_hi] for the Q-step."""
    lo = 2.0 ** -46
    hi = 2.0 ** 8 * max(1.0, scale_hi)
    n = int(math.ceil(math.log(hi / lo) / math.log(2.0) * 2))
    edges = np.concatenate([[0.0], lo * (hi / lo) ** (np.arange(n + 1) / n)])
    return panel_rule(edges, order), hi


def _q_values(k: RadialKernel, v: np.ndarray, order: int = 16) -> np.ndarray:
    """Q(v) = int_0^inf 2 k(v + t^2) dt for an array of v (u = v + t^2)."""
    v = np.atleast_1d(np.asarray(v, dtype=float))
    q = k.decay_exponent
    if q <= 0.5:
        raise DivergenceError("Q-integral diverges at infinity (kernel decays too slowly)")
    if np.any(v == 0) and k.small_u_exponent >= 0.5:
        raise DivergenceError("Q(0) diverges for this kernel")
    out = np.empty(v.shape, dtype=complex)
    for i, vi in enumerate(v):
        (t, w), top = _q_nodes(math.sqrt(1.0 + vi), order)
        body = np.sum(w * 2.0 * k(vi + t * t))
        tail = power_tail(lambda x: 2.0 * k(vi + x * x), top, 2.0 * q)
        out[i] = body + tail
    return out


def forward_transform(k: RadialKernel, r: complex = 0.0, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """Three-step transform of a radial kernel by quadrature.

    Returns (Q, g, h_at_r) with Q and g vectorised callables.  The h-step
    requires g to be integrable at 0, i.e. small_u_exponent < 1; otherwise a
    DivergenceError is raised (the transform does not exist).
    """
    r = complex(r)
    if k.small_u_exponent >= 1.0:
        raise DivergenceError(
            f"transform of {k.kind} does not exist: g(u) ~ u^(1 - 2p) with p = {k.small_u_exponent:g} "
            "is not integrable at u = 0")
    decay = k.decay_exponent - 0.5

    def Q(v):
        vv = np.asarray(v, dtype=float)
        out = _q_values(k, vv.ravel())
        return out.reshape(vv.shape) if vv.ndim else out[0]

    def g(u):
        uu = np.asarray(u, dtype=float)
        return 2.0 * Q(np.sinh(0.5 * uu) ** 2)

    smooth = None if k.small_u_exponent == 0 else 1.0 - 2.0 * k.small_u_exponent
    tf = TestFunction(f"transform[{k.kind}]", {"kernel": k}, g, decay, smooth,
                      defined_at_zero=k.small_u_exponent < 0.5)
    h = h_transform(tf, r, cfg)
    return Q, g, h


# ---------------------------------------------------------------------------
# Cosine transform H(r, g)
# ---------------------------------------------------------------------------

def _u_grid(decay: float, r_abs_max: float, im_max: float, cfg: QuadratureConfig, u_max: Optional[float] = None):
    a_eff = decay - im_max
    if a_eff <= 0:
        raise DivergenceError("g decays too slowly for H(r, g) at this Im r")
    top = u_max if u_max is not None else 44.0 / a_eff
    width = math.pi / max(cfg.oscillatory_cutoff, r_abs_max)
    width = min(width, 1.0)
    # geometric grading toward 0 resolves algebraic behaviour there
    head = [0.0] + [min(1.0, top) * 0.5 ** j for j in range(48, 0, -1)]
    head = np.array(sorted(set(head)))
    start = head[-1]
    n = int(math.ceil((top - start) / width))
    if n > cfg.max_panels:
        raise ConvergenceError("H(r, g) would need more than max_panels panels")
    body = np.linspace(start, top, n + 1) if n > 0 else np.array([start])
    edges = np.concatenate([head[:-1], body])
    return panel_rule(edges, cfg.order)


def h_values(g: TestFunction, r, cfg: QuadratureConfig = DEFAULT_CONFIG, chunk: int = 64) -> np.ndarray:
    """H(r, g) = 2 int_0^inf g(u) cos(u r) du for an array of r."""
    rr = np.atleast_1d(np.asarray(r, dtype=complex))
    im_max = float(np.max(np.abs(rr.imag))) if rr.size else 0.0
    if g.decay <= im_max:
        raise DivergenceError(f"|g(u) e^(u |Im r|)| is not integrable (decay {g.decay:g} <= {im_max:g})")
    nodes, w = _u_grid(g.decay, float(np.max(np.abs(rr))), im_max, cfg)
    vals = g.evaluator(nodes) * w
    out = np.empty(rr.shape, dtype=complex)
    for i in range(0, rr.size, chunk):
        rc = rr[i:i + chunk]
        out[i:i + chunk] = 2.0 * (np.cos(np.outer(rc, nodes)) @ vals)
    return out


def h_transform(g: TestFunction, r: complex, cfg: QuadratureConfig = DEFAULT_CONFIG) -> complex:
    """H(r, g) for a single r; even in r by construction."""
    r = complex(r)
    # evaluate at the canonical representative of {r, -r}
    rc = r if (r.real, r.imag) >= (-r.real, -r.imag) else -r
    return complex(h_values(g, [rc], cfg)[0])


# ---------------------------------------------------------------------------
# Inverse transform
# ---------------------------------------------------------------------------

def _r_panels(r_max: float, rho_max: float, order: int):
    width = min(1.0, math.pi / max(1.0, rho_max))
    n = int(math.ceil(r_max / width))
    return panel_rule(np.linspace(0.0, r_max, n + 1), order)


def _spectral_window(r: np.ndarray, cfg: QuadratureConfig) -> np.ndarray:
    return 0.5 * erfc((r - cfg.spectral_cutoff) / cfg.spectral_taper)


def _effective_r_max(h_fn: Callable, cfg: QuadratureConfig, window: bool) -> float:
    """Smallest r beyond which r |h(r)| w(r) is negligible."""
    top = cfg.spectral_cutoff + 6.0 * cfg.spectral_taper if window else 400.0
    probe = np.linspace(0.0, top, 401)
    vals = np.abs(probe * h_fn(probe))
    if window:
        vals *= _spectral_window(probe, cfg)
    ref = max(float(np.max(vals)), 1e-300)
    big = np.nonzero(vals > 1e-19 * ref)[0]
    return float(probe[min(big[-1] + 2, probe.size - 1)]) if big.size else 1.0


def inverse_transform(h: Callable, u, cfg: QuadratureConfig = DEFAULT_CONFIG, r_max: Optional[float] = None,
                      window: bool = False):
    """Inverse transform of h at the points ``u`` (interpreted as rho for g).

    Returns (g(u), Q(u), k(u)) with g(rho) = (1/pi) int_0^inf h(r) cos(rho r) dr,
    Q(v) = g(2 asinh sqrt v)/2 and k(u) = -(1/pi) int_u^inf Q'(v)/sqrt(v - u) dv,
    where Q' is obtained from g' = -(1/pi) int h(r) r sin(rho r) dr.
    """
    uu = np.atleast_1d(np.asarray(u, dtype=float))
    if r_max is None:
        r_max = _effective_r_max(h, cfg, window)
    rho_of_v = 2.0 * np.arcsinh(np.sqrt(uu))
    prof = kernel_profile(h, rho_max=float(max(np.max(uu), np.max(rho_of_v)) + 1.0), cfg=cfg,
                          r_max=r_max, window=window)
    g = prof.g(uu)
    Q = 0.5 * prof.g(rho_of_v)
    k = prof.k_of_u(uu)
    return g, Q, k


@dataclass
class KernelProfile:
    """Tabulated inverse transform of a spectral function on [0, rho_cut]."""

    g: ChebyshevTable
    g_prime: ChebyshevTable
    k_table: ChebyshevTable
    rho_cut: float
    rho_max: float
    r_max: float

    def k(self, rho) -> np.ndarray:
        rho = np.asarray(rho, dtype=float)
        if np.any(rho > self.rho_cut * (1 + 1e-12)):
            raise DomainError("distance outside the tabulated kernel range")
        return self.k_table(rho)

    def k_of_u(self, u) -> np.ndarray:
        return self.k(2.0 * np.arcsinh(np.sqrt(np.asarray(u, dtype=float))))


def _k_from_gprime(gp: ChebyshevTable, rho_u: np.ndarray, rho_max: float) -> np.ndarray:
    """k at distances rho_u by the tau-substitution rho = rho_u + tau^2."""
    out = np.empty(rho_u.shape, dtype=complex)
    xg, wg = gauss_legendre(24)
    for i, ru in enumerate(rho_u):
        tmax = math.sqrt(max(rho_max - ru, 1e-300))
        scale = min(tmax, math.sqrt(max(ru, 1e-12)))
        geo = [scale * 0.5 ** j for j in range(14, 0, -1)]
        edges = np.unique(np.concatenate([[0.0], [g for g in geo if g < tmax], np.linspace(scale, tmax, 17)]))
        lo, hi = edges[:-1, None], edges[1:, None]
        tau = (0.5 * (lo + hi) + 0.5 * (hi - lo) * xg).ravel()
        wt = (0.5 * (hi - lo) * wg).ravel()
        rho = ru + tau * tau
        half = 0.5 * tau * tau
        kern = 2.0 * tau / np.sqrt(np.sinh(ru + half) * np.sinh(half))
        out[i] = -np.sum(wt * gp(rho) * kern) / (2.0 * math.pi)
    return out


def kernel_profile(h: Callable, rho_max: float, cfg: QuadratureConfig = DEFAULT_CONFIG,
                   r_max: Optional[float] = None, window: bool = True, decay: float = 1.0,
                   rho_cut: Optional[float] = None) -> KernelProfile:
    """Tabulate g, g' and k for a spectral function h (vectorised callable).

    ``rho_cut`` is the largest distance at which k is needed; g' is
    tabulated further out to ``rho_cut + 44/decay`` (or ``rho_max``).
    """
    if rho_cut is None:
        rho_cut = rho_max
    outer = max(rho_max, rho_cut + min(44.0 / max(decay, 1e-3), 60.0))
    if r_max is None:
        r_max = _effective_r_max(h, cfg, window)
    rn, rw = _r_panels(r_max, outer, 24)
    hv = h(rn) * rw
    if window:
        hv = hv * _spectral_window(rn, cfg)

    def g_fn(rho):
        out = np.empty(rho.shape, dtype=complex)
        for i in range(0, rho.size, 256):
            out[i:i + 256] = np.cos(np.outer(rho[i:i + 256], rn)) @ hv / math.pi
        return out

    def gp_fn(rho):
        out = np.empty(rho.shape, dtype=complex)
        hr = hv * rn
        for i in range(0, rho.size, 256):
            out[i:i + 256] = -(np.sin(np.outer(rho[i:i + 256], rn)) @ hr) / math.pi
        return out

    panels = int(math.ceil(outer / 0.25))
    g_tab = ChebyshevTable(g_fn, 0.0, outer, panels, 20)
    gp_tab = ChebyshevTable(gp_fn, 0.0, outer, panels, 20)
    kpan = int(math.ceil(rho_cut / 0.25)) + 1
    k_tab = ChebyshevTable(lambda rho: _k_from_gprime(gp_tab, rho, outer), 0.0, rho_cut, kpan, 16)
    return KernelProfile(g_tab, gp_tab, k_tab, rho_cut, outer, r_max)


# ---------------------------------------------------------------------------
# Series identities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SeriesResult:
    lhs: complex
    rhs: complex
    residual: float
    tail_estimate: float
    terms: int


def _series_sum(coef_log: Callable[[int], complex], s0: complex, beta: complex, u: float,
                kmax: Optional[int], abs_tol: float) -> tuple[complex, float, int]:
    """Sum_k exp(coef_log(k)) g_{s0+2k, beta}(u) with the three-consecutive stopping rule."""
    if u == 0:
        return 0.0, 0.0, 0
    total = 0.0 + 0.0j
    x = _sech2(np.array(u))
    small = 0
    prev = None
    k = 0
    limit = kmax if kmax is not None else 100000
    last = 0.0
    while k <= limit:
        term = complex(np.exp(coef_log(k)) * _g_s_values(s0 + 2 * k, np.array([u]))[0] * _tanh_power(np.array([u]), beta)[0])
        total += term
        last = abs(term)
        if kmax is None:
            ratio = last / prev if prev else 0.0
            small = small + 1 if (last < abs_tol * max(1.0, abs(total)) and ratio < 1.0) else 0
            if small >= 3:
                break
        prev = last
        k += 1
    # geometric envelope of the remaining terms
    xv = float(x)
    tail = last * xv / (1.0 - xv) if xv < 1 else math.inf
    return total, tail, k


def series_identity_G(s: complex, beta: complex, u: float, kmax: Optional[int] = None,
                      abs_tol: float = 1e-18) -> SeriesResult:
    """G_{s,beta}(u) against Sum_k (s/2)_k/k! g_{s+2k,beta}(u).

    ``kmax`` None selects the adaptive stopping rule.
    """
    s, beta = complex(s), complex(beta)
    if beta.real <= 0 or s.real <= 1 or u < 0:
        raise DomainError("series identity needs Re beta > 0, Re s > 1, u >= 0")
    lhs = complex(eval_test("G_s_beta", {"s": s, "beta": beta}, u)) if u > 0 else 0.0 + 0.0j
    lg0 = log_gamma(s / 2.0)

    def coef(k):
        return log_gamma(s / 2.0 + k) - lg0 - math.lgamma(k + 1.0)

    rhs, tail, n = _series_sum(coef, s, beta, float(u), kmax, abs_tol)
    return SeriesResult(lhs, complex(rhs), abs(lhs - rhs), tail, n)


def series_identity_G_tilde(nu: complex, beta: complex, u: float, kmax: Optional[int] = None,
                            abs_tol: float = 1e-18, shifted: bool = False) -> SeriesResult:
    """G~_{nu,beta}(u) against Sum_k b_k(nu)/k! g_{nu+2k,beta}(u).

    ``shifted`` compares with the closed form carrying parameters
    (nu/2, nu/2+1/2); the default uses (nu/2-1/4, nu/2+1/4), which is the
    one the series actually sums to.
    """
    nu, beta = complex(nu), complex(beta)
    if beta.real <= 0 or nu.real <= 1 or u < 0:
        raise DomainError("series identity needs Re beta > 0, Re nu > 1, u >= 0")
    kind = "G_tilde_shifted" if shifted else "G_tilde"
    lhs = complex(eval_test(kind, {"nu": nu, "beta": beta}, u)) if u > 0 else 0.0 + 0.0j
    l1, l2, l3 = log_gamma(nu / 2.0), log_gamma(nu / 2.0 + 0.5), log_gamma(nu + 0.5)

    def coef(k):
        return (log_gamma(nu / 2.0 + k) - l1 + log_gamma(nu / 2.0 + 0.5 + k) - l2
                - log_gamma(nu + 0.5 + k) + l3 - math.lgamma(k + 1.0))

    rhs, tail, n = _series_sum(coef, nu, beta, float(u), kmax, abs_tol)
    return SeriesResult(lhs, complex(rhs), abs(lhs - rhs), tail, n)


def shift_factor(r: complex, s: complex, n: int) -> complex:
    """2^{-2n} (s)_{2n} / ((s/2 - 1/4 - ir/2)_n (s/2 - 1/4 + ir/2)_n)."""
    r, s = complex(r), complex(s)
    d = pochhammer(s / 2.0 - 0.25 - 0.5j * r, n) * pochhammer(s / 2.0 - 0.25 + 0.5j * r, n)
    if d == 0:
        raise PoleError("shift identity: Pochhammer denominator vanishes")
    return complex(4.0 ** (-n) * pochhammer(s, 2 * n) / d)


def shift_identity(r: complex, s: complex, n: int, cfg: QuadratureConfig = DEFAULT_CONFIG,
                   quadrature: bool = False) -> SeriesResult:
    """H(r, g_s) against shift_factor * H(r, g_{s+2n}).

    Both H values come from the closed form a_{1/2+ir} unless ``quadrature``
    is set, in which case the right side uses the cosine-transform quadrature.
    The residual is relative to |lhs|.
    """
    r, s = complex(r), complex(s)
    if s.real <= 1:
        raise DomainError("shift identity needs Re s > 1")
    if n < 0:
        raise DomainError("n must be >= 0")
    lhs = complex(a_coeff(0.5 + 1j * r, s))
    if quadrature:
        h2 = h_transform(TestFunction.g_s(s + 2 * n), r, cfg)
    else:
        h2 = complex(a_coeff(0.5 + 1j * r, s + 2 * n))
    rhs = shift_factor(r, s, n) * h2
    return SeriesResult(lhs, rhs, abs(lhs - rhs) / abs(lhs), 0.0, n)
