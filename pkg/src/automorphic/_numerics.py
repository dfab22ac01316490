"""Quadrature rules and interpolation tables used across the package."""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Sequence

import numpy as np


@lru_cache(maxsize=256)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1] (read-only arrays)."""
    x, w = np.polynomial.legendre.leggauss(int(n))
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=32)
def gauss_laguerre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Laguerre nodes and weights for the weight e^{-x} on [0, inf)."""
    x, w = np.polynomial.laguerre.laggauss(int(n))
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_rule(breaks: Sequence[float] | np.ndarray, order: int = 20) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre rule on consecutive intervals of ``breaks``."""
    b = np.asarray(breaks, dtype=float)
    x, w = gauss_legendre(order)
    lo, hi = b[:-1, None], b[1:, None]
    half = 0.5 * (hi - lo)
    nodes = (lo + hi) * 0.5 + half * x[None, :]
    weights = half * w[None, :]
    return nodes.ravel(), weights.ravel()


def graded_breaks(a: float, b: float, levels: int = 12, ratio: float = 0.5) -> np.ndarray:
    """Breakpoints on [a, b] refined geometrically toward ``a``.

    Resolves algebraic endpoint behaviour such as (u - a)^0.8.
    """
    span = b - a
    pts = [a] + [a + span * ratio ** k for k in range(levels, 0, -1)] + [b]
    return np.asarray(pts, dtype=float)


def uniform_breaks(a: float, b: float, width: float) -> np.ndarray:
    n = max(1, int(np.ceil((b - a) / width)))
    return np.linspace(a, b, n + 1)


def integrate_panels(f: Callable[[np.ndarray], np.ndarray], breaks, order: int = 20):
    nodes, weights = panel_rule(breaks, order)
    return np.sum(weights * f(nodes))


def power_tail(f: Callable[[np.ndarray], np.ndarray], x0: float, p: float, n: int = 48):
    """Integral of f over [x0, inf) for f(x) ~ x^{-p}, p > 1.

    Substitutes x = x0 exp(v/(p-1)) so the integrand becomes e^{-v} times a
    slowly varying factor, then applies Gauss-Laguerre.
    """
    if p <= 1.0:
        raise ValueError("power_tail needs decay exponent p > 1")
    v, w = gauss_laguerre(n)
    k = p - 1.0
    x = x0 * np.exp(v / k)
    vals = f(x) * x / k * np.exp(v)
    return np.sum(w * vals)


class ChebyshevTable:
    """Piecewise Chebyshev interpolant of a smooth function on [a, b].

    ``values_fn`` is called once on all interpolation nodes (shape (m*n,))
    and may return a real or complex array of the same shape.
    """

    def __init__(self, values_fn: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                 panels: int, order: int = 16):
        self.a = float(a)
        self.b = float(b)
        self.panels = int(panels)
        self.order = int(order)
        k = np.arange(order)
        t = np.cos(np.pi * (k + 0.5) / order)  # first-kind Chebyshev points
        edges = np.linspace(self.a, self.b, self.panels + 1)
        self._edges = edges
        self._width = (self.b - self.a) / self.panels
        lo, hi = edges[:-1, None], edges[1:, None]
        nodes = 0.5 * (lo + hi) + 0.5 * (hi - lo) * t[None, :]
        vals = np.asarray(values_fn(nodes.ravel())).reshape(self.panels, order)
        # discrete cosine transform to Chebyshev coefficients
        T = np.cos(np.outer(np.arange(order), np.arccos(t)))  # (order, order)
        coef = (2.0 / order) * vals @ T.T
        coef[:, 0] *= 0.5
        self.coef = coef
        self.nodes = nodes
        self.values = vals

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        flat = x.ravel()
        idx = np.clip(((flat - self.a) / self._width).astype(np.int64), 0, self.panels - 1)
        lo = self._edges[idx]
        t = 2.0 * (flat - lo) / self._width - 1.0
        c = self.coef[idx]
        # Clenshaw recurrence, vectorised over points
        b1 = np.zeros_like(c[:, 0])
        b2 = np.zeros_like(c[:, 0])
        for j in range(self.order - 1, 0, -1):
            b1, b2 = 2.0 * t * b1 - b2 + c[:, j], b1
        out = t * b1 - b2 + c[:, 0]
        return out.reshape(x.shape)

    def integral(self, weight: Callable[[np.ndarray], np.ndarray] | None = None, upto: float | None = None,
                 order: int = 24) -> complex:
        """Integral of (table * weight) over [a, upto] by panel Gauss-Legendre."""
        top = self.b if upto is None else min(float(upto), self.b)
        if top <= self.a:
            return 0.0
        brk = np.append(self._edges[self._edges < top], top)
        nodes, w = panel_rule(brk, order)
        vals = self(nodes)
        if weight is not None:
            vals = vals * weight(nodes)
        return np.sum(w * vals)
