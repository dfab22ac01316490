"""Hyperbolic geometry on the upper half-plane.

Points may be passed as :class:`UhpPoint`, Python complex numbers or numpy
complex arrays; the vectorised helpers work elementwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from ._numerics import gauss_legendre
from .errors import ConvergenceError, DomainError

__all__ = [
    "UhpPoint",
    "MoebiusReal",
    "GeodesicLine",
    "PolarCoords",
    "as_complex",
    "u_invariant",
    "cosh_dist",
    "dist",
    "apply",
    "dist_to_line",
    "polar",
    "cylindrical",
    "geodesic_nodes",
    "geodesic_quadrature",
    "integrate_geodesic",
    "horocycle_nodes",
    "horocycle_quadrature",
    "integrate_horocycle",
    "laplacian_fd",
    "IMAG_AXIS",
]


@dataclass(frozen=True)
class UhpPoint:
    """Point x + iy of the upper half-plane."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DomainError("UhpPoint coordinates must be finite")
        if self.y <= 0:
            raise DomainError(f"UhpPoint needs y > 0, got {self.y}")

    @classmethod
    def from_complex(cls, z: complex) -> "UhpPoint":
        z = complex(z)
        return cls(z.real, z.imag)

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    def __complex__(self) -> complex:
        return self.z


PointLike = Union[UhpPoint, complex, float, np.ndarray]


def as_complex(z: PointLike):
    """Complex value (or array) of a point-like argument."""
    if isinstance(z, UhpPoint):
        return z.z
    arr = np.asarray(z, dtype=complex)
    if np.any(arr.imag <= 0):
        raise DomainError("points must lie in the upper half-plane")
    return complex(arr) if arr.ndim == 0 else arr


@dataclass(frozen=True)
class MoebiusReal:
    """Real Moebius transformation (a b; c d) with ad - bc = 1, modulo sign."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        scale = max(1.0, abs(self.a * self.d) + abs(self.b * self.c))
        if abs(det - 1.0) > 1e-12 * scale:
            raise DomainError(f"MoebiusReal needs ad - bc = 1, got {det!r}")

    @classmethod
    def normalized(cls, a: float, b: float, c: float, d: float) -> "MoebiusReal":
        """Scale a matrix with positive determinant to determinant 1."""
        det = a * d - b * c
        if det <= 0:
            raise DomainError("matrix must have positive determinant")
        k = 1.0 / math.sqrt(det)
        return cls(a * k, b * k, c * k, d * k)

    @classmethod
    def identity(cls) -> "MoebiusReal":
        return cls(1.0, 0.0, 0.0, 1.0)

    def apply(self, z):
        z = as_complex(z)
        return (self.a * z + self.b) / (self.c * z + self.d)

    def inverse(self) -> "MoebiusReal":
        return MoebiusReal(self.d, -self.b, -self.c, self.a)

    def __matmul__(self, other: "MoebiusReal") -> "MoebiusReal":
        a = self.a * other.a + self.b * other.c
        b = self.a * other.b + self.b * other.d
        c = self.c * other.a + self.d * other.c
        d = self.c * other.b + self.d * other.d
        return MoebiusReal.normalized(a, b, c, d)

    def as_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    def __eq__(self, other) -> bool:
        if not isinstance(other, MoebiusReal):
            return NotImplemented
        m, n = self.as_array(), other.as_array()
        return bool(np.allclose(m, n, rtol=1e-12, atol=1e-12) or np.allclose(m, -n, rtol=1e-12, atol=1e-12))

    __hash__ = None  # float matrices modulo sign have no stable hash


@dataclass(frozen=True)
class GeodesicLine:
    """Image of the positive imaginary axis under ``conjugator``."""

    conjugator: MoebiusReal

    @property
    def endpoints(self) -> tuple[float, float]:
        """(image of 0, image of infinity); infinity is reported as math.inf."""
        m = self.conjugator
        start = m.b / m.d if m.d != 0 else math.inf
        end = m.a / m.c if m.c != 0 else math.inf
        return start, end

    def point(self, rho):
        """Point at signed arc length rho from conjugator(i)."""
        return self.conjugator.apply(1j * np.exp(np.asarray(rho, dtype=float)))


IMAG_AXIS = GeodesicLine(MoebiusReal.identity())


@dataclass(frozen=True)
class PolarCoords:
    """Hyperbolic polar coordinates; ``theta`` is None at the centre."""

    rho: float
    theta: Optional[float]


def u_invariant(z: PointLike, w: PointLike):
    """Point-pair invariant |z - w|^2 / (4 Im z Im w)."""
    z, w = as_complex(z), as_complex(w)
    dz = z - w
    return (dz.real ** 2 + dz.imag ** 2) / (4.0 * np.imag(z) * np.imag(w))


def cosh_dist(z: PointLike, w: PointLike):
    return 1.0 + 2.0 * u_invariant(z, w)


def dist(z: PointLike, w: PointLike):
    """Hyperbolic distance, 2 asinh(sqrt(u)) (stable as z -> w)."""
    return 2.0 * np.arcsinh(np.sqrt(u_invariant(z, w)))


def apply(m, z: PointLike):
    """Moebius action of a real or integral matrix on a point."""
    return m.apply(z)


def _dist_to_imag_axis(z):
    z = np.asarray(z, dtype=complex)
    y = z.imag
    a = np.abs(z)
    # cosh d - 1 = (|z| - y)/y = x^2 / (y (|z| + y))
    excess = z.real ** 2 / (y * (a + y))
    return 2.0 * np.arcsinh(np.sqrt(0.5 * excess))


def dist_to_line(z: PointLike, line: GeodesicLine = IMAG_AXIS):
    """Distance from z to a geodesic; the imaginary axis gives arccosh(|z|/Im z)."""
    zc = as_complex(z)
    pulled = line.conjugator.inverse().apply(zc)
    out = _dist_to_imag_axis(pulled)
    return float(out) if np.ndim(out) == 0 else out


def polar(z: PointLike) -> PolarCoords:
    """Polar coordinates centred at i.

    theta is the direction angle at i, shifted so that points iy with y > 1
    have theta = pi/2; it lies in [0, 2 pi).
    """
    zc = complex(as_complex(z))
    rho = float(dist(1j, zc))
    if rho == 0.0:
        return PolarCoords(0.0, None)
    zeta = (zc - 1j) / (zc + 1j)
    theta = (math.atan2(zeta.imag, zeta.real) + 0.5 * math.pi) % (2.0 * math.pi)
    return PolarCoords(rho, theta)


def cylindrical(z: PointLike) -> tuple[float, float]:
    """(log|z|, arg z) relative to the imaginary axis; sin(arg z) = Im z/|z|."""
    zc = complex(as_complex(z))
    return math.log(abs(zc)), math.atan2(zc.imag, zc.real)


# ---------------------------------------------------------------------------
# Quadrature along geodesics and horocycles
# ---------------------------------------------------------------------------

def geodesic_quadrature(line: GeodesicLine, length: float, n: int, start: float = 0.0):
    """Gauss-Legendre nodes (complex array) and arc-length weights."""
    if length <= 0 or n < 2:
        raise DomainError("geodesic quadrature needs length > 0 and n >= 2")
    x, w = gauss_legendre(n)
    rho = start + 0.5 * length * (x + 1.0)
    return np.asarray(line.point(rho)), 0.5 * length * np.asarray(w)


def geodesic_nodes(line: GeodesicLine, length: float, n: int, start: float = 0.0):
    """List of (UhpPoint, weight) on {conjugator(e^rho i): rho in [start, start+length]}."""
    pts, wts = geodesic_quadrature(line, length, n, start)
    return [(UhpPoint.from_complex(p), float(wt)) for p, wt in zip(pts, wts)]


def _panel_geodesic(f, line, a, b, order):
    pts, wts = geodesic_quadrature(line, b - a, order, a)
    return np.sum(wts * f(pts))


def integrate_geodesic(f: Callable[[np.ndarray], np.ndarray], line: GeodesicLine, length: float,
                       tol: float = 1e-10, order: int = 16, start: float = 0.0,
                       max_panels: int = 256):
    """Integral of f over an arc of a geodesic by Gauss-Legendre panel doubling.

    Returns (value, estimated error).
    """
    panels = 1
    prev = _panel_geodesic(f, line, start, start + length, order)
    while panels < max_panels:
        panels *= 2
        edges = start + length * np.arange(panels + 1) / panels
        cur = sum(_panel_geodesic(f, line, edges[k], edges[k + 1], order) for k in range(panels))
        err = abs(cur - prev)
        if err <= tol * max(1.0, abs(cur)):
            return cur, err
        prev = cur
    raise ConvergenceError("geodesic quadrature did not converge")


def horocycle_quadrature(a: float, n: int):
    """Midpoint nodes x_k + ia, x_k = (k + 1/2)/n, with Euclidean weights 1/n.

    The integrands used here are 1-periodic in x, so this rule converges
    geometrically.
    """
    if a <= 0 or n < 1:
        raise DomainError("horocycle quadrature needs a > 0 and n >= 1")
    x = (np.arange(n) + 0.5) / n
    return x + 1j * a, np.full(n, 1.0 / n)


def horocycle_nodes(a: float, n: int):
    pts, wts = horocycle_quadrature(a, n)
    return [(UhpPoint.from_complex(p), float(wt)) for p, wt in zip(pts, wts)]


def integrate_horocycle(f: Callable[[np.ndarray], np.ndarray], a: float, tol: float = 1e-10,
                        n0: int = 8, max_n: int = 4096):
    """Integral of f(x + ia) dx over [0, 1] with node doubling. Returns (value, error)."""
    n = n0
    pts, wts = horocycle_quadrature(a, n)
    prev = np.sum(wts * f(pts))
    while n < max_n:
        n *= 3  # odd refinement factor keeps previous midpoints as nodes
        pts, wts = horocycle_quadrature(a, n)
        cur = np.sum(wts * f(pts))
        err = abs(cur - prev)
        if err <= tol * max(1.0, abs(cur)):
            return cur, err
        prev = cur
    raise ConvergenceError("horocycle quadrature did not converge")


def laplacian_fd(f: Callable[[np.ndarray], np.ndarray], z: PointLike, h: float = 1e-3):
    """Five-point approximation of -y^2 (f_xx + f_yy) at z.

    ``f`` receives a complex array of the five stencil points.
    """
    zc = complex(as_complex(z))
    pts = np.array([zc, zc + h, zc - h, zc + 1j * h, zc - 1j * h])
    v = np.asarray(f(pts))
    lap = (v[1] + v[2] + v[3] + v[4] - 4.0 * v[0]) / (h * h)
    return -(zc.imag ** 2) * lap, v[0]
