"""PSL(2, Z): elements, Frobenius-ball enumeration, coset representatives for
the stabilisers of a cusp, a closed geodesic and an elliptic point, and the
standard fixtures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import DomainError, ResourceError
from .hyperbolic_geometry import GeodesicLine, MoebiusReal, UhpPoint, as_complex, dist_to_line

__all__ = [
    "GroupElement",
    "ElementBatch",
    "HyperbolicClassData",
    "EllipticPointData",
    "CuspData",
    "enumerate_elements",
    "element_ball",
    "parabolic_cosets",
    "hyperbolic_cosets",
    "hyperbolic_window_batch",
    "elliptic_cosets",
    "elliptic_coset_batch",
    "standard_fixtures",
    "reduce_to_fundamental_domain",
    "MAX_ELEMENTS",
    "ANCHOR",
]

MAX_ELEMENTS = 12_000_000
"""Cardinality cap for Frobenius-ball enumerations."""

MAX_SET_ELEMENTS = 2_000_000
"""Cap for the object-level :func:`enumerate_elements` API."""

ANCHOR = 2j
"""Base point with trivial stabiliser used for coset keys."""


def _canonical(a: int, b: int, c: int, d: int) -> tuple[int, int, int, int]:
    for v in (c, d, a):
        if v != 0:
            if v < 0:
                return -a, -b, -c, -d
            break
    return a, b, c, d


@dataclass(frozen=True, order=True)
class GroupElement:
    """Element of PSL(2, Z), stored with canonical sign.

    The first nonzero entry of (c, d, a) is positive.
    """

    c: int
    d: int
    a: int
    b: int

    def __init__(self, a: int, b: int, c: int, d: int):
        a, b, c, d = int(a), int(b), int(c), int(d)
        if a * d - b * c != 1:
            raise DomainError(f"({a},{b};{c},{d}) does not have determinant 1")
        a, b, c, d = _canonical(a, b, c, d)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    def __repr__(self) -> str:
        return f"GroupElement({self.a}, {self.b}, {self.c}, {self.d})"

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return self.a, self.b, self.c, self.d

    @property
    def trace(self) -> int:
        return self.a + self.d

    @property
    def frobenius2(self) -> int:
        return self.a ** 2 + self.b ** 2 + self.c ** 2 + self.d ** 2

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return GroupElement(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> "GroupElement":
        return GroupElement(self.d, -self.b, -self.c, self.a)

    def power(self, n: int) -> "GroupElement":
        base = self if n >= 0 else self.inverse()
        out = GroupElement(1, 0, 0, 1)
        for _ in range(abs(n)):
            out = out @ base
        return out

    def apply(self, z):
        z = as_complex(z)
        return (self.a * z + self.b) / (self.c * z + self.d)

    def as_moebius(self) -> MoebiusReal:
        return MoebiusReal(float(self.a), float(self.b), float(self.c), float(self.d))

    def is_identity(self) -> bool:
        return self.entries == (1, 0, 0, 1)


IDENTITY = GroupElement(1, 0, 0, 1)
S = GroupElement(0, -1, 1, 0)
T = GroupElement(1, 1, 0, 1)


@dataclass(frozen=True)
class ElementBatch:
    """Columnar array of PSL(2, Z) elements (canonical signs, sorted)."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray

    def __len__(self) -> int:
        return int(self.a.shape[0])

    def apply(self, z: complex) -> np.ndarray:
        z = complex(z)
        return (self.a * z + self.b) / (self.c * z + self.d)

    def take(self, idx) -> "ElementBatch":
        return ElementBatch(self.a[idx], self.b[idx], self.c[idx], self.d[idx])

    def left_multiply(self, g: GroupElement) -> "ElementBatch":
        a, b, c, d = g.entries
        na = a * self.a + b * self.c
        nb = a * self.b + b * self.d
        nc = c * self.a + d * self.c
        nd = c * self.b + d * self.d
        return _canonical_batch(na, nb, nc, nd)

    def elements(self) -> list[GroupElement]:
        return [GroupElement(int(a), int(b), int(c), int(d))
                for a, b, c, d in zip(self.a, self.b, self.c, self.d)]

    def keys(self) -> np.ndarray:
        return np.stack([self.c, self.d, self.a, self.b], axis=1)


def _canonical_batch(a, b, c, d) -> ElementBatch:
    a, b, c, d = (np.asarray(v, dtype=np.int64) for v in (a, b, c, d))
    lead = np.where(c != 0, c, np.where(d != 0, d, a))
    sgn = np.where(lead < 0, -1, 1)
    return ElementBatch(a * sgn, b * sgn, c * sgn, d * sgn)


def _sorted_batch(batch: ElementBatch) -> ElementBatch:
    f2 = batch.a ** 2 + batch.b ** 2 + batch.c ** 2 + batch.d ** 2
    order = np.lexsort((batch.b, batch.a, batch.d, batch.c, f2))
    out = batch.take(order)
    for v in (out.a, out.b, out.c, out.d):
        v.setflags(write=False)
    return out


def _modinv(d: np.ndarray, c: np.ndarray) -> np.ndarray:
    """x with x d = 1 (mod c) for coprime arrays, c >= 1 (vectorised Euclid)."""
    r0, r1 = c.copy(), np.mod(d, c)
    s0, s1 = np.zeros_like(c), np.ones_like(c)
    while np.any(r1 != 0):
        nz = r1 != 0
        q = np.zeros_like(r0)
        q[nz] = r0[nz] // r1[nz]
        r0, r1 = np.where(nz, r1, r0), np.where(nz, r0 - q * r1, r1)
        s0, s1 = np.where(nz, s1, s0), np.where(nz, s0 - q * s1, s1)
    return np.mod(s0, c)


def _estimated_count(norm2: int) -> float:
    # number of elements with a^2+b^2+c^2+d^2 <= N is about 3N
    return 3.0 * norm2


@lru_cache(maxsize=8)
def element_ball(norm2: int) -> ElementBatch:
    """All elements with a^2 + b^2 + c^2 + d^2 <= ``norm2`` as a sorted batch."""
    N = int(norm2)
    if N < 2:
        raise DomainError("Frobenius bound must satisfy bound^2 >= 2")
    if _estimated_count(N) > MAX_ELEMENTS:
        raise ResourceError(f"Frobenius ball with norm^2 <= {N} exceeds the cap of {MAX_ELEMENTS} elements")
    rmax = int(math.isqrt(N - 1))
    cs, ds = [], []
    # pairs (c, d) with c > 0, gcd(c, d) = 1, c^2 + d^2 <= N - 1
    for c0 in range(1, rmax + 1, 256):
        c = np.arange(c0, min(rmax, c0 + 255) + 1, dtype=np.int64)
        dm = int(math.isqrt(max(0, N - 1 - int(c[0]) ** 2)))
        d = np.arange(-dm, dm + 1, dtype=np.int64)
        C, D = np.meshgrid(c, d, indexing="ij")
        keep = (C * C + D * D <= N - 1) & (np.gcd(C, D) == 1)
        cs.append(C[keep])
        ds.append(D[keep])
    c = np.concatenate(cs)
    d = np.concatenate(ds)
    a0 = _modinv(d, c)
    b0 = (a0 * d - 1) // c
    w2 = c * c + d * d
    M = N - w2
    p = a0 * c + b0 * d
    disc = np.sqrt(np.maximum(w2.astype(float) * M - 1.0, 0.0))
    kmin = np.ceil((-p - disc) / w2 - 1e-9).astype(np.int64)
    kmax = np.floor((-p + disc) / w2 + 1e-9).astype(np.int64)
    cnt = np.maximum(kmax - kmin + 1, 0)
    rep = np.repeat(np.arange(c.size), cnt)
    offs = np.arange(rep.size) - np.repeat(np.cumsum(cnt) - cnt, cnt)
    k = kmin[rep] + offs
    A = a0[rep] + k * c[rep]
    B = b0[rep] + k * d[rep]
    C = c[rep]
    D = d[rep]
    ok = A * A + B * B + C * C + D * D <= N
    A, B, C, D = A[ok], B[ok], C[ok], D[ok]
    # c = 0: (1, b; 0, 1) with 2 + b^2 <= N
    bm = int(math.isqrt(N - 2))
    bb = np.arange(-bm, bm + 1, dtype=np.int64)
    A = np.concatenate([np.ones_like(bb), A])
    B = np.concatenate([bb, B])
    C = np.concatenate([np.zeros_like(bb), C])
    D = np.concatenate([np.ones_like(bb), D])
    return _sorted_batch(ElementBatch(A, B, C, D))


def _norm2_from_bound(bound: float) -> int:
    if bound < 1:
        raise DomainError("bound must be >= 1")
    return int(math.floor(bound * bound + 1e-9))


def enumerate_elements(bound: float, cap: int = MAX_SET_ELEMENTS) -> tuple[GroupElement, ...]:
    """All elements with Frobenius norm at most ``bound``.

    Returned as a canonically sorted tuple without duplicates (identity first).
    Raises ResourceError when the expected cardinality exceeds ``cap``.
    """
    N = _norm2_from_bound(bound)
    if N < 2:
        return ()
    if _estimated_count(N) > cap:
        raise ResourceError(f"enumeration with bound {bound} exceeds the cap of {cap} elements")
    return tuple(element_ball(N).elements())


def radius_of_bound(bound: float) -> float:
    """Hyperbolic radius R of the ball {eta : d(i, eta i) <= R} matching ``bound``.

    cosh d(i, eta i) = (a^2 + b^2 + c^2 + d^2)/2.
    """
    return math.acosh(max(1.0, bound * bound / 2.0))


def ball_for_radius(radius: float) -> ElementBatch:
    """Smallest enumerated ball containing every eta with d(i, eta i) <= radius."""
    N = int(math.floor(2.0 * math.cosh(radius) * (1.0 + 1e-12))) + 1
    return element_ball(max(N, 2))


# ---------------------------------------------------------------------------
# Stabiliser data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HyperbolicClassData:
    gamma: GroupElement
    trace: int
    length: float
    scaling: MoebiusReal
    axis: GeodesicLine

    @classmethod
    def from_element(cls, g: GroupElement) -> "HyperbolicClassData":
        t = g.trace
        if abs(t) <= 2:
            raise DomainError("element is not hyperbolic")
        length = 2.0 * math.acosh(abs(t) / 2.0)
        a, b, c, d = g.entries
        root = math.sqrt(t * t - 4.0)
        fixed = [((a - d) + root) / (2.0 * c), ((a - d) - root) / (2.0 * c)]
        # attracting fixed point has |c z + d| > 1
        attr = max(fixed, key=lambda z: abs(c * z + d))
        rep = min(fixed, key=lambda z: abs(c * z + d))
        if attr > rep:
            sig0 = MoebiusReal.normalized(attr, rep, 1.0, 1.0)
        else:
            sig0 = MoebiusReal.normalized(attr, -rep, 1.0, -1.0)
        # rescale so that sigma(i) is the foot of the perpendicular from i
        kappa = abs(sig0.inverse().apply(1j))
        root_k = math.sqrt(kappa)
        sigma = sig0 @ MoebiusReal(root_k, 0.0, 0.0, 1.0 / root_k)
        return cls(g, t, length, sigma, GeodesicLine(sigma))

    def conjugated(self) -> np.ndarray:
        """sigma^{-1} gamma sigma as a float matrix."""
        s = self.scaling
        return s.inverse().as_array() @ np.array(self.gamma.entries, float).reshape(2, 2) @ s.as_array()

    def log_modulus(self, z) -> np.ndarray:
        """log |sigma^{-1} z|, the coordinate along the axis."""
        return np.log(np.abs(self.scaling.inverse().apply(z)))


@dataclass(frozen=True)
class EllipticPointData:
    w: UhpPoint
    order: int
    scaling: MoebiusReal
    generator: Optional[GroupElement]

    def __post_init__(self):
        if self.order < 1:
            raise DomainError("order must be >= 1")
        if self.order > 1:
            if self.generator is None or not self.generator.power(self.order).is_identity():
                raise DomainError("generator^order must be the identity")

    @classmethod
    def at(cls, w, order: int = 1, generator: Optional[GroupElement] = None) -> "EllipticPointData":
        wc = complex(as_complex(w))
        y = wc.imag
        sig = MoebiusReal(math.sqrt(y), wc.real / math.sqrt(y), 0.0, 1.0 / math.sqrt(y))
        return cls(UhpPoint.from_complex(wc), order, sig, generator)

    def stabilizer(self) -> list[GroupElement]:
        if self.order == 1:
            return [IDENTITY]
        return [self.generator.power(j) for j in range(self.order)]


@dataclass(frozen=True)
class CuspData:
    cusp: float
    scaling: MoebiusReal
    width: float
    generator: GroupElement = field(default=T)


def standard_fixtures() -> tuple[HyperbolicClassData, EllipticPointData, EllipticPointData, CuspData]:
    """gamma = (2,1;1,1), elliptic points i and e^{i pi/3}, cusp infinity."""
    hyp = HyperbolicClassData.from_element(GroupElement(2, 1, 1, 1))
    ell_i = EllipticPointData.at(1j, 2, S)
    rho = complex(0.5, math.sqrt(3.0) / 2.0)
    ell_rho = EllipticPointData.at(rho, 3, T @ S)
    cusp = CuspData(math.inf, MoebiusReal.identity(), 1.0)
    return hyp, ell_i, ell_rho, cusp


def reduce_to_fundamental_domain(z: complex, max_steps: int = 10_000) -> tuple[complex, GroupElement]:
    """Standard reduction: returns (z', g) with z' = g z in |x| <= 1/2, |z| >= 1."""
    zc = complex(as_complex(z))
    g = IDENTITY
    for _ in range(max_steps):
        n = math.floor(zc.real + 0.5)
        if n:
            zc -= n
            g = GroupElement(1, -n, 0, 1) @ g
        if abs(zc) < 1.0 - 1e-15:
            zc = -1.0 / zc
            g = S @ g
        else:
            return zc, g
    raise DomainError("reduction did not terminate")


# ---------------------------------------------------------------------------
# Coset representatives
# ---------------------------------------------------------------------------

def parabolic_cosets(Q: int, d_max: Optional[int] = None) -> list[GroupElement]:
    """Representatives of Gamma_infinity \\ Gamma with 0 <= c <= Q and |d| <= d_max.

    One representative per coprime pair (c, d) modulo (c, d) ~ (-c, -d); the
    pair (0, 1) gives the identity.  For c >= 1 the top row is chosen with
    0 <= a < c.  ``d_max`` defaults to Q.
    """
    if Q < 1:
        raise DomainError("Q must be >= 1")
    dm = Q if d_max is None else int(d_max)
    out = [IDENTITY]
    for c in range(1, Q + 1):
        d = np.arange(-dm, dm + 1, dtype=np.int64)
        d = d[np.gcd(d, c) == 1]
        if c == 1:
            a = np.zeros_like(d)
        else:
            a = _modinv(d, np.full_like(d, c))
        b = (a * d - 1) // c
        out.extend(GroupElement(int(ai), int(bi), c, int(di)) for ai, bi, di in zip(a, b, d))
    return out


def _window_mask(t: np.ndarray, length: float) -> np.ndarray:
    eps = 1e-12 * length
    return (t >= -eps) & (t < length - eps)


def hyperbolic_window_batch(data: HyperbolicClassData, batch: ElementBatch) -> ElementBatch:
    """Members of ``batch`` that already lie in the reduction window."""
    t = data.log_modulus(batch.apply(ANCHOR))
    return batch.take(np.nonzero(_window_mask(t, data.length))[0])


def _reduce_hyperbolic(data: HyperbolicClassData, batch: ElementBatch) -> ElementBatch:
    t = data.log_modulus(batch.apply(ANCHOR))
    n = np.floor(t / data.length).astype(np.int64)
    # exact integer powers gamma^{-n}
    parts = []
    for nv in np.unique(n):
        sel = np.nonzero(n == nv)[0]
        sub = batch.take(sel)
        if nv != 0:
            sub = sub.left_multiply(data.gamma.power(-int(nv)))
        parts.append(sub)
    red = ElementBatch(*(np.concatenate([getattr(p, f) for p in parts]) for f in "abcd"))
    # tie handling: push values at the upper edge down by one period
    t2 = data.log_modulus(red.apply(ANCHOR))
    hi = t2 >= data.length * (1.0 - 1e-12)
    if np.any(hi):
        fix = red.take(np.nonzero(hi)[0]).left_multiply(data.gamma.inverse())
        keep = red.take(np.nonzero(~hi)[0])
        red = ElementBatch(*(np.concatenate([getattr(keep, f), getattr(fix, f)]) for f in "abcd"))
    lo = t2 < -1e-12 * data.length
    if np.any(lo & ~hi):
        # recompute on the reduced set (rare)
        t3 = data.log_modulus(red.apply(ANCHOR))
        bad = t3 < -1e-12 * data.length
        fix = red.take(np.nonzero(bad)[0]).left_multiply(data.gamma)
        keep = red.take(np.nonzero(~bad)[0])
        red = ElementBatch(*(np.concatenate([getattr(keep, f), getattr(fix, f)]) for f in "abcd"))
    return red


def _unique_batch(batch: ElementBatch) -> ElementBatch:
    keys = batch.keys()
    _, idx = np.unique(keys, axis=0, return_index=True)
    return _sorted_batch(batch.take(np.sort(idx)))


def hyperbolic_cosets(data: HyperbolicClassData, bound: float) -> list[GroupElement]:
    """One representative per coset Gamma_gamma \\ Gamma meeting the Frobenius ball.

    Each element is reduced so that log|sigma^{-1} eta z0| lies in [0, length),
    z0 = 2i, which makes the choice independent of the bound.
    """
    N = _norm2_from_bound(bound)
    red = _reduce_hyperbolic(data, element_ball(max(N, 2)))
    return _unique_batch(red).elements()


def _elliptic_keys(data: EllipticPointData, batch: ElementBatch) -> ElementBatch:
    """Lexicographically smallest member of each coset Gamma_w eta."""
    if data.order == 1:
        return batch
    cands = [batch.left_multiply(g) for g in data.stabilizer()]
    stack = np.stack([c.keys() for c in cands], axis=0)  # (order, n, 4) as (c, d, a, b)
    best = stack[0].copy()
    for j in range(1, data.order):
        cur = stack[j]
        less = np.zeros(best.shape[0], dtype=bool)
        undecided = np.ones(best.shape[0], dtype=bool)
        for col in range(4):
            lt = undecided & (cur[:, col] < best[:, col])
            gt = undecided & (cur[:, col] > best[:, col])
            less |= lt
            undecided &= ~(lt | gt)
        best[less] = cur[less]
    return ElementBatch(best[:, 2], best[:, 3], best[:, 0], best[:, 1])


def elliptic_coset_batch(data: EllipticPointData, batch: ElementBatch) -> ElementBatch:
    return _unique_batch(_elliptic_keys(data, batch))


def elliptic_cosets(data: EllipticPointData, bound: float) -> list[GroupElement]:
    """One representative per coset Gamma_w \\ Gamma meeting the Frobenius ball."""
    N = _norm2_from_bound(bound)
    return elliptic_coset_batch(data, element_ball(max(N, 2))).elements()


def axis_distance(data: HyperbolicClassData, z) -> np.ndarray:
    return dist_to_line(z, data.axis)
