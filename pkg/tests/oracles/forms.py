"""Orbit sums by binary quadratic forms, independent of the group code.

Points of the PSL(2,Z)-orbit of i (of rho) are the roots in H of the positive
definite forms [A, B, C] of discriminant -4 (-3), one point per form.  The
oriented geodesics in the orbit of the axis of (2,1;1,1) are the roots of the
forms of discriminant 5, one coset per form.  With
V = |A|z|^2 + B x + C| / (y sqrt|D|), the distance from z to the root point
has cosh d = V, and to the root geodesic sinh d = V.
"""

import math

import numpy as np


def _form_values(A, B, C, z, D):
    x, y = z.real, z.imag
    return np.abs(A * (x * x + y * y) + B * x + C) / (y * math.sqrt(abs(D)))


def definite_orbit(z: complex, D: int, X_max: float) -> np.ndarray:
    """Sorted cosh distances from z to the orbit points of disc D < 0, up to X_max."""
    x, y = z.real, z.imag
    rD = math.sqrt(-D)
    out = []
    A_max = int(X_max * rD / y) + 1
    for A in range(1, A_max + 1):
        # A (x + B/2A)^2 <= X y sqrt|D|
        half = 2.0 * A * math.sqrt(X_max * y * rD / A)
        lo, hi = math.floor(-2 * A * x - half) - 1, math.ceil(-2 * A * x + half) + 1
        B = np.arange(lo, hi + 1, dtype=np.int64)
        num = B * B - D
        B = B[num % (4 * A) == 0]
        C = (B * B - D) // (4 * A)
        X = _form_values(float(A), B.astype(float), C.astype(float), z, D)
        out.append(X[X <= X_max])
    return np.sort(np.concatenate(out))


def indefinite_orbit(z: complex, D: int, X_max: float) -> np.ndarray:
    """Sorted cosh distances from z to the geodesics of disc D > 0, up to X_max."""
    x, y = z.real, z.imag
    rD = math.sqrt(D)
    out = []
    X_max_cosh, X_max = X_max, math.sqrt(X_max * X_max - 1.0)
    A_max = int(rD * (2 * X_max + 1) / (2 * y)) + 2
    for A in list(range(-A_max, 0)) + list(range(1, A_max + 1)):
        r = rD / (2 * abs(A))
        reach = math.sqrt(2 * r * y * X_max + r * r)
        # centre c0 = -B / 2A within reach of x
        b1, b2 = -2 * A * (x - reach), -2 * A * (x + reach)
        lo, hi = math.floor(min(b1, b2)) - 1, math.ceil(max(b1, b2)) + 1
        B = np.arange(lo, hi + 1, dtype=np.int64)
        num = B * B - D
        B = B[num % (4 * A) == 0]
        C = (B * B - D) // (4 * A)
        X = np.sqrt(1.0 + _form_values(float(A), B.astype(float), C.astype(float), z, D) ** 2)
        out.append(X[X <= X_max_cosh])
    return np.sort(np.concatenate(out))
