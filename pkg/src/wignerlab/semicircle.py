"""Closed-form semicircle law on [-2, 2]: density, CDF, quantiles and
Stieltjes transform, plus the smoothing-inequality parameters."""

import math
from dataclasses import dataclass

import numpy as np

SMOOTHING_A = math.tan(3.0 * math.pi / 8.0)


@dataclass(frozen=True)
class UpperHalfPoint:
    u: float
    v: float

    def __post_init__(self):
        if not (math.isfinite(self.u) and math.isfinite(self.v)):
            raise ValueError(f"non-finite point {self.u}+{self.v}i")
        if self.v <= 0:
            raise ValueError(f"imaginary part must be positive, got v={self.v}")

    @property
    def z(self):
        return complex(self.u, self.v)

    @classmethod
    def from_complex(cls, z):
        return cls(float(z.real), float(z.imag))


@dataclass(frozen=True)
class SmoothingParams:
    a: float
    v0: float
    epsilon: float
    A0: float


def _check_finite(x):
    if not np.all(np.isfinite(x)):
        raise ValueError("input must be finite")


def density(x):
    """Semicircle density (1/2pi) sqrt(4 - x^2) on [-2, 2], zero outside."""
    x_arr = np.asarray(x, dtype=float)
    _check_finite(x_arr)
    out = np.sqrt(np.clip(4.0 - x_arr * x_arr, 0.0, None)) / (2.0 * math.pi)
    return float(out) if out.ndim == 0 else out


def cdf(x):
    """Semicircle distribution function G, clamped to [0, 1]."""
    x_arr = np.asarray(x, dtype=float)
    _check_finite(x_arr)
    t = np.clip(x_arr, -2.0, 2.0)
    g = 0.5 + t * np.sqrt(4.0 - t * t) / (4.0 * math.pi) + np.arcsin(t / 2.0) / math.pi
    g = np.clip(g, 0.0, 1.0)
    g = np.where(x_arr <= -2.0, 0.0, np.where(x_arr >= 2.0, 1.0, g))
    return float(g) if g.ndim == 0 else g


def quantile(p):
    """Inverse of :func:`cdf` on [0, 1].

    Bisection down to a 1e-13 bracket followed by one Newton step.
    """
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability outside [0, 1]: {p}")
    if p == 0.0:
        return -2.0
    if p == 1.0:
        return 2.0
    if p == 0.5:
        return 0.0
    lo, hi = -2.0, 2.0
    while hi - lo > 1e-13:
        mid = 0.5 * (lo + hi)
        if cdf(mid) < p:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    g = density(x)
    if g > 1e-8:
        step = (cdf(x) - p) / g
        if abs(step) < hi - lo + 1e-12:
            x -= step
    return min(max(x, -2.0), 2.0)


def sqrt_upper(w):
    """Square root on the branch with nonnegative imaginary part."""
    r = np.sqrt(np.asarray(w, dtype=complex))
    r = np.where(r.imag < 0, -r, r)
    return complex(r) if r.ndim == 0 else r


def stieltjes(z, derivative=False):
    """Stieltjes transform s(z) = (-z + sqrt(z^2 - 4)) / 2 of the semicircle.

    ``z`` may be an :class:`UpperHalfPoint`, a complex number, or an array of
    complex numbers with positive imaginary part. With ``derivative=True``
    returns ``(s, s')`` where ``s' = -s / sqrt(z^2 - 4)``.
    """
    if isinstance(z, UpperHalfPoint):
        z = z.z
    z_arr = np.asarray(z, dtype=complex)
    if np.any(z_arr.imag <= 0):
        raise ValueError("stieltjes transform needs Im z > 0")
    root = sqrt_upper(z_arr * z_arr - 4.0)
    # -2/(z + root) equals (-z + root)/2 (product of the two roots is 1) and
    # avoids cancellation for large |z|; |z + root| = 2/|s| >= 2
    s = -2.0 / (z_arr + root)
    if s.ndim == 0:
        s = complex(s)
    if not derivative:
        return s
    ds = -s / root
    return s, (complex(ds) if np.ndim(ds) == 0 else ds)


def smoothing_params(n, A0=1.0):
    """Parameters a, v0 = A0/n and epsilon = (2 a v0)^(2/3).

    ``a`` solves (1/pi) * integral_{|u|<=a} du / (1 + u^2) = 3/4, i.e.
    a = tan(3 pi / 8) = 1 + sqrt(2).
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if A0 <= 0:
        raise ValueError(f"A0 must be positive, got {A0}")
    v0 = A0 / n
    eps = (2.0 * SMOOTHING_A * v0) ** (2.0 / 3.0)
    return SmoothingParams(a=SMOOTHING_A, v0=v0, epsilon=eps, A0=float(A0))


def gamma_distance(u):
    """Distance |2 - |u|| of the abscissa to the nearer spectral edge."""
    return np.abs(2.0 - np.abs(u))


def shifted(sampler, shift):
    """Stieltjes transform of the law translated by ``shift``."""
    return lambda z: sampler(np.asarray(z, dtype=complex) - shift)


__all__ = [
    "SMOOTHING_A", "UpperHalfPoint", "SmoothingParams", "density", "cdf",
    "quantile", "sqrt_upper", "stieltjes", "smoothing_params",
    "gamma_distance", "shifted", "quantiles",
]


def quantiles(ps):
    """Vectorized :func:`quantile`."""
    ps = np.asarray(ps, dtype=float)
    if np.any((ps < 0) | (ps > 1)):
        raise ValueError("probabilities must lie in [0, 1]")
    lo = np.full(ps.shape, -2.0)
    hi = np.full(ps.shape, 2.0)
    for _ in range(56):
        mid = 0.5 * (lo + hi)
        below = cdf(mid) < ps
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    x = 0.5 * (lo + hi)
    g = density(x)
    safe = g > 1e-8
    step = np.where(safe, (cdf(x) - ps) / np.where(safe, g, 1.0), 0.0)
    x = np.where(np.abs(step) < 1e-12, x - step, x)
    x = np.where(ps == 0, -2.0, np.where(ps == 1, 2.0, x))
    return np.clip(x, -2.0, 2.0)
