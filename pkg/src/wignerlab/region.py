"""The spectral window region, the Stieltjes error envelope, and the
smoothing-inequality bound with its contour decomposition."""

import math
from dataclasses import dataclass, field

import numpy as np

from . import semicircle
from .quadrature import adaptive_simpson, integrate_real_line
from .semicircle import UpperHalfPoint, gamma_distance

QUAD_TOL = 1e-8


@dataclass(frozen=True)
class RegionSpec:
    n: int
    A0: float = 1.0
    epsilon: float = None
    u_count: int = 33
    v_count: int = 12
    v_max: float = 4.0

    def __post_init__(self):
        if self.epsilon is None:
            object.__setattr__(self, "epsilon", semicircle.smoothing_params(self.n, self.A0).epsilon)
        if not 0 < self.epsilon < 0.5:
            raise ValueError(f"epsilon must lie in (0, 1/2), got {self.epsilon}")

    @property
    def v0(self):
        return self.A0 / self.n


@dataclass
class BoundBreakdown:
    integral_top: float
    integral_vertical: float
    term_c1v0: float
    term_c2eps: float
    constants: tuple
    x_star: float = math.nan
    profile: list = field(default_factory=list, repr=False)

    @property
    def total(self):
        return 2 * self.integral_top + self.term_c1v0 + self.term_c2eps + 2 * self.integral_vertical

    def as_dict(self):
        return {
            "integral_top": self.integral_top,
            "integral_vertical": self.integral_vertical,
            "term_c1v0": self.term_c1v0,
            "term_c2eps": self.term_c2eps,
            "C1": self.constants[0],
            "C2": self.constants[1],
            "x_star": self.x_star,
            "total": self.total,
        }


def lower_edge(u, spec):
    return spec.v0 / np.sqrt(gamma_distance(u))


def in_region(z, spec):
    z = complex(z.z if isinstance(z, UpperHalfPoint) else z)
    u, v = z.real, z.imag
    lim = 2.0 - spec.epsilon
    return bool(-lim <= u <= lim and v > 0 and v >= lower_edge(u, spec) * (1 - 1e-14))


def region_grid(spec):
    """Points of the region: u uniform on [-2+eps, 2-eps], v log-spaced from
    the lower edge v0/sqrt(gamma(u)) up to ``v_max``."""
    us = np.linspace(-2.0 + spec.epsilon, 2.0 - spec.epsilon, spec.u_count)
    pts = []
    for u in us:
        lo = lower_edge(u, spec)
        for v in np.geomspace(lo, max(spec.v_max, lo), spec.v_count):
            pts.append(UpperHalfPoint(float(u), float(v)))
    return pts


def region_margins(z, spec, constant=2.0):
    """Margins (lhs - rhs) of the two region inequalities
    |z^2 - 4| >= 2 max(gamma, v) and n v sqrt|z^2 - 4| >= constant * A0.

    The second holds with constant sqrt(2) on the whole region (|z - 2| >= gamma
    and |z + 2| >= 2 on the right half); with constant 2 it fails near the
    lower edge.
    """
    z = complex(z.z if isinstance(z, UpperHalfPoint) else z)
    a = abs(z * z - 4)
    g = float(gamma_distance(z.real))
    first = a - 2 * max(g, z.imag)
    second = spec.n * z.imag * math.sqrt(a) - constant * spec.A0
    return first, second


def envelope(z, n):
    """1/(n v^(3/4)) + 1/(n^(3/2) v^(3/2) |z^2 - 4|^(1/4))."""
    z = np.asarray(z.z if isinstance(z, UpperHalfPoint) else z, dtype=complex)
    v = z.imag
    return 1.0 / (n * v**0.75) + 1.0 / (n**1.5 * v**1.5 * np.abs(z * z - 4) ** 0.25)


def envelope_ratio(sample, n):
    """|mean Lambda_n| divided by the envelope at the sample's z."""
    return float(abs(sample.m_n - sample.s) / envelope(sample.z, n))


# ---------------------------------------------------------------------------
# smoothing bound

def _diff(S_F, S_G):
    return lambda z: S_F(z) - S_G(z)


def vertical_integral(S_F, S_G, x, v_low, V, tol=QUAD_TOL):
    """integral_{v_low}^{V} |S_F(x + iu) - S_G(x + iu)| du."""
    d = _diff(S_F, S_G)
    return float(np.real(adaptive_simpson(lambda u: np.abs(d(x + 1j * u)), v_low, V, tol=tol)))


def top_integral(S_F, S_G, V, tol=QUAD_TOL):
    """integral over the real line of |S_F(u + iV) - S_G(u + iV)|."""
    d = _diff(S_F, S_G)
    return float(np.real(integrate_real_line(lambda u: np.abs(d(u + 1j * V)), scale=V, tol=tol)))


def _golden_max(f, a, b, iters=40):
    invphi = (math.sqrt(5) - 1) / 2
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (c, fc) if fc > fd else (d, fd)


def smoothing_bound(S_F, params, C1=1.0, C2=1.0, V=4.0, S_G=semicircle.stieltjes,
                    grid_points=257, tol=QUAD_TOL):
    """Evaluate the four terms of the smoothing bound on Delta(F, G).

    total = 2 * top + C1 v0 + C2 eps^(3/2) + 2 * sup_x vertical(x), with
    vertical(x) integrated from v0/sqrt(2 - |x|) to V and x ranging over
    {x : 2 - |x| >= eps/2}. The sup is taken on a coarse grid and refined by
    golden-section search around the best grid point.
    """
    if V <= params.v0:
        raise ValueError("V must exceed v0")
    top = top_integral(S_F, S_G, V, tol)
    half = params.epsilon / 2
    xs = np.linspace(-2 + half, 2 - half, grid_points)

    def vert(x):
        return vertical_integral(S_F, S_G, x, params.v0 / math.sqrt(2 - abs(x)), V, tol)

    vals = np.array([vert(x) for x in xs])
    k = int(np.argmax(vals))
    x_star, best = float(xs[k]), float(vals[k])
    if vals.max() > 0:
        a = xs[max(k - 1, 0)]
        b = xs[min(k + 1, xs.size - 1)]
        xr, fr = _golden_max(vert, a, b)
        if fr > best:
            x_star, best = float(xr), float(fr)
    return BoundBreakdown(
        integral_top=top,
        integral_vertical=best,
        term_c1v0=C1 * params.v0,
        term_c2eps=C2 * params.epsilon**1.5,
        constants=(C1, C2),
        x_star=x_star,
        profile=list(zip(xs.tolist(), vals.tolist())),
    )


def calibrate_constants(breakdown, params, delta):
    """Smallest common C = C1 = C2 >= 0 with total >= delta."""
    gap = delta - 2 * breakdown.integral_top - 2 * breakdown.integral_vertical
    return max(0.0, gap / (params.v0 + params.epsilon**1.5))


@dataclass
class ContourTerms:
    bottom: complex
    top: complex
    left: complex
    right: complex

    @property
    def residual(self):
        return abs(self.bottom - (self.top + 1j * self.left - 1j * self.right))

    @property
    def truncation_gap(self):
        """|bottom - top + i*right|: what is lost by dropping the segment at -L."""
        return abs(self.bottom - self.top + 1j * self.right)


def contour_terms(S_F, S_G, x, v_prime, V, L, tol=QUAD_TOL):
    """The four segment integrals of (S_F - S_G) around the rectangle
    [-L, x] x [v', V].

    Cauchy's theorem gives bottom = top + i*left - i*right, where the
    vertical segments are parametrized by their imaginary part (dz = i du).
    """
    d = _diff(S_F, S_G)
    bottom = adaptive_simpson(lambda u: d(u + 1j * v_prime), -L, x, tol=tol)
    top = adaptive_simpson(lambda u: d(u + 1j * V), -L, x, tol=tol)
    left = adaptive_simpson(lambda u: d(-L + 1j * u), v_prime, V, tol=tol)
    right = adaptive_simpson(lambda u: d(x + 1j * u), v_prime, V, tol=tol)
    return ContourTerms(complex(bottom), complex(top), complex(left), complex(right))


def contour_check(S_F, S_G, x, v_prime, V, L, tol=QUAD_TOL):
    """Residual of the closed-contour identity for the rectangle at -L."""
    return contour_terms(S_F, S_G, x, v_prime, V, L, tol).residual


def left_segment_bound(tail_F, tail_G, v_prime, V, L):
    """Bound on |integral_{v'}^{V} (S_F - S_G)(-L + iu) du| from the tail
    probabilities P(|xi| > L/2), P(|eta| > L/2)."""
    per = lambda tail: tail / v_prime + 2.0 / L
    return (V - v_prime) * (per(tail_F) + per(tail_G))
