"""Resolvent diagnostics: Stieltjes samples, Schur-complement decompositions
and residual checks of the exact resolvent identities.

Minor resolvents are obtained by an independent dense inverse of each
deleted matrix, never by rank-one updates of the full resolvent, so every
identity compares two genuinely different computations.
"""

import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from . import semicircle
from .semicircle import UpperHalfPoint


@dataclass(frozen=True)
class StieltjesSample:
    z: UpperHalfPoint
    m_n: complex
    m_n_prime: complex
    s: complex

    @property
    def lambda_n(self):
        return self.m_n - self.s


@dataclass(frozen=True)
class EpsilonDecomposition:
    """Schur-complement error terms of row ``j`` (0-based).

    ``sign_convention`` records that the combined error entering the
    self-consistency equation is eps1 - eps2 - eps3 - eps4 (see
    :meth:`combined`).
    """

    j: int
    eps1: complex
    eps2: complex
    eps3: complex
    eps4: complex
    eta1: complex
    eta2: complex
    eta3: complex
    R_jj: complex
    minor_trace: complex
    sign_convention: str = "eps1-eps2-eps3-eps4"

    @property
    def combined(self):
        return self.eps1 - self.eps2 - self.eps3 - self.eps4


def _as_z(z):
    if isinstance(z, UpperHalfPoint):
        return z.z
    z = complex(z)
    if z.imag <= 0:
        raise ValueError(f"need Im z > 0, got {z}")
    return z


def load_z_grid(path=None):
    """z-points of the identity suite, from the packaged manifest by default."""
    if path is None:
        text = resources.files("wignerlab").joinpath("data/identity_grid.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return [complex(u, v) for u, v in json.loads(text)["points"]]


def resolvent(W, z):
    """Dense resolvent (W - z I)^(-1)."""
    z = _as_z(z)
    W = np.asarray(W, dtype=float)
    return np.linalg.inv(W - z * np.eye(W.shape[0]))


def resolvent_diag(W, z):
    return np.diag(resolvent(W, z)).copy()


def resolvent_diag_eigen(W, z):
    """Diagonal of the resolvent through the eigendecomposition,
    R_jj = sum_q u_jq^2 / (lambda_q - z)."""
    z = _as_z(z)
    lam, U = np.linalg.eigh(np.asarray(W, dtype=float))
    return (U**2) @ (1.0 / (lam - z))


def stieltjes_of_spectrum(S, z, normalizer=None):
    """m_n(z), m_n'(z) and s(z) for a spectrum (mass 1/normalizer per eigenvalue)."""
    zc = _as_z(z)
    n = normalizer or S.n
    inv = 1.0 / (S.lambdas - zc)
    return StieltjesSample(
        z=UpperHalfPoint.from_complex(zc),
        m_n=complex(np.sum(inv) / n),
        m_n_prime=complex(np.sum(inv * inv) / n),
        s=semicircle.stieltjes(zc),
    )


def minor_resolvents(W, z):
    """Stack of R^(j) = (W^(j) - z I)^(-1) for every row j, shape (n, n-1, n-1)."""
    z = _as_z(z)
    W = np.asarray(W, dtype=float)
    n = W.shape[0]
    idx = np.array([np.delete(np.arange(n), j) for j in range(n)]).reshape(n, n - 1)
    minors = W[idx[:, :, None], idx[:, None, :]]
    return np.linalg.inv(minors - z * np.eye(n - 1)), idx


@dataclass
class RowTerms:
    """All per-row quantities of one (W, z) pair, vectorized over rows."""

    z: complex
    normalizer: int
    R: np.ndarray
    minor_trace: np.ndarray
    eps1: np.ndarray
    eps2: np.ndarray
    eps3: np.ndarray
    eps4: np.ndarray
    eta1: np.ndarray
    eta2: np.ndarray
    eta3: np.ndarray
    quad_sq: np.ndarray = field(repr=False)

    @property
    def diag(self):
        return np.diag(self.R)

    @property
    def m_n(self):
        return np.trace(self.R) / self.normalizer

    @property
    def m_n_prime(self):
        return np.trace(self.R @ self.R) / self.normalizer

    @property
    def combined(self):
        return self.eps1 - self.eps2 - self.eps3 - self.eps4


def row_terms(W, z, normalizer=None):
    """Compute eps_{j1..4}, eta_{j1..3} for every row of ``W``.

    Raw entries are X_jk = sqrt(normalizer) W_jk; traces are divided by
    ``normalizer`` (the dimension of the parent matrix for minors).
    """
    z = _as_z(z)
    W = np.asarray(W, dtype=float)
    n = W.shape[0]
    N = normalizer or n
    R = resolvent(W, z)
    Rm, idx = minor_resolvents(W, z)
    w = W[np.arange(n)[:, None], idx]                   # off-diagonal row entries
    w2 = w * w
    Rm2 = Rm @ Rm
    dRm = np.diagonal(Rm, axis1=1, axis2=2)
    dRm2 = np.diagonal(Rm2, axis1=1, axis2=2)
    tr_m = dRm.sum(axis=1)
    tr_m2 = dRm2.sum(axis=1)
    quad = np.einsum("jk,jkl,jl->j", w, Rm, w)         # (1/N) sum_{k,l} X X R^(j)
    quad_sq = np.einsum("jk,jkl,jl->j", w, Rm2, w)
    diag_part = np.sum(w2 * dRm, axis=1)
    diag_part2 = np.sum(w2 * dRm2, axis=1)
    return RowTerms(
        z=z,
        normalizer=N,
        R=R,
        minor_trace=tr_m,
        eps1=np.diag(W).astype(complex),
        eps2=quad - diag_part,
        eps3=diag_part - tr_m / N,
        eps4=(tr_m - np.trace(R)) / N,
        eta1=tr_m2 / N,
        eta2=quad_sq - diag_part2,
        eta3=diag_part2 - tr_m2 / N,
        quad_sq=quad_sq,
    )


def epsilon_decomposition(W, z, j, normalizer=None):
    t = row_terms(W, z, normalizer)
    return EpsilonDecomposition(
        j=int(j),
        eps1=complex(t.eps1[j]), eps2=complex(t.eps2[j]),
        eps3=complex(t.eps3[j]), eps4=complex(t.eps4[j]),
        eta1=complex(t.eta1[j]), eta2=complex(t.eta2[j]), eta3=complex(t.eta3[j]),
        R_jj=complex(t.R[j, j]), minor_trace=complex(t.minor_trace[j]),
    )


def _rel(diff, scale):
    diff = np.abs(diff)
    scale = np.asarray(scale, dtype=float)
    out = np.where(scale > 0, diff / np.where(scale > 0, scale, 1.0), diff)
    return out


def identity_residuals(W, z, removed=0, normalizer=None):
    """Relative residuals of the exact identities at one z.

    Each residual is |lhs - rhs| divided by the sum of magnitudes of the
    terms that enter it. ``removed`` is |J| when ``W`` is a minor of a
    matrix of dimension ``normalizer``. Returns ``{name: (residual, j)}``
    with ``j`` the worst row (or -1 for row-free identities).
    """
    t = row_terms(W, z, normalizer)
    zc = t.z
    N = t.normalizer
    d = t.diag
    m = t.m_n
    s = semicircle.stieltjes(zc)
    zm = zc + m
    eh = t.combined
    T_hat = np.sum(eh * d) / N
    lam = m - s
    shift = removed / N
    out = {}

    def put(name, res, row=True):
        res = np.atleast_1d(res)
        k = int(np.argmax(res))
        out[name] = (float(res[k]), k if row else -1)

    # (a) R_jj = -1/(z+m) + eps_hat R_jj / (z+m)
    rhs = -1.0 / zm + eh * d / zm
    put("a_self_consistency", _rel(d - rhs, np.abs(d) + 1 / abs(zm) + np.abs(eh * d) / abs(zm)))
    # (b) m^2 + z m + 1 = T_hat + |J|/n
    put("b_quadratic", _rel(m * m + zc * m + 1 - T_hat - shift,
                            abs(m) ** 2 + abs(zc * m) + 1 + np.sum(np.abs(eh * d)) / N + shift), row=False)
    # (c) Lambda (z + m + s) = T_hat + |J|/n
    put("c_lambda", _rel(lam * (zc + m + s) - T_hat - shift,
                         (abs(m) + abs(s)) * abs(zc + m + s) + np.sum(np.abs(eh * d)) / N + shift), row=False)
    # (d) Tr R - Tr R^(j) = [R^2]_jj / R_jj
    R2 = t.R @ t.R
    dR2 = np.diag(R2)
    tr = np.trace(t.R)
    put("d_trace_difference", _rel(tr - t.minor_trace - dR2 / d,
                                   abs(tr) + np.abs(t.minor_trace) + np.abs(dR2 / d)))
    # (e) eps4 = -(1/n)(1 + eta1 + eta2 + eta3) R_jj
    eta_sum = 1 + t.eta1 + t.eta2 + t.eta3
    put("e_eps4_eta", _rel(t.eps4 + eta_sum * d / N,
                           (abs(tr) + np.abs(t.minor_trace)) / N
                           + (1 + np.abs(t.eta1) + np.abs(t.eta2) + np.abs(t.eta3)) * np.abs(d) / N))
    # (f) (1/n) sum eps4 R_jj = -(1/n) m_n'
    mp = np.trace(R2) / N
    put("f_mean_eps4", _rel(np.sum(t.eps4 * d) / N + mp / N,
                            np.sum(np.abs(t.eps4 * d)) / N + abs(mp) / N), row=False)
    # the eps4 quadratic-form representation behind (d) and (e)
    put("schur_quadratic_form", _rel(tr - t.minor_trace - (1 + t.quad_sq) * d,
                                    abs(tr) + np.abs(t.minor_trace) + np.abs((1 + t.quad_sq) * d)))
    # Lambda as the root of Lambda^2 + sqrt(z^2-4) Lambda - (T_hat + |J|/n) = 0
    D = semicircle.sqrt_upper(zc * zc - 4)
    disc = semicircle.sqrt_upper(D * D + 4 * (T_hat + shift))
    roots = np.array([(-D + disc) / 2, (-D - disc) / 2])
    put("h_lambda_solved", float(np.min(np.abs(roots - lam))) / (abs(m) + abs(s) + abs(D) + abs(disc)), row=False)
    return out


@dataclass
class IdentityReport:
    """Worst residual per check with the location that produced it."""

    entries: dict = field(default_factory=dict)

    def record(self, name, residual, **location):
        cur = self.entries.get(name)
        if cur is None or residual > cur[0]:
            self.entries[name] = (float(residual), dict(location))

    def merge(self, other):
        for name, (res, loc) in other.entries.items():
            self.record(name, res, **loc)
        return self

    def max_residual(self, names=None):
        keys = names or self.entries.keys()
        return max(self.entries[k][0] for k in keys)

    def to_text(self):
        lines = []
        for name in sorted(self.entries):
            res, loc = self.entries[name]
            where = " ".join(f"{k}={v}" for k, v in loc.items())
            lines.append(f"{name}\t{res:.6e}\t{where}")
        return "\n".join(lines) + ("\n" if lines else "")


def identity_report(W, z_grid, report=None, **location):
    """Fold the identity residuals of ``W`` over ``z_grid`` into a report."""
    report = report if report is not None else IdentityReport()
    for z in z_grid:
        zc = _as_z(z)
        for name, (res, j) in identity_residuals(W, zc).items():
            report.record(name, res, n=W.shape[0], j=j, z=zc, **location)
    return report


# ---------------------------------------------------------------------------
# deterministic inequalities

class InequalityViolation(AssertionError):
    pass


def _excess(lhs, rhs, slack):
    """Amount by which lhs exceeds rhs beyond a relative slack (>= 0)."""
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    return float(np.max(np.maximum(lhs - rhs - slack * np.maximum(1.0, np.abs(rhs)), 0.0), initial=0.0))


def inequality_battery(W, z, normalizer=None, scales=(2, 4, 16), slack=1e-12):
    """Check the almost-sure resolvent inequalities for ``W`` at ``z``.

    Returns ``{name: excess}``; any positive excess is a violation. Covered:
    |eps_j4| <= 1/(n v); the norm bounds with v = Im z

        (1/n) sum_{k,l} |R_kl|^2 = Im m_n / v          frobenius_equality
        sum_k |R_kj|^2 <= Im R_jj / v                  column_norm
        sum_k |[R^2]_kj|^2 <= Im R_jj / v^3            column_norm_sq
        (1/n) sum_j |[R^2]_jj|^2 <= Im m_n / v^3       diag_square
        (1/n) sum_{k,l} |[R^2]_kl|^2 <= Im m_n / v^3   frobenius_square

    and |R_jj(u + iv/s)| <= s |R_jj(u + iv)| for each scale s.
    """
    zc = _as_z(z)
    v = zc.imag
    W = np.asarray(W, dtype=float)
    N = normalizer or W.shape[0]
    R = resolvent(W, zc)
    R2 = R @ R
    dR = np.diag(R)
    im_m = np.trace(R).imag / N
    out = {}
    if W.shape[0] > 1:
        Rm, _ = minor_resolvents(W, zc)
        eps4 = (np.trace(Rm, axis1=1, axis2=2) - np.trace(R)) / N
        out["eps4_bound"] = _excess(np.abs(eps4), 1.0 / (N * v), slack)
    lhs1 = np.sum(np.abs(R) ** 2) / N
    rhs1 = im_m / v
    out["frobenius_equality"] = float(max(abs(lhs1 - rhs1) - slack * max(1.0, rhs1), 0.0))
    out["column_norm"] = _excess(np.sum(np.abs(R) ** 2, axis=0), dR.imag / v, slack)
    out["column_norm_sq"] = _excess(np.sum(np.abs(R2) ** 2, axis=0), dR.imag / v**3, slack)
    out["diag_square"] = _excess(np.sum(np.abs(np.diag(R2)) ** 2) / N, im_m / v**3, slack)
    out["frobenius_square"] = _excess(np.sum(np.abs(R2) ** 2) / N, im_m / v**3, slack)
    for s in scales:
        low = np.diag(resolvent(W, complex(zc.real, v / s)))
        out[f"scaling_s{s}"] = _excess(np.abs(low), s * np.abs(dR), slack)
    return out
