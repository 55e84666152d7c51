"""Spectra, empirical spectral distributions and Kolmogorov distances."""

from dataclasses import dataclass

import numpy as np

from . import semicircle
from .linalg import eigh_householder_ql


@dataclass(frozen=True)
class Spectrum:
    lambdas: np.ndarray

    def __post_init__(self):
        lam = np.sort(np.asarray(self.lambdas, dtype=float))
        if not np.all(np.isfinite(lam)):
            raise ValueError("spectrum contains non-finite values")
        object.__setattr__(self, "lambdas", lam)

    @property
    def n(self):
        return self.lambdas.size

    def esd(self, normalizer=None):
        """Step CDF with mass 1/normalizer per eigenvalue (default 1/n)."""
        return ESD(1.0 / (normalizer or self.n), self.lambdas)


@dataclass(frozen=True)
class ESD:
    weight: float
    atoms: np.ndarray

    def __post_init__(self):
        atoms = np.sort(np.asarray(self.atoms, dtype=float))
        object.__setattr__(self, "atoms", atoms)
        if self.weight <= 0 or self.mass > 1.0 + 1e-12:
            raise ValueError(f"invalid ESD: weight={self.weight}, atoms={atoms.size}")

    @property
    def mass(self):
        return self.weight * self.atoms.size

    def __call__(self, x):
        return self.weight * np.searchsorted(self.atoms, x, side="right")

    def stieltjes(self, z):
        """weight * sum 1/(atom - z), vectorized over ``z``."""
        z = np.asarray(z, dtype=complex)
        flat = z.ravel()
        out = np.empty(flat.shape, dtype=complex)
        step = max(1, 2_000_000 // max(1, self.atoms.size))
        for i in range(0, flat.size, step):
            chunk = flat[i:i + step]
            out[i:i + step] = self.weight * np.sum(
                1.0 / (self.atoms[None, :] - chunk[:, None]), axis=1
            )
        out = out.reshape(z.shape)
        return complex(out) if out.ndim == 0 else out


def eigenvalues(W, method="lapack", eigenvectors=False):
    """Ascending spectrum of a symmetric matrix.

    ``method="lapack"`` uses LAPACK's symmetric driver; ``"householder-ql"``
    runs the in-package Householder + implicit QL solver. With
    ``eigenvectors=True`` returns ``(Spectrum, V)``.
    """
    W = np.asarray(W, dtype=float)
    if not np.array_equal(W, W.T):
        raise ValueError("eigenvalues requires a symmetric matrix")
    if method == "lapack":
        if eigenvectors:
            w, V = np.linalg.eigh(W)
            return Spectrum(w), V
        return Spectrum(np.linalg.eigvalsh(W))
    if method == "householder-ql":
        if eigenvectors:
            w, V = eigh_householder_ql(W, eigenvectors=True)
            return Spectrum(w), V
        return Spectrum(eigh_householder_ql(W))
    raise ValueError(f"unknown eigen method {method!r}")


def _sorted_distance(atoms, weight, mass):
    g = semicircle.cdf(atoms)
    upper = weight * np.arange(1, atoms.size + 1)
    lower = upper - weight
    d = abs(mass - 1.0)
    if atoms.size:
        d = max(d, float(np.max(np.abs(upper - g))), float(np.max(np.abs(lower - g))))
    return d


def kolmogorov_distance(F):
    """Exact sup_x |F(x) - G(x)| for a step ESD against the semicircle.

    Between atoms F is constant and G monotone, so the sup is attained as a
    one-sided limit at an atom, or at +/- infinity when the ESD is defective.
    """
    return _sorted_distance(F.atoms, F.weight, F.mass)


def weighted_kolmogorov(sorted_atoms, weights):
    """Kolmogorov distance of a weighted step CDF with pre-sorted atoms."""
    g = semicircle.cdf(sorted_atoms)
    upper = np.cumsum(weights)
    lower = upper - weights
    mass = float(upper[-1]) if upper.size else 0.0
    return max(abs(mass - 1.0), float(np.max(np.abs(upper - g))), float(np.max(np.abs(lower - g))))


def esd_distance(F1, F2):
    """sup_x |F1(x) - F2(x)| between two step CDFs."""
    xs = np.union1d(F1.atoms, F2.atoms)
    if xs.size == 0:
        return 0.0
    return max(float(np.max(np.abs(F1(xs) - F2(xs)))), abs(F1.mass - F2.mass))


def mean_esd(spectra):
    """Pool replicate spectra into the Monte Carlo mean ESD."""
    spectra = list(spectra)
    if not spectra:
        raise ValueError("mean_esd needs at least one spectrum")
    n = spectra[0].n
    if any(s.n != n for s in spectra):
        raise ValueError("all spectra must share the same dimension")
    atoms = np.concatenate([s.lambdas for s in spectra])
    return ESD(1.0 / (n * len(spectra)), atoms)


def rigidity_profile(S):
    """Rows ``(j, gamma_nj, ratio_j)`` with j 1-based and

    ratio_j = |lambda_j - gamma_nj| / (min(j, n - j + 1)^(-1/3) n^(-2/3)).
    """
    n = S.n
    if n < 2:
        raise ValueError("rigidity profile needs n >= 2")
    j = np.arange(1, n + 1)
    gammas = semicircle.quantiles(j / n)
    scale = np.minimum(j, n - j + 1) ** (-1.0 / 3.0) * n ** (-2.0 / 3.0)
    ratio = np.abs(S.lambdas - gammas) / scale
    return [(int(k), float(g), float(r)) for k, g, r in zip(j, gammas, ratio)]


def dump_spectrum(S, path):
    with open(path, "w") as fh:
        for lam in S.lambdas:
            fh.write(repr(float(lam)) + "\n")


def load_spectrum(path):
    with open(path) as fh:
        return Spectrum(np.array([float(line) for line in fh if line.strip()]))
