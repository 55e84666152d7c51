"""Real symmetric Wigner ensembles and the truncate/center/rescale pipeline."""

import math
from dataclasses import dataclass, field

import numpy as np

from .rng import entry_uniforms

LAW_TAGS = ("gaussian", "rademacher", "uniform-scaled", "custom-discrete")
_SQRT3 = math.sqrt(3.0)


class DegenerateTruncationError(ValueError):
    pass


@dataclass(frozen=True)
class EntryLaw:
    """Distribution of a single matrix entry, mean 0 and variance 1.

    ``custom-discrete`` laws carry their atoms in ``values`` with weights
    ``probs``; the other tags take no parameters.
    """

    tag: str = "gaussian"
    values: tuple = ()
    probs: tuple = ()

    def __post_init__(self):
        if self.tag not in LAW_TAGS:
            raise ValueError(f"unknown entry law {self.tag!r}; expected one of {LAW_TAGS}")
        if self.tag == "custom-discrete":
            vals = np.asarray(self.values, dtype=float)
            probs = np.asarray(self.probs, dtype=float)
            if vals.shape != probs.shape or vals.size == 0:
                raise ValueError("custom-discrete law needs matching values and probs")
            if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-12:
                raise ValueError("custom-discrete probabilities must be >= 0 and sum to 1")
            mean = float(probs @ vals)
            var = float(probs @ vals**2) - mean**2
            if abs(mean) > 1e-12 or abs(var - 1.0) > 1e-12:
                raise ValueError(
                    f"custom-discrete law must have mean 0 and variance 1, got mean={mean}, var={var}"
                )
        elif self.values or self.probs:
            raise ValueError(f"law {self.tag!r} takes no parameters")

    @classmethod
    def parse(cls, text):
        """Parse ``gaussian`` or ``custom-discrete:v1@p1,v2@p2,...``."""
        tag, _, rest = text.partition(":")
        if tag != "custom-discrete":
            return cls(tag)
        pairs = [item.split("@") for item in rest.split(",") if item]
        return cls(tag, tuple(float(v) for v, _ in pairs), tuple(float(p) for _, p in pairs))

    def moment(self, k):
        """Absolute moment E|X|^k."""
        if self.tag == "gaussian":
            return 2 ** (k / 2) * math.gamma((k + 1) / 2) / math.sqrt(math.pi)
        if self.tag == "rademacher":
            return 1.0
        if self.tag == "uniform-scaled":
            return _SQRT3**k / (k + 1)
        return float(np.asarray(self.probs) @ np.abs(np.asarray(self.values)) ** k)

    @property
    def mu4(self):
        return self.moment(4)

    @property
    def mu8(self):
        return self.moment(8)

    @property
    def bound(self):
        """sup |X| over the support (inf for the Gaussian)."""
        if self.tag == "gaussian":
            return math.inf
        if self.tag == "rademacher":
            return 1.0
        if self.tag == "uniform-scaled":
            return _SQRT3
        return float(np.max(np.abs(self.values)))

    def truncated_moments(self, t):
        """Return (E X 1{|X|<=t}, E X^2 1{|X|<=t}) in closed form."""
        if t <= 0:
            return 0.0, 0.0
        if self.tag == "gaussian":
            phi = math.exp(-t * t / 2) / math.sqrt(2 * math.pi)
            return 0.0, math.erf(t / math.sqrt(2)) - 2 * t * phi
        if self.tag == "rademacher":
            return (0.0, 1.0) if t >= 1.0 else (0.0, 0.0)
        if self.tag == "uniform-scaled":
            if t >= _SQRT3:
                return 0.0, 1.0
            return 0.0, t**3 / (3 * _SQRT3)
        vals = np.asarray(self.values, dtype=float)
        probs = np.asarray(self.probs, dtype=float)
        keep = np.abs(vals) <= t
        return float(probs[keep] @ vals[keep]), float(probs[keep] @ vals[keep] ** 2)

    def transform(self, u1, u2):
        """Map two uniform arrays in [0, 1) to draws from this law."""
        if self.tag == "gaussian":
            # 1 - u1 lies in (0, 1], so the log is finite
            return np.sqrt(-2.0 * np.log1p(-u1)) * np.cos(2.0 * math.pi * u2)
        if self.tag == "rademacher":
            return np.where(u1 < 0.5, -1.0, 1.0)
        if self.tag == "uniform-scaled":
            return _SQRT3 * (2.0 * u1 - 1.0)
        cum = np.cumsum(self.probs)
        idx = np.searchsorted(cum, u1, side="right")
        return np.asarray(self.values, dtype=float)[np.minimum(idx, len(cum) - 1)]


@dataclass(frozen=True)
class WignerSpec:
    n: int
    law: EntryLaw = field(default_factory=EntryLaw)
    seed: int = 0
    D0: float = 2.0
    apply_pipeline: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.D0 <= 0:
            raise ValueError(f"D0 must be positive, got {self.D0}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass
class PipelineResult:
    x_hat: np.ndarray
    x_tilde: np.ndarray
    x_breve: np.ndarray
    sigma: np.ndarray
    mean_hat: float
    threshold: float


def check_symmetric(X):
    X = np.asarray(X)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {X.shape}")
    if not np.array_equal(X, X.T):
        raise ValueError("matrix is not exactly symmetric")
    return X


def sample_entries(spec):
    """Draw the unscaled symmetric matrix X for ``spec``.

    With ``apply_pipeline`` set, returns the standardized matrix X-breve
    truncated at ``D0 * n**0.25`` instead.
    """
    n = spec.n
    rows, cols = np.triu_indices(n)
    u1, u2 = entry_uniforms(spec.seed, rows, cols)
    X = np.empty((n, n))
    vals = spec.law.transform(u1, u2)
    X[rows, cols] = vals
    X[cols, rows] = vals
    if spec.apply_pipeline:
        return standardize_pipeline(X, spec.law, spec.D0).x_breve
    return X


def standardize_pipeline(X, law, c):
    """Truncate at ``c n^(1/4)``, recenter and rescale to unit variance.

    Returns X-hat, X-tilde = X-hat - E X-hat and X-breve = X-tilde / sigma with
    the moments of the truncated law computed in closed form.
    """
    X = check_symmetric(X)
    if c <= 0:
        raise ValueError(f"truncation constant must be positive, got {c}")
    n = X.shape[0]
    t = c * n**0.25
    m1, m2 = law.truncated_moments(t)
    var = m2 - m1 * m1
    if var <= 0:
        raise DegenerateTruncationError(
            f"truncation at {t:.6g} leaves the {law.tag} law with zero variance"
        )
    sigma_val = min(math.sqrt(var), 1.0)
    x_hat = np.where(np.abs(X) <= t, X, 0.0)
    x_tilde = x_hat - m1
    x_breve = x_tilde / sigma_val
    sigma = np.full((n, n), sigma_val)
    return PipelineResult(x_hat, x_tilde, x_breve, sigma, m1, t)


def breve_bound(law, c, n):
    """Constant D1 with |X-breve| <= D1 n^(1/4) for the given law."""
    t = c * n**0.25
    m1, m2 = law.truncated_moments(t)
    sigma = math.sqrt(m2 - m1 * m1)
    return (min(t, law.bound) + abs(m1)) / sigma / n**0.25


def assemble(X):
    """Wigner scaling W = X / sqrt(n)."""
    X = np.asarray(X, dtype=float)
    return X / math.sqrt(X.shape[0])


def minor(W, J):
    """Copy of ``W`` with the rows and columns in ``J`` (0-based) deleted."""
    W = np.asarray(W)
    n = W.shape[0]
    J = sorted(set(int(j) for j in J))
    if any(j < 0 or j >= n for j in J):
        raise IndexError(f"minor index out of range for n={n}: {J}")
    keep = np.setdiff1d(np.arange(n), J)
    return W[np.ix_(keep, keep)].copy()


def dump_matrix(X, path):
    X = np.asarray(X, dtype=float)
    with open(path, "w") as fh:
        fh.write(f"n={X.shape[0]}\n")
        for row in X:
            fh.write(" ".join(repr(float(x)) for x in row) + "\n")


def load_matrix(path):
    with open(path) as fh:
        header = fh.readline().strip()
        if not header.startswith("n="):
            raise ValueError(f"{path}: missing 'n=<n>' header")
        n = int(header[2:])
        rows = [line.split() for line in fh if line.strip()]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError(f"{path}: expected {n} rows of {n} values")
    return np.array([[float(x) for x in r] for r in rows])
