"""Randomized verification suites shared by the CLI and the test-suite."""

import numpy as np

from . import semicircle
from .ensemble import (DegenerateTruncationError, EntryLaw, WignerSpec, assemble, minor,
                       sample_entries, standardize_pipeline)
from .region import RegionSpec, region_margins, region_grid
from .resolvent import IdentityReport, identity_report, inequality_battery, load_z_grid, row_terms
from .rng import derive_seed
from .spectral import ESD, esd_distance

IDENTITY_NAMES = (
    "a_self_consistency", "b_quadratic", "c_lambda", "d_trace_difference",
    "e_eps4_eta", "f_mean_eps4",
)

# three-point law with atoms beyond a small truncation level
SPARSE_LAW = EntryLaw("custom-discrete", (-2.0, 0.0, 2.0), (0.125, 0.75, 0.125))
BUILTIN_LAWS = (EntryLaw("gaussian"), EntryLaw("rademacher"), EntryLaw("uniform-scaled"), SPARSE_LAW)


def identity_suite(n_list=(4, 8, 16, 32), seeds=100, z_grid=None, law=None, master_seed=0):
    """Identity residuals over random draws: one report for the whole sweep."""
    z_grid = z_grid or load_z_grid()
    law = law or EntryLaw("gaussian")
    report = IdentityReport()
    for n in n_list:
        for k in range(seeds):
            seed = derive_seed(master_seed, n, k)
            W = assemble(sample_entries(WignerSpec(n, law=law, seed=seed)))
            identity_report(W, z_grid, report, seed=seed)
    return report


def zero_matrix_errors(n=6, z=1j):
    """Absolute deviations of the zero-matrix decomposition from its closed form."""
    W = np.zeros((n, n))
    t = row_terms(W, z)
    closed = {
        "R_jj": (t.diag, -1.0 / z),
        "eps1": (t.eps1, 0.0),
        "eps2": (t.eps2, 0.0),
        "eps3": (t.eps3, (n - 1) / (n * z)),
        "eps4": (t.eps4, 1.0 / (n * z)),
        "m_n": (t.m_n, -1.0 / z),
    }
    return {k: float(np.max(np.abs(np.asarray(a) - b))) for k, (a, b) in closed.items()}


class BatteryResult:
    """Worst excess and violation count per named check."""

    def __init__(self):
        self.worst = {}
        self.violations = {}

    def add(self, name, excess, **where):
        cur = self.worst.get(name)
        if cur is None or excess > cur[0]:
            self.worst[name] = (float(excess), where)
        self.violations[name] = self.violations.get(name, 0) + int(excess > 0)

    @property
    def failed(self):
        return sorted(k for k, v in self.violations.items() if v)


def merge_close_atoms(*atom_sets, tol):
    """Snap atoms closer than ``tol`` (chained) onto one representative.

    Eigenvalues carry a backward error of order eps * ||W||, so exactly tied
    eigenvalues of a matrix and its minor can come out in either order; the
    sup distance between step CDFs is discontinuous under such swaps.
    """
    union = np.sort(np.concatenate(atom_sets))
    if union.size == 0:
        return atom_sets
    starts = np.concatenate([[True], np.diff(union) > tol])
    reps = union[starts][np.cumsum(starts) - 1]
    return tuple(reps[np.searchsorted(union, a)] for a in atom_sets)


def _atom_tol(W):
    return 1e-10 * (1.0 + float(np.max(np.abs(W), initial=0.0)) * W.shape[0])


def interlacing_excess(W, slack=1e-12):
    """max_j sup_x |F_n - F_n^(j)| - 1/n, with both ESDs normalized by n."""
    n = W.shape[0]
    full = np.linalg.eigvalsh(W)
    minors = np.array([minor(W, [j]) for j in range(n)])
    worst = 0.0
    for lam in np.linalg.eigvalsh(minors):
        a, b = merge_close_atoms(full, lam, tol=_atom_tol(W))
        worst = max(worst, esd_distance(ESD(1.0 / n, a), ESD(1.0 / n, b)))
    return max(worst - 1.0 / n - slack, 0.0), worst


def rank_excess(X, c, slack=1e-12):
    """Bai's rank inequality sup|F_n - F_hat_n| <= rank(X - X_hat)/n."""
    n = X.shape[0]
    t = c * n**0.25
    X_hat = np.where(np.abs(X) <= t, X, 0.0)
    a, b = merge_close_atoms(np.linalg.eigvalsh(assemble(X)), np.linalg.eigvalsh(assemble(X_hat)),
                             tol=_atom_tol(assemble(X)))
    F, F_hat = ESD(1.0 / n, a), ESD(1.0 / n, b)
    rank = np.linalg.matrix_rank(X - X_hat) if np.any(X != X_hat) else 0
    d = esd_distance(F, F_hat)
    return max(d - rank / n - slack, 0.0), d, rank


def inequality_suite(draws=500, master_seed=0, slack=1e-12, scales=(2, 4, 16)):
    """Deterministic inequalities over random draws (see the README list)."""
    result = BatteryResult()
    z_fixed = load_z_grid()
    for k in range(draws):
        rng = np.random.default_rng(derive_seed(master_seed, 0xBA77, k))
        n = int(rng.integers(4, 33))
        law = BUILTIN_LAWS[k % len(BUILTIN_LAWS)]
        seed = derive_seed(master_seed, n, k)
        X = sample_entries(WignerSpec(n, law=law, seed=seed))
        pipelined = bool(k % 2)
        if pipelined:
            try:
                X = standardize_pipeline(X, law, float(rng.uniform(1.5, 3.0))).x_breve
            except DegenerateTruncationError:
                pipelined = False
        W = assemble(X)
        where = dict(draw=k, n=n, law=law.tag, seed=seed, pipeline=pipelined)
        zs = list(z_fixed) + [complex(rng.uniform(-3, 3), 10 ** rng.uniform(-2, 0.5))]
        J = sorted(rng.choice(n, size=int(rng.integers(1, 3)), replace=False).tolist())
        WJ = minor(W, J)
        for z in zs:
            for name, ex in inequality_battery(W, z, scales=scales, slack=slack).items():
                result.add(name, ex, z=z, **where)
            for name, ex in inequality_battery(WJ, z, normalizer=n, scales=scales, slack=slack).items():
                result.add(name + "_minor", ex, z=z, J=J, **where)
        ex, _ = interlacing_excess(W, slack)
        result.add("interlacing_esd", ex, **where)
        ex, _, _ = rank_excess(X, float(rng.uniform(0.3, 1.5)), slack)
        result.add("bai_rank", ex, **where)
        _region_checks(result, rng, k, slack)
    return result


def _region_checks(result, rng, k, slack):
    n = int(rng.integers(50, 5001))
    A0 = float(rng.uniform(0.5, 2.0))
    spec = RegionSpec(n=n, A0=A0, u_count=9, v_count=5)
    pts = [p.z for p in region_grid(spec)]
    u = rng.uniform(-2 + spec.epsilon, 2 - spec.epsilon, 8)
    lo = spec.v0 / np.sqrt(semicircle.gamma_distance(u))
    pts += list(u + 1j * lo * 10 ** rng.uniform(0, 3, 8))
    m = np.array([region_margins(z, spec) for z in pts])
    scale = np.maximum(1.0, np.abs(m))
    first = np.maximum(-m[:, 0] - slack * scale[:, 0], 0)
    second = np.maximum(-m[:, 1] - slack * scale[:, 1], 0)
    where = dict(draw=k, n=n, A0=A0)
    for val in first:
        result.add("region_modulus", val, **where)
    for val in second:
        result.add("region_nv_sqrt", val, **where)
