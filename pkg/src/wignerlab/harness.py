"""Monte Carlo experiments: Kolmogorov rate sweeps, Stieltjes envelope
sweeps over the region, exponent fits and result files."""

import csv
import json
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace

import numpy as np

from . import semicircle
from .ensemble import WignerSpec, assemble, sample_entries
from .region import RegionSpec, envelope, region_grid
from .rng import derive_seed
from .spectral import ESD, Spectrum, kolmogorov_distance, weighted_kolmogorov

log = logging.getLogger(__name__)

CSV_COLUMNS = (
    "n", "replicates", "delta_n", "delta_star_mean", "bootstrap_se",
    "n_times_delta", "wall_seconds", "seed",
)
BOOTSTRAP_RESAMPLES = 200
MIN_REPLICATES = 1024


def default_replicates(n):
    """max(1024, 2^18 / n): at least 1024 replicates at every n, so the
    Monte Carlo noise in n * Delta_n does not grow with n."""
    return max(MIN_REPLICATES, 2**18 // n)


@dataclass
class ExperimentConfig:
    n_list: tuple = (128, 256, 512, 1024)
    replicates: object = None          # None (rule), int, or sequence aligned with n_list
    ensemble: WignerSpec = field(default_factory=lambda: WignerSpec(n=1))
    A0: float = 1.0
    seed: int = 0
    output: str = None
    format: str = "csv"
    threads: int = 1

    def __post_init__(self):
        self.n_list = tuple(int(n) for n in self.n_list)
        if not self.n_list or any(b <= a for a, b in zip(self.n_list, self.n_list[1:])):
            raise ValueError(f"n_list must be non-empty and strictly increasing: {self.n_list}")
        if self.format not in ("csv", "json"):
            raise ValueError(f"unknown format {self.format!r}")
        if self.threads < 1:
            raise ValueError("thread budget must be >= 1")
        for n in self.n_list:
            if self.replicates_for(n) < 1:
                raise ValueError("replicates must be >= 1")

    def replicates_for(self, n):
        r = self.replicates
        if r is None:
            return default_replicates(n)
        if isinstance(r, int):
            return r
        if callable(r):
            return int(r(n))
        return int(list(r)[self.n_list.index(n)])


@dataclass
class RateSweepRecord:
    n: int
    replicates: int
    delta_n: float
    delta_star_mean: float
    bootstrap_se: float
    n_times_delta: float
    wall_seconds: float
    seed: int


class ReplicateError(RuntimeError):
    def __init__(self, n, replicate, seed, cause):
        super().__init__(f"replicate {replicate} at n={n} failed (replay seed {seed}): {cause}")
        self.seed = seed


def replicate_seed(master, n, r):
    return derive_seed(master, n, r)


def _one_spectrum(cfg, n, r, sampler):
    seed = replicate_seed(cfg.seed, n, r)
    spec = replace(cfg.ensemble, n=n, seed=seed)
    try:
        X = sampler(spec)
        return np.linalg.eigvalsh(assemble(X))
    except Exception as exc:  # surfaced with the replay seed
        raise ReplicateError(n, r, seed, exc) from exc


def sample_spectra(cfg, n, replicates=None, sampler=sample_entries):
    """Eigenvalues of every replicate at dimension ``n``, shape (R, n).

    Replicates run on ``cfg.threads`` worker threads; each one depends only on
    its derived seed, and results are stored by replicate index.
    """
    R = replicates or cfg.replicates_for(n)
    out = np.empty((R, n))
    if cfg.threads == 1:
        for r in range(R):
            out[r] = _one_spectrum(cfg, n, r, sampler)
        return out
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        for r, lam in enumerate(pool.map(lambda k: _one_spectrum(cfg, n, k, sampler), range(R))):
            out[r] = lam
    return out


def pooled_delta(spectra):
    """Delta_n of the mean ESD pooled over replicate rows."""
    return kolmogorov_distance(ESD(1.0 / spectra.size, spectra.ravel()))


def bootstrap_se(spectra, seed, resamples=BOOTSTRAP_RESAMPLES):
    """Bootstrap standard error of the pooled Delta_n over replicates.

    Atoms are sorted once; a resample only reweights them by the
    multiplicity of their replicate.
    """
    R, n = spectra.shape
    if R < 2:
        return 0.0
    flat = spectra.ravel()
    order = np.argsort(flat, kind="stable")
    atoms = flat[order]
    labels = order // n
    rng = np.random.default_rng(derive_seed(seed, n, 0xB007))
    vals = np.empty(resamples)
    for b in range(resamples):
        counts = np.bincount(rng.integers(0, R, R), minlength=R)
        vals[b] = weighted_kolmogorov(atoms, counts[labels] / (n * R))
    return float(np.std(vals, ddof=1))


def rate_record(n, spectra, seed, wall):
    R = spectra.shape[0]
    delta = pooled_delta(spectra)
    stars = [kolmogorov_distance(Spectrum(row).esd()) for row in spectra]
    star_mean = float(np.mean(stars))
    if star_mean < delta - 1e-15:
        raise AssertionError(f"mean of per-replicate Delta* {star_mean} below pooled Delta {delta}")
    return RateSweepRecord(
        n=n,
        replicates=R,
        delta_n=delta,
        delta_star_mean=star_mean,
        bootstrap_se=bootstrap_se(spectra, seed),
        n_times_delta=n * delta,
        wall_seconds=wall,
        seed=int(seed),
    )


def run_rate_sweep(cfg, sampler=sample_entries, spectra_cache=None):
    """Delta_n of the mean ESD and per-replicate Delta_n* statistics for each n.

    ``spectra_cache`` (dict keyed by n) receives the sampled spectra so a
    following Stieltjes sweep can reuse them.
    """
    records = []
    for n in cfg.n_list:
        t0 = time.perf_counter()
        spectra = sample_spectra(cfg, n, sampler=sampler)
        rec = rate_record(n, spectra, cfg.seed, time.perf_counter() - t0)
        if spectra_cache is not None:
            spectra_cache[n] = spectra
        log.info("n=%d R=%d delta=%.4g n*delta=%.4f (%.1fs)", n, rec.replicates,
                 rec.delta_n, rec.n_times_delta, rec.wall_seconds)
        records.append(rec)
    return records


@dataclass
class StieltjesRecord:
    n: int
    u: float
    v: float
    mean_m: complex
    s: complex
    envelope_ratio: float

    @property
    def lambda_n(self):
        return self.mean_m - self.s


def mean_stieltjes(spectra, zs):
    """Replicate mean of m_n(z) for every z, shape (len(zs),)."""
    R, n = spectra.shape
    zs = np.asarray(zs, dtype=complex)
    acc = np.zeros(zs.shape, dtype=complex)
    for row in spectra:
        acc += np.sum(1.0 / (row[None, :] - zs[:, None]), axis=1)
    return acc / (n * R)


def run_stieltjes_sweep(cfg, region=None, sampler=sample_entries, spectra_cache=None):
    """Mean m_n(z) over the region grid and its envelope ratio, per n.

    ``region`` is a template whose ``n`` (and epsilon) are reset for each n
    in the config. Returns ``{n: [StieltjesRecord, ...]}``.
    """
    region = region or RegionSpec(n=cfg.n_list[0], A0=cfg.A0)
    out = {}
    for n in cfg.n_list:
        spec = RegionSpec(n=n, A0=region.A0, u_count=region.u_count,
                          v_count=region.v_count, v_max=region.v_max)
        pts = region_grid(spec)
        zs = np.array([p.z for p in pts])
        if spectra_cache is not None and n in spectra_cache:
            spectra = spectra_cache[n]
        else:
            spectra = sample_spectra(cfg, n, sampler=sampler)
        m = mean_stieltjes(spectra, zs)
        s = semicircle.stieltjes(zs)
        ratio = np.abs(m - s) / envelope(zs, n)
        out[n] = [
            StieltjesRecord(n, float(z.real), float(z.imag), complex(mi), complex(si), float(ri))
            for z, mi, si, ri in zip(zs, m, s, ratio)
        ]
        log.info("n=%d max envelope ratio %.4f", n, float(ratio.max()))
    return out


def fit_exponent(records):
    """Least-squares fit of log(delta_n) on log(n): (slope, intercept, r2)."""
    pts = [(r.n, r.delta_n) for r in records]
    ns = np.array([p[0] for p in pts], dtype=float)
    ds = np.array([p[1] for p in pts], dtype=float)
    if len(pts) < 3 or np.unique(ns).size != ns.size or np.any(ds <= 0):
        raise ValueError("fit_exponent needs >= 3 records with distinct n and delta_n > 0")
    x, y = np.log(ns), np.log(ds)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = np.sum((y - y.mean()) ** 2)
    r2 = 1.0 - np.sum(resid**2) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), float(r2)


# ---------------------------------------------------------------------------
# persistence

def emit(records, fmt, path):
    """Write rate records as CSV (fixed column order) or a JSON document."""
    rows = [asdict(r) for r in records]
    try:
        with open(path, "w", newline="") as fh:
            if fmt == "csv":
                writer = csv.writer(fh)
                writer.writerow(CSV_COLUMNS)
                for row in rows:
                    writer.writerow([repr(row[c]) if isinstance(row[c], float) else row[c]
                                     for c in CSV_COLUMNS])
            elif fmt == "json":
                json.dump({"columns": list(CSV_COLUMNS), "records": rows}, fh, indent=2)
                fh.write("\n")
            else:
                raise ValueError(f"unknown format {fmt!r}")
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc}") from exc


def read_records(path, fmt=None):
    fmt = fmt or ("json" if str(path).endswith(".json") else "csv")
    types = {f.name: f.type for f in fields(RateSweepRecord)}
    with open(path, newline="") as fh:
        if fmt == "json":
            rows = json.load(fh)["records"]
        else:
            reader = csv.DictReader(fh)
            if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
                raise ValueError(f"{path}: unexpected columns {reader.fieldnames}")
            rows = list(reader)
    return [RateSweepRecord(**{k: types[k](v) for k, v in row.items()}) for row in rows]


def emit_stieltjes(sweep, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "u", "v", "mean_m_re", "mean_m_im", "s_re", "s_im", "envelope_ratio"])
        for n in sorted(sweep):
            for r in sweep[n]:
                w.writerow([n, repr(r.u), repr(r.v), repr(r.mean_m.real), repr(r.mean_m.imag),
                            repr(r.s.real), repr(r.s.imag), repr(r.envelope_ratio)])


def max_threads():
    return os.cpu_count() or 1


__all__ = [
    "CSV_COLUMNS", "ExperimentConfig", "RateSweepRecord", "StieltjesRecord",
    "default_replicates", "sample_spectra", "pooled_delta", "bootstrap_se",
    "run_rate_sweep", "run_stieltjes_sweep", "fit_exponent", "emit", "read_records",
    "emit_stieltjes", "replicate_seed", "max_threads", "mean_stieltjes",
]
