"""Wigner matrices, the semicircle law, resolvent identities and
Kolmogorov-rate experiments."""

from .ensemble import EntryLaw, WignerSpec, assemble, sample_entries
from .harness import ExperimentConfig, fit_exponent, run_rate_sweep, run_stieltjes_sweep
from .region import RegionSpec, region_grid, smoothing_bound
from .semicircle import UpperHalfPoint, cdf, density, quantile, smoothing_params, stieltjes
from .spectral import ESD, Spectrum, kolmogorov_distance

__version__ = "0.1.0"

__all__ = [
    "EntryLaw", "WignerSpec", "assemble", "sample_entries",
    "ExperimentConfig", "fit_exponent", "run_rate_sweep", "run_stieltjes_sweep",
    "RegionSpec", "region_grid", "smoothing_bound",
    "UpperHalfPoint", "cdf", "density", "quantile", "smoothing_params", "stieltjes",
    "ESD", "Spectrum", "kolmogorov_distance",
]
