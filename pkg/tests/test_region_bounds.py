import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wignerlab import semicircle as sc
from wignerlab.harness import ExperimentConfig, pooled_delta, sample_spectra
from wignerlab.region import (RegionSpec, calibrate_constants, contour_check, contour_terms, envelope,
                              envelope_ratio, in_region, region_margins, left_segment_bound, lower_edge,
                              region_grid, smoothing_bound)
from wignerlab.resolvent import StieltjesSample
from wignerlab.semicircle import UpperHalfPoint
from wignerlab.spectral import ESD

SHIFT = 0.05
S_SHIFT = sc.shifted(sc.stieltjes, SHIFT)


def test_lower_edge_example(oracles):
    spec = RegionSpec(n=1000)
    assert lower_edge(0.0, spec) == pytest.approx(oracles["lower_edge_n1000_u0"], rel=1e-14)
    assert lower_edge(0.0, spec) == pytest.approx(7.0711e-4, abs=1e-8)
    assert in_region(4j, spec)
    assert not in_region(0.5 + 1e-5j, spec)
    assert not in_region(1.999 + 1j, spec)


def test_epsilon_range_enforced():
    with pytest.raises(ValueError):
        RegionSpec(n=1000, epsilon=0.5)


@pytest.mark.parametrize("n,A0", [(100, 1.0), (1000, 1.0), (5000, 2.0)])
def test_grid_is_membership_fixed_point(n, A0):
    spec = RegionSpec(n=n, A0=A0)
    pts = region_grid(spec)
    assert len(pts) == spec.u_count * spec.v_count
    assert all(in_region(p, spec) for p in pts)


@pytest.mark.parametrize("n,A0", [(100, 1.0), (1000, 1.0), (5000, 2.0)])
def test_grid_modulus_inequality(n, A0):
    spec = RegionSpec(n=n, A0=A0)
    assert min(region_margins(p, spec)[0] for p in region_grid(spec)) >= 0


@pytest.mark.parametrize("n,A0", [(100, 1.0), (1000, 1.0), (5000, 2.0)])
def test_grid_nv_inequality_as_stated(n, A0):
    # n v sqrt|z^2-4| >= 2 A0 on every grid point, with the constant as stated
    spec = RegionSpec(n=n, A0=A0)
    assert min(region_margins(p, spec)[1] for p in region_grid(spec)) >= 0


@settings(max_examples=200)
@given(n=st.integers(50, 10**5), A0=st.floats(0.1, 3), t=st.floats(0, 1), lift=st.floats(0, 6))
def test_nv_inequality_sqrt2(n, A0, t, lift):
    spec = RegionSpec(n=n, A0=A0)
    u = -2 + spec.epsilon + t * (4 - 2 * spec.epsilon)
    z = complex(u, lower_edge(u, spec) * 10**lift)
    assert region_margins(z, spec, constant=math.sqrt(2))[1] >= -1e-12 * A0


def test_envelope_example(oracles):
    assert envelope(1j, 100) == pytest.approx(oracles["envelope_n100_i"], rel=1e-14)
    assert envelope(1j, 100) == pytest.approx(0.010669, abs=1e-6)
    s = sc.stieltjes(1j)
    assert envelope_ratio(StieltjesSample(UpperHalfPoint(0, 1), s, 0j, s), 100) == 0.0
    pts = np.array([p.z for p in region_grid(RegionSpec(n=256))])
    assert np.all(np.isfinite(envelope(pts, 256))) and np.all(envelope(pts, 256) > 0)


def test_bound_for_identical_laws():
    p = sc.smoothing_params(1000)
    bd = smoothing_bound(sc.stieltjes, p, C1=1, C2=1)
    assert bd.integral_top == 0 and bd.integral_vertical == 0
    assert bd.total == p.v0 + p.epsilon**1.5
    bd2 = smoothing_bound(sc.stieltjes, p, C1=2.5, C2=0.5)
    assert bd2.total == 2.5 * p.v0 + 0.5 * p.epsilon**1.5


@pytest.fixture(scope="module")
def shifted_bound():
    return smoothing_bound(S_SHIFT, sc.smoothing_params(1000))


def test_bound_exceeds_shift_distance(shifted_bound, oracles):
    shift, delta = oracles["shift_delta"]
    x = np.linspace(-3, 3, 600001)
    grid = np.max(np.abs(sc.cdf(x - shift) - sc.cdf(x)))
    assert grid == pytest.approx(delta, abs=1e-9)
    assert shifted_bound.total >= delta
    d = shifted_bound.as_dict()
    assert d["total"] == pytest.approx(2 * d["integral_top"] + d["term_c1v0"] + d["term_c2eps"]
                                       + 2 * d["integral_vertical"], rel=1e-15)


def test_bound_quadrature_refinement(shifted_bound):
    fine = smoothing_bound(S_SHIFT, sc.smoothing_params(1000), tol=5e-9)
    assert abs(fine.total - shifted_bound.total) < 1e-6 * shifted_bound.total


def test_bound_monotone_in_constants(shifted_bound):
    p = sc.smoothing_params(1000)
    base = shifted_bound
    more = smoothing_bound(S_SHIFT, p, C1=2.0, C2=3.0)
    assert more.total >= base.total >= 0
    assert more.integral_top == base.integral_top


def test_bound_rejects_low_top():
    with pytest.raises(ValueError):
        smoothing_bound(sc.stieltjes, sc.smoothing_params(10), V=0.05)


def test_calibration_on_mean_esd():
    n = 64
    cfg = ExperimentConfig(n_list=(n,), replicates=32, seed=9)
    spectra = sample_spectra(cfg, n)
    F = ESD(1.0 / spectra.size, spectra.ravel())
    p = sc.smoothing_params(n)
    bd = smoothing_bound(F.stieltjes, p, grid_points=65)
    delta = pooled_delta(spectra)
    C = calibrate_constants(bd, p, delta)
    assert C >= 0
    tight = smoothing_bound(F.stieltjes, p, C1=C, C2=C, grid_points=65)
    assert tight.total >= delta - 1e-12


def test_contour_identical_samplers():
    assert contour_check(sc.stieltjes, sc.stieltjes, 0.0, 0.01, 4.0, 50.0) == 0.0


def test_contour_shifted():
    res = [contour_terms(S_SHIFT, sc.stieltjes, 0.0, 0.01, 4.0, L) for L in (10, 25, 50)]
    assert res[-1].residual <= 1e-6
    assert all(b.residual <= a.residual + 1e-8 for a, b in zip(res, res[1:]))
    gaps = [r.truncation_gap for r in res]
    assert gaps[0] > gaps[1] > gaps[2]
    for L, r in zip((10, 25, 50), res):
        # tails vanish for compactly supported laws beyond L/2 > 2.05
        assert r.truncation_gap <= left_segment_bound(0.0, 0.0, 0.01, 4.0, L)
