import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wignerlab import semicircle as sc
from wignerlab.ensemble import EntryLaw, WignerSpec, assemble, minor, sample_entries
from wignerlab.resolvent import (IdentityReport, epsilon_decomposition, identity_report,
                                 identity_residuals, inequality_battery, load_z_grid,
                                 resolvent_diag, resolvent_diag_eigen, row_terms,
                                 stieltjes_of_spectrum)
from wignerlab.spectral import Spectrum
from wignerlab.suites import IDENTITY_NAMES, zero_matrix_errors

Z_SMALL = [1j, 0.5 + 0.1j, -1 + 0.01j]
upper = st.builds(complex, st.floats(-3, 3), st.floats(1e-2, 5))


def draw(n, seed, law="gaussian"):
    return assemble(sample_entries(WignerSpec(n, EntryLaw.parse(law), seed=seed)))


def test_identity_grid_manifest():
    grid = load_z_grid()
    assert len(grid) == 6 and all(z.imag > 0 for z in grid)
    assert 1j in grid


def test_resolvent_closed_forms():
    np.testing.assert_allclose(resolvent_diag(np.zeros((5, 5)), 1j), 1j, atol=1e-15)
    np.testing.assert_allclose(resolvent_diag(np.eye(4), 1 + 1j), 1j, atol=1e-15)


@settings(max_examples=40, deadline=None)
@given(z=upper, seed=st.integers(0, 2**32), n=st.integers(2, 16))
def test_resolvent_diag_dual_path(z, seed, n):
    W = draw(n, seed)
    a, b = resolvent_diag(W, z), resolvent_diag_eigen(W, z)
    assert np.max(np.abs(a - b)) <= 1e-10 * np.max(np.abs(b))
    assert np.all(np.abs(a) <= 1 / z.imag * (1 + 1e-12))
    assert np.all(a.imag > 0)


def test_stieltjes_of_spectrum():
    smp = stieltjes_of_spectrum(Spectrum(np.array([0.0])), 1j)
    assert smp.m_n == pytest.approx(1j)
    assert smp.lambda_n == pytest.approx(1j - sc.stieltjes(1j))


@pytest.mark.parametrize("z", [1j, 0.3 + 0.2j, -1.7 + 0.05j])
def test_m_prime_finite_difference(z):
    S = Spectrum(np.linalg.eigvalsh(draw(20, 3)))
    h = 1e-6
    fd = (stieltjes_of_spectrum(S, z + h).m_n - stieltjes_of_spectrum(S, z - h).m_n) / (2 * h)
    smp = stieltjes_of_spectrum(S, z)
    assert abs(smp.m_n_prime - fd) <= 1e-6 * max(1.0, abs(fd))
    assert smp.m_n.imag > 0


def test_zero_matrix_closed_form():
    errs = zero_matrix_errors(n=6, z=1j)
    assert max(errs.values()) <= 1e-14
    res = identity_residuals(np.zeros((6, 6)), 1j)
    assert max(res[k][0] for k in IDENTITY_NAMES) <= 1e-14


def test_epsilon_decomposition_zero_matrix():
    e = epsilon_decomposition(np.zeros((4, 4)), 2j, 1)
    assert e.eps1 == 0 and e.eps2 == 0
    assert e.eps3 == pytest.approx(3 / (4 * 2j))
    assert e.eps4 == pytest.approx(1 / (4 * 2j))
    assert e.combined == pytest.approx(-(e.eps3 + e.eps4))


@pytest.mark.parametrize("n", [4, 8, 16])
def test_schur_identity(n):
    for seed in range(5):
        W = draw(n, seed)
        for z in Z_SMALL:
            t = row_terms(W, z)
            lhs = t.diag * (-z + t.eps1 - (t.eps2 + t.eps3 + t.m_n + t.eps4))
            np.testing.assert_allclose(lhs, 1.0, atol=1e-10)


def test_eps4_bound():
    for seed in range(20):
        W = draw(12, seed, "rademacher")
        for z in load_z_grid():
            t = row_terms(W, z)
            assert np.all(np.abs(t.eps4) <= 1 / (12 * z.imag) * (1 + 1e-12))


def test_identities_random_draws():
    report = IdentityReport()
    for seed in range(100):
        identity_report(draw(8, seed), Z_SMALL, report, seed=seed)
    assert report.max_residual(IDENTITY_NAMES) <= 1e-9
    assert report.max_residual(["h_lambda_solved", "schur_quadratic_form"]) <= 1e-9


def test_identities_for_minor_with_parent_normalizer():
    W = draw(10, 4)
    WJ = minor(W, [2, 7])
    res = identity_residuals(WJ, 0.5 + 0.1j, removed=2, normalizer=10)
    assert max(v[0] for v in res.values()) <= 1e-9
    # without the |J|/n shift the quadratic identity fails
    wrong = identity_residuals(WJ, 0.5 + 0.1j, removed=0, normalizer=10)
    assert wrong["b_quadratic"][0] > 1e-3


def test_all_plus_sign_breaks_self_consistency():
    W = draw(16, 0)
    z = 0.5 + 0.1j
    t = row_terms(W, z)
    zm = z + t.m_n
    plus = t.eps1 + t.eps2 + t.eps3 + t.eps4
    assert np.max(np.abs(t.diag - (-1 / zm + plus * t.diag / zm))) > 1e-3
    assert np.max(np.abs(t.diag - (-1 / zm + t.combined * t.diag / zm))) < 1e-12


def test_report_text():
    rep = identity_report(np.zeros((3, 3)), [1j], seed=1)
    text = rep.to_text()
    assert "a_self_consistency" in text and "seed=1" in text
    merged = IdentityReport().merge(rep)
    assert merged.entries == rep.entries


def test_frobenius_equality():
    for seed in range(10):
        for z in Z_SMALL:
            assert inequality_battery(draw(9, seed), z)["frobenius_equality"] == 0.0


@settings(max_examples=40, deadline=None)
@given(z=upper, seed=st.integers(0, 2**32), n=st.integers(2, 12),
       law=st.sampled_from(["gaussian", "rademacher", "uniform-scaled"]))
def test_inequality_battery_clean(z, seed, n, law):
    ex = inequality_battery(draw(n, seed, law), z)
    assert max(ex.values()) == 0.0, ex
