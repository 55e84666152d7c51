import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from wignerlab import semicircle as sc
from wignerlab.semicircle import UpperHalfPoint

upper = st.builds(complex, st.floats(-50, 50), st.floats(1e-6, 50))


def test_density_values():
    assert sc.density(0.0) == pytest.approx(1 / math.pi, abs=1e-15)
    assert sc.density(2.0) == 0.0
    assert sc.density(1.0) == pytest.approx(math.sqrt(3) / (2 * math.pi), abs=1e-15)
    assert sc.density(5.0) == 0.0
    with pytest.raises(ValueError):
        sc.density(float("nan"))


def test_density_mass(oracles):
    mass, _ = integrate.quad(sc.density, -2, 2, epsabs=1e-13)
    assert mass == pytest.approx(oracles["density_mass"], abs=1e-10)


def test_cdf_against_oracle(oracles):
    for x, g in oracles["cdf"]:
        assert sc.cdf(x) == pytest.approx(g, abs=1e-13)
    assert sc.cdf(-2.0) == 0.0 and sc.cdf(2.0) == 1.0 and sc.cdf(0.0) == 0.5
    with pytest.raises(ValueError):
        sc.cdf(float("inf"))


def test_cdf_monotone():
    x = np.linspace(-3, 3, 20001)
    assert np.all(np.diff(sc.cdf(x)) >= 0)


def test_quantile_examples(oracles):
    assert sc.quantile(0.5) == 0.0
    assert sc.quantile(1.0) == 2.0
    assert sc.quantile(0.0) == -2.0
    assert sc.quantile(sc.cdf(1.0)) == pytest.approx(1.0, abs=1e-9)
    # 0.8044989 is G(1) rounded to 7 digits, so its inverse sits 4e-8 above 1
    assert sc.quantile(0.8044989) == pytest.approx(1.0, abs=1e-7)
    for p, x in oracles["quantile"]:
        assert sc.quantile(p) == pytest.approx(x, abs=1e-9)
    with pytest.raises(ValueError):
        sc.quantile(1.5)


@settings(max_examples=200)
@given(st.floats(0, 1))
def test_quantile_inverts_cdf(p):
    assert abs(sc.cdf(sc.quantile(p)) - p) <= 1e-12


def test_vectorized_quantiles_match_scalar():
    ps = np.linspace(0, 1, 101)
    np.testing.assert_allclose(sc.quantiles(ps), [sc.quantile(p) for p in ps], atol=1e-12)


def test_stieltjes_examples():
    assert sc.stieltjes(1j) == pytest.approx(0.6180340j, abs=1e-7)
    assert sc.stieltjes(2j) == pytest.approx(1j * (math.sqrt(2) - 1), abs=1e-15)
    s = sc.stieltjes(1 + 1j)
    assert abs(s * s + (1 + 1j) * s + 1) <= 1e-12
    _, ds = sc.stieltjes(1j, derivative=True)
    assert ds == pytest.approx(-0.2763932, abs=1e-7)
    assert sc.stieltjes(UpperHalfPoint(0.0, 1.0)) == sc.stieltjes(1j)


def test_stieltjes_against_oracle(oracles):
    for u, v, re, im in oracles["stieltjes"]:
        assert sc.stieltjes(complex(u, v)) == pytest.approx(complex(re, im), abs=1e-10)
    for u, v, re, im in oracles["stieltjes_prime"]:
        _, ds = sc.stieltjes(complex(u, v), derivative=True)
        assert ds == pytest.approx(complex(re, im), abs=1e-9)


@settings(max_examples=300)
@given(upper)
def test_stieltjes_properties(z):
    s = sc.stieltjes(z)
    assert abs(s * s + z * s + 1) <= 1e-12 * max(1.0, abs(z))
    assert s.imag > 0
    assert abs(s) <= 1.0


def test_stieltjes_rejects_lower_half_plane():
    with pytest.raises(ValueError):
        sc.stieltjes(1 - 1j)
    with pytest.raises(ValueError):
        UpperHalfPoint(0.0, 0.0)


def test_smoothing_params(oracles):
    p = sc.smoothing_params(1000)
    assert p.a == pytest.approx(1 + math.sqrt(2), abs=1e-15)
    assert p.a == pytest.approx(oracles["smoothing_a"], abs=1e-15)
    assert p.v0 == 0.001
    assert p.epsilon == pytest.approx((2 * (1 + math.sqrt(2)) * 0.001) ** (2 / 3), rel=1e-14)
    assert p.epsilon == pytest.approx(0.028572, abs=1e-5)
    assert p.epsilon**1.5 == pytest.approx(2 * p.v0 * p.a, rel=1e-14)
    assert 2 / math.pi * math.atan(p.a) == pytest.approx(0.75, abs=1e-15)
