import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from xsblab.bumps import (annulus_bump, annulus_bump_ft, mollifier, mollifier_cdf, plateau_bump,
                          plateau_bump_ft)

pytestmark = pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")


def _raw_bump(y):
    return math.exp(-1 / (1 - y * y)) if abs(y) < 1 else 0.0


with warnings.catch_warnings():
    warnings.simplefilter("ignore", integrate.IntegrationWarning)
    MASS = integrate.quad(_raw_bump, -1, 1, epsabs=1e-15, epsrel=1e-14)[0]


def phi_oracle(x):
    # indicator of [-9/8, 9/8] convolved with the radius-1/8 mollifier, by adaptive quadrature
    lo, hi = max(-1.0, (x - 9 / 8) * 8), min(1.0, (x + 9 / 8) * 8)
    if lo >= hi:
        return 0.0
    return integrate.quad(_raw_bump, lo, hi, epsabs=1e-15, epsrel=1e-14)[0] / MASS


def test_mollifier_mass():
    x = np.linspace(-0.125, 0.125, 200_001)
    assert np.trapezoid(mollifier(x), x) == pytest.approx(1.0, abs=1e-10)
    assert mollifier(np.array([0.125, 0.2, -1.0])).tolist() == [0.0, 0.0, 0.0]


@pytest.mark.parametrize("x", [1.0, 1.01, 1.05, 1.1, 1.125, 1.15, 1.2, 1.24, 1.25, 0.3, 2.0])
def test_phi_matches_quadrature(x):
    assert plateau_bump(x) == pytest.approx(phi_oracle(x), abs=1e-12)


def test_phi_plateau_and_support():
    x = np.linspace(-1, 1, 1001)
    assert np.all(plateau_bump(x) == 1.0)
    far = np.concatenate([np.linspace(1.25, 4, 100), -np.linspace(1.25, 4, 100)])
    assert np.all(plateau_bump(far) == 0.0)
    assert plateau_bump(9 / 8) == pytest.approx(0.5, abs=1e-14)


@settings(max_examples=200)
@given(st.floats(-3, 3), st.floats(-3, 3))
def test_phi_even_monotone_bounded(a, b):
    pa, pb = plateau_bump(a), plateau_bump(b)
    assert pa == plateau_bump(-a)
    assert 0.0 <= pa <= 1.0
    if abs(a) <= abs(b):
        assert pa >= pb - 1e-15


def test_psi_support():
    x = np.linspace(-3, 3, 60_001)
    p = annulus_bump(x)
    assert np.all(p[np.abs(x) < 0.5] == 0.0)
    assert np.all(p[np.abs(x) >= 1.25] == 0.0)
    assert np.all(p >= 0)


def test_partition_of_unity():
    # sum_k psi(x / 2^k) + phi(x) telescopes to phi(x / 2^K)
    x = np.linspace(-50, 50, 10_001)
    total = plateau_bump(x) + sum(annulus_bump(x / 2**k) for k in range(1, 7))
    assert np.allclose(total, plateau_bump(x / 64), atol=1e-14)


def test_cdf_limits():
    assert mollifier_cdf(np.array([-2.0, -1.0, 0.0, 1.0, 3.0])).tolist() == [0.0, 0.0, 0.5, 1.0, 1.0]


def _ft_oracle(omega):
    # phi is even: hat phi(w) = sqrt(2/pi) int_0^{5/4} phi(t) cos(w t) dt
    f = lambda t: plateau_bump(t) * math.cos(omega * t)
    val = integrate.quad(f, 0, 1, limit=200, epsabs=1e-14)[0]
    val += integrate.quad(f, 1, 1.25, limit=200, epsabs=1e-14)[0]
    return math.sqrt(2 / math.pi) * val


@pytest.mark.parametrize("omega", [0.0, 0.5, 3.0, 10.0, 37.0, 120.0])
def test_phi_ft_matches_quadrature(omega):
    assert float(plateau_bump_ft(np.array(omega))) == pytest.approx(_ft_oracle(omega), abs=1e-11)


def test_phi_ft_plancherel():
    w = np.linspace(-400, 400, 400_001)
    l2_freq = np.trapezoid(plateau_bump_ft(w) ** 2, w)
    t = np.linspace(-1.25, 1.25, 200_001)
    l2_time = np.trapezoid(plateau_bump(t) ** 2, t)
    assert l2_freq == pytest.approx(l2_time, rel=1e-6)


def test_psi_ft_is_difference():
    w = np.linspace(-30, 30, 61)
    # psi(t) = phi(t) - phi(2t) has transform hat phi(w) - hat phi(w / 2) / 2
    assert np.allclose(annulus_bump_ft(w), plateau_bump_ft(w) - plateau_bump_ft(w / 2) / 2, atol=1e-15)
    assert float(annulus_bump_ft(np.array(0.0))) == pytest.approx(
        integrate.quad(lambda t: float(annulus_bump(t)), -1.25, 1.25, points=[-1, -0.5, 0.5, 1], limit=200)[0]
        / math.sqrt(2 * math.pi), abs=1e-10)
