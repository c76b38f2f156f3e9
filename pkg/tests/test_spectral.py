import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from toricbath.bath.spectral import (SpectralParams, lambda_at_rate, lambda_quadrature, p_d,
                                     spectral_density, spectral_lambda)

T_GRID = np.geomspace(1e-3, 50, 20)


def mp_lambda(p, t):
    """Independent arbitrary-precision evaluation of the Lambda integral."""
    mp.mp.dps = 25
    beta = mp.inf if math.isinf(p.beta) else mp.mpf(p.beta)

    def f(w):
        if w == 0:
            return mp.mpf(0)
        dens = p.alpha * w ** p.s * mp.mpf(p.omega_0) ** (1 - p.s) * mp.exp(-w / p.omega_c)
        therm = 1 if beta == mp.inf else mp.coth(beta * w / 2)
        return dens * therm * mp.sin(w * t / 2) ** 2 / (w / 2) ** 2

    period = 2 * mp.pi / t
    edges = [0]
    while edges[-1] < 60 * p.omega_c:
        edges.append(edges[-1] + min(period, p.omega_c / 2))
    return float(mp.quad(f, edges))


# ---------------------------------------------------------------------------
# parameters and basic values


def test_params_validation():
    with pytest.raises(ValueError):
        SpectralParams(1.5, 0.1)
    with pytest.raises(ValueError):
        SpectralParams(1.0, -0.1)
    with pytest.raises(ValueError):
        SpectralParams(1.0, 0.1, omega_c=0)
    assert SpectralParams(1.0, 0.1, omega_c=10, beta=100).large_cutoff_ok()
    assert not SpectralParams(1.0, 0.1, omega_c=10, beta=1).large_cutoff_ok()


def test_spectral_density_shape():
    p = SpectralParams(2.0, 0.3, omega_0=2.0, omega_c=5.0)
    w = np.array([0.0, 1.0, 3.0])
    assert np.allclose(spectral_density(p, w), 0.3 * w ** 2 / 2.0 * np.exp(-w / 5.0))


@pytest.mark.parametrize("s", [0.5, 1.0, 2.0, 3.0])
@pytest.mark.parametrize("mode", ["closed", "asymptotic", "quadrature"])
def test_zero_time(s, mode):
    assert spectral_lambda(SpectralParams(s, 0.1, omega_c=10, beta=100), 0.0, mode) == 0.0


def test_ohmic_zero_exponent_zero_temperature():
    p = SpectralParams(0.0, 0.02, omega_0=1.5)
    for t in (0.1, 1.0, 33.0):
        assert spectral_lambda(p, t) == pytest.approx(0.02 * math.pi * 1.5 * t, rel=1e-15)


def test_zero_exponent_finite_temperature_unsupported():
    with pytest.raises(NotImplementedError):
        spectral_lambda(SpectralParams(0.0, 0.1, beta=10.0), 1.0)


def test_unknown_mode_and_negative_time():
    p = SpectralParams(1.0, 0.1, omega_c=10, beta=100)
    with pytest.raises(ValueError):
        spectral_lambda(p, 1.0, "series")
    with pytest.raises(ValueError):
        spectral_lambda(p, -1.0)


def test_array_input():
    p = SpectralParams(1.0, 0.1, omega_c=10, beta=100)
    out = spectral_lambda(p, T_GRID.reshape(4, 5))
    assert out.shape == (4, 5)
    assert out[1, 2] == spectral_lambda(p, T_GRID[7])


# ---------------------------------------------------------------------------
# closed forms against the quadrature oracles


@pytest.mark.parametrize("s", [0.5, 1.0, 2.0, 3.0])
@pytest.mark.parametrize("beta_wc", [100.0, 1e3, 1e4])
def test_closed_forms_match_quadrature(s, beta_wc):
    p = SpectralParams(s, 0.01, omega_0=1.0, omega_c=10.0, beta=beta_wc / 10.0)
    closed = spectral_lambda(p, T_GRID)
    quad = spectral_lambda(p, T_GRID, mode="quadrature")
    assert np.all(np.abs(closed - quad) <= 1e-6 * np.abs(quad))


@pytest.mark.parametrize("s", [0.0, 0.5, 1.0, 2.0, 3.0])
def test_zero_temperature_forms_match_quadrature(s):
    p = SpectralParams(s, 0.01, omega_0=1.0, omega_c=10.0)
    closed = spectral_lambda(p, T_GRID)
    quad = spectral_lambda(p, T_GRID, mode="quadrature")
    assert np.all(np.abs(closed - quad) <= 1e-9 * np.abs(quad))


@pytest.mark.parametrize("s,beta", [(0.5, 20.0), (1.0, 10.0), (2.0, 50.0), (3.0, 10.0), (1.0, math.inf)])
def test_quadrature_agrees_with_mpmath(s, beta):
    p = SpectralParams(s, 0.05, omega_0=0.7, omega_c=8.0, beta=beta)
    for t in (0.05, 9.0):
        assert lambda_quadrature(p, t) == pytest.approx(mp_lambda(p, t), rel=1e-9)


def test_asymptotic_forms_approach_closed_forms():
    # the large-cutoff forms drop pieces that vanish as omega_c * t grows; for
    # s = 1/2 the leading dropped piece is of relative order (omega_c t)^(-1/2)
    t = 5.0
    for s in (0.5, 1.0):
        errs = []
        for wc in (10.0, 100.0, 1000.0, 1e4):
            p = SpectralParams(s, 0.01, omega_c=wc, beta=1e3)
            exact = spectral_lambda(p, t)
            errs.append(abs(spectral_lambda(p, t, "asymptotic") - exact) / exact)
        assert all(a > b for a, b in zip(errs, errs[1:]))
        if s == 0.5:
            assert errs[-2] / errs[-1] == pytest.approx(math.sqrt(10), rel=0.05)


def test_asymptotic_equals_closed_for_higher_exponents():
    for s in (2.0, 3.0):
        p = SpectralParams(s, 0.01, omega_c=10.0, beta=100.0)
        assert np.array_equal(spectral_lambda(p, T_GRID, "asymptotic"), spectral_lambda(p, T_GRID))


@given(st.sampled_from([0.5, 1.0, 2.0, 3.0]), st.floats(0.1, 100), st.floats(1.0, 1e4), st.floats(1e-3, 1e3))
@settings(max_examples=200, deadline=None)
def test_lambda_nonnegative_and_increasing_with_alpha(s, wc, beta, t):
    p = SpectralParams(s, 0.01, omega_c=wc, beta=beta)
    q = SpectralParams(s, 0.02, omega_c=wc, beta=beta)
    a, b = spectral_lambda(p, t), spectral_lambda(q, t)
    assert a >= 0
    assert b == pytest.approx(2 * a, rel=1e-12, abs=1e-300)


def test_temperature_increases_decoherence():
    for s in (0.5, 1.0, 2.0, 3.0):
        cold = SpectralParams(s, 0.01, omega_c=10.0, beta=1e3)
        hot = SpectralParams(s, 0.01, omega_c=10.0, beta=1.0)
        assert np.all(spectral_lambda(hot, T_GRID) >= spectral_lambda(cold, T_GRID))


def test_ohmic_long_time_slope():
    # at long times the Ohmic thermal form grows like 2 pi alpha t / beta, plus
    # a finite-cutoff piece -4 alpha eps log t with eps = 1 / (beta omega_c)
    alpha, beta, wc = 0.01, 2.0, 10.0
    p = SpectralParams(1.0, alpha, omega_c=wc, beta=beta)
    t1, t2 = 400.0, 800.0
    slope = (spectral_lambda(p, t2) - spectral_lambda(p, t1)) / (t2 - t1)
    want = 2 * math.pi * alpha / beta - 4 * alpha / (beta * wc) * math.log(t2 / t1) / (t2 - t1)
    assert slope == pytest.approx(want, rel=1e-7)


# ---------------------------------------------------------------------------
# flip probability


def test_p_d_values():
    assert p_d(0.0) == 0.0
    assert p_d(50.0) == pytest.approx(0.5, abs=1e-15)
    assert round(p_d(0.123), 3) == 0.109
    with pytest.raises(ValueError):
        p_d(-1e-3)


@given(st.floats(0, 0.499))
def test_rate_inversion(p):
    assert p_d(lambda_at_rate(p)) == pytest.approx(p, abs=1e-15)


def test_p_d_array():
    out = p_d(np.array([0.0, 0.1, 1.0]))
    assert out.shape == (3,) and np.all(np.diff(out) > 0) and np.all(out < 0.5)
