import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import brentq

from toricbath.bath import budget
from toricbath.bath.budget import (P_CRITICAL, BathParams, entropic_boundary, error_budget, qec_times,
                                   tau_direct, tau_subluminal, tau_superluminal)
from toricbath.bath.special import binary_entropy
from toricbath.bath.spectral import p_d, spectral_lambda

FIG = BathParams(lam=0.1, v=1.0, T=0.01, omega_c=30.0)


def test_bath_params_validation():
    with pytest.raises(ValueError):
        BathParams(lam=0.0)
    with pytest.raises(ValueError):
        BathParams(lam=0.1, T=-1)
    with pytest.raises(ValueError):
        BathParams(lam=0.1, dim=4)
    with pytest.raises(NotImplementedError):
        BathParams(lam=0.1, dim=3).alpha
    assert FIG.alpha == pytest.approx(0.01 / (2 * math.pi))
    assert FIG.s == 1.0 and FIG.beta == 100.0
    assert BathParams(lam=0.1).beta == math.inf


# ---------------------------------------------------------------------------
# A, B, C


def test_superluminal_term_vanishes_at_small_times_and_saturation():
    L = 1e4
    small = [error_budget(t, L, FIG).B for t in (1e-6, 1e-4, 1e-2)]
    assert small[0] < small[1] < small[2] < 1e-8
    sat = error_budget(L / 2 / FIG.v, L, FIG)
    assert sat.B == 0.0
    assert sat.C == pytest.approx(FIG.lam ** 4 * L ** 2 / (64 * math.pi * FIG.v ** 4), rel=1e-14)
    later = error_budget(3 * L, L, FIG)
    assert later.C == sat.C and later.m == L / 2


def test_budget_terms_nonnegative_and_sum():
    for t in np.geomspace(1e-3, 1e4, 60):
        for L in (1e2, 1e3, 1e4):
            b = error_budget(t, L, FIG)
            assert b.A >= 0 and b.B >= 0 and b.C >= 0
            assert b.p_x == b.A + b.B + b.C
            assert b.direct_valid == (t >= 1 / FIG.omega_c)


def test_direct_term_matches_decoherence_function():
    # A is p_d of the large-cutoff Ohmic Lambda with alpha = lam^2 / (2 pi v^2)
    spectral = FIG.spectral()
    for t in np.geomspace(1.0, 1e4, 30):
        lam = spectral_lambda(spectral, t, mode="asymptotic")
        # large-cutoff form of Lambda differs by alpha log(1 + 1/(wc t)^2)
        assert budget.direct_term(t, FIG) == pytest.approx(p_d(lam), rel=2e-3)


def test_direct_term_zero_temperature():
    cold = BathParams(lam=0.1, T=0.0, omega_c=30.0)
    t = 50.0
    want = 0.5 - 0.5 * (cold.omega_c * t) ** (-2 * cold.lam ** 2 / math.pi)
    assert budget.direct_term(t, cold) == pytest.approx(want, rel=1e-12)


def test_direct_term_clipped_before_cutoff_time():
    b = error_budget(1e-3, 100, FIG)
    assert b.A == 0.0 and not b.direct_valid


# ---------------------------------------------------------------------------
# times and regimes


def test_cutoffs_and_log_constant():
    assert round(budget.sub_cutoff(P_CRITICAL), 1) == 4.7
    assert round(budget.super_cutoff(P_CRITICAL), 1) == 16.1
    assert budget.sub_cutoff(P_CRITICAL) == pytest.approx(4.6814, abs=1e-4)
    assert budget.super_cutoff(P_CRITICAL) == pytest.approx(16.0756, abs=1e-4)
    assert round(budget.log_rate_constant(P_CRITICAL), 1) == 0.4


def test_tau_direct_round_trip():
    for bath in (FIG, BathParams(lam=0.3, T=0.1, omega_c=100.0), BathParams(lam=0.05, T=0.0)):
        for pc in (0.05, P_CRITICAL, 0.2):
            tau = tau_direct(bath, pc)
            assert abs(budget.direct_term(tau, bath) - pc) <= 1e-9


def test_tau_direct_fig_value():
    assert tau_direct(FIG) == pytest.approx(1033.15, abs=0.01)


def test_tau_subluminal_example_and_round_trip():
    tau = tau_subluminal(FIG)
    assert tau == pytest.approx(234.07, abs=0.01)
    assert tau == pytest.approx(4 * math.sqrt(math.pi * 0.109) / 0.01, rel=1e-14)
    assert budget.subluminal_term(tau, 1e3, FIG) == pytest.approx(P_CRITICAL, rel=1e-12)


@pytest.mark.parametrize("L", [1700.0, 1e4, 1e6])
def test_tau_superluminal_round_trip_and_root_oracle(L):
    tau = tau_superluminal(L, FIG)
    assert abs(budget.superluminal_term(tau, L, FIG) - P_CRITICAL) <= 1e-9
    # independent oracle: root of B(t) - p on the lower time branch
    peak = L / (2 * FIG.v) / math.sqrt(math.e)
    root = brentq(lambda t: budget.superluminal_term(t, L, FIG) - P_CRITICAL, 1e-9, peak, xtol=1e-14)
    assert tau == pytest.approx(root, rel=1e-10)


def test_fig_five_times():
    assert tau_superluminal(1e4, FIG) == pytest.approx(137.09, abs=0.01)
    b = error_budget(tau_superluminal(1e4, FIG), 1e4, FIG)
    assert b.B > b.C


def test_regimes():
    regimes = [qec_times(L, FIG).regime for L in (1e2, 1e3, 1e4)]
    assert regimes == ["direct", "direct-or-sub", "direct-or-super"]
    t3 = qec_times(1e3, FIG)
    assert t3.tau_super is None and t3.tau == min(t3.tau_d, t3.tau_sub)
    t4 = qec_times(1e4, FIG)
    assert t4.tau == min(t4.tau_d, t4.tau_super)
    assert qec_times(1e2, FIG).tau_sub is None
    with pytest.raises(ValueError):
        qec_times(1e2, FIG, 0.7)


@given(st.floats(0.02, 0.3), st.floats(1.0, 1e5))
@settings(max_examples=100, deadline=None)
def test_regime_thresholds_in_code_size(lam, L):
    bath = BathParams(lam=lam)
    unit = 1 / lam ** 2
    times = qec_times(L, bath)
    assert (times.tau_sub is not None) == (L > budget.sub_cutoff() * unit)
    assert (times.tau_super is not None) == (L > budget.super_cutoff() * unit)


# ---------------------------------------------------------------------------
# entropic boundary


def test_entropic_boundary_examples():
    p2 = entropic_boundary(0.0)
    assert p2 == pytest.approx(0.04169, abs=1e-5)
    assert abs(4 * binary_entropy(p2) - 1) < 1e-8
    edge = brentq(lambda p: 2 * binary_entropy(p) - 1, 0.01, 0.3, xtol=1e-15)
    assert edge == pytest.approx(0.110, abs=1e-3)
    assert entropic_boundary(edge - 1e-9) < 1e-3
    with pytest.raises(ValueError):
        entropic_boundary(0.2)


@given(st.floats(0, 0.1), st.floats(0, 0.1))
def test_entropic_boundary_monotone(a, b):
    lo, hi = sorted((a, b))
    assert entropic_boundary(lo) >= entropic_boundary(hi) - 1e-10


def test_tau_direct_beyond_float_range_is_infinite():
    assert tau_direct(BathParams(lam=0.01, T=0.0)) == math.inf
    assert qec_times(1.0, BathParams(lam=0.01, T=0.0)).tau == math.inf
