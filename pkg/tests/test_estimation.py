import math
import warnings

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from cvqkd.errors import DomainError, EstimationError, InfeasibleError
from cvqkd.estimation import (
    ConfidenceDiscrepancyWarning,
    EstimationSample,
    calibrate_phi,
    check_tabulated_confidence,
    confidence_factor,
    corr_t,
    corr_xi,
    estimate_t_xi,
    make_rng,
    noise_variance,
    simulate_awgn_sample,
    simulate_calibration,
    worst_case_shift,
)


def test_calibration_subtraction():
    rec = calibrate_phi(2e-6, 1e-6)
    assert rec.phi == pytest.approx(1e-6) and rec.n_rec == 1e-6
    assert calibrate_phi(1e-6, 1e-6).phi == 0.0
    with pytest.raises(EstimationError):
        calibrate_phi(1e-6, 2e-6)


def test_calibration_exact_on_noiseless_input():
    phi, n_rec = 3.3e-5, 1.1e-6
    rec = calibrate_phi(phi + n_rec, n_rec)
    assert rec.phi == pytest.approx(phi, rel=1e-12)
    assert rec.to_snu([math.sqrt(phi)])[0] == pytest.approx(1.0)


def test_calibration_recovers_phi():
    phi, xi_rec, n = 2.5e-4, 0.1, 20_000
    est = np.array([calibrate_phi(*simulate_calibration(phi, xi_rec, 2, n, seed=3, stream=k)).phi
                    for k in range(1000)])
    # Var of a sample variance of N(0, s2) is about 2 s2^2 / n
    sd = math.sqrt(2 * (phi * (1 + xi_rec / 2)) ** 2 / n + 2 * (phi * xi_rec / 2) ** 2 / n)
    assert abs(est.mean() - phi) < 3 * sd / math.sqrt(len(est))
    assert np.mean(np.abs(est - phi) < 3 * sd) > 0.99


def test_rng_is_keyed():
    a = make_rng(7, 0, 3).standard_normal(4)
    assert np.array_equal(a, make_rng(7, 0, 3).standard_normal(4))
    assert not np.array_equal(a, make_rng(7, 0, 4).standard_normal(4))


def test_sample_determinism():
    s1 = simulate_awgn_sample(0.2, 0.05, 6.77, 2, 1000, seed=11)
    s2 = simulate_awgn_sample(0.2, 0.05, 6.77, 2, 1000, seed=11)
    assert np.array_equal(s1.y, s2.y)
    assert estimate_t_xi(s1) == estimate_t_xi(s2)


def test_noiseless_branch():
    s = simulate_awgn_sample(1.0, 0.0, 6.77, 2, 100, seed=1, shot_noise=False)
    assert np.array_equal(s.x, s.y)
    est = estimate_t_xi(simulate_awgn_sample(0.25, 0.0, 6.77, 2, 100, seed=1, shot_noise=False))
    assert est.t_hat == pytest.approx(0.25, abs=1e-12)
    assert est.xi_hat < 1e-25


def test_two_point_regression():
    t = 0.37
    sample = EstimationSample(np.array([1.0, 2.0]), np.array([math.sqrt(t), 2 * math.sqrt(t)]), shot=0.0)
    assert estimate_t_xi(sample).t_hat == pytest.approx(t, abs=1e-15)


def test_degenerate_samples():
    with pytest.raises(EstimationError):
        estimate_t_xi(EstimationSample(np.zeros(4), np.ones(4)))
    with pytest.raises(EstimationError):
        EstimationSample(np.ones(1), np.ones(1))
    with pytest.raises(DomainError):
        simulate_awgn_sample(1.5, 0.0, 6.77, 2, 10, seed=0)


def test_sample_moments():
    t, xi, v_a, mu, n_pe = 0.3162, 0.1, 6.77, 2, 200_000
    s = simulate_awgn_sample(t, xi, v_a, mu, n_pe, seed=5)
    m = len(s.x)
    var_x = v_a / mu
    assert abs(s.x.mean()) < 3 * math.sqrt(var_x / m)
    assert abs(s.x.var() - var_x) < 3 * var_x * math.sqrt(2 / m)
    var_y = t * var_x + noise_variance(xi, mu)
    assert abs(s.y.var() - var_y) < 3 * var_y * math.sqrt(2 / m)
    est = estimate_t_xi(s)
    assert est.excess_noise == pytest.approx(xi, abs=0.03)


def test_confidence_factor_forms():
    assert confidence_factor(1e-43) == pytest.approx(14.07, abs=0.01)
    assert confidence_factor(1e-10, "approx") == pytest.approx(6.79, abs=0.01)
    assert confidence_factor(1e-10) == pytest.approx(6.3613, abs=1e-3)
    assert confidence_factor(1e-2) == pytest.approx(2.3263, abs=1e-3)
    assert confidence_factor(0.5, "exact") == 0.0
    with pytest.raises(DomainError):
        confidence_factor(0.0)


@given(st.floats(1e-300, 0.4))
def test_confidence_factor_monotone(eps):
    assert confidence_factor(eps / 2, "exact") >= confidence_factor(eps, "exact")
    assert confidence_factor(eps, "exact") < confidence_factor(eps, "approx")


def test_tabulated_discrepancy_warns():
    with pytest.warns(ConfidenceDiscrepancyWarning):
        check_tabulated_confidence(1e-10, 6.34)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        check_tabulated_confidence(1e-43, 14.07)


def test_shift_trivial_cases():
    kw = dict(t_ch=0.3, xi_ch=0.01, t_total=0.05, xi_total=0.1, t_det_prime=0.13, v_a=6.77, mu=2)
    zero = worst_case_shift(n_pe=1e7, w=0.0, **kw)
    assert (zero.t_ch, zero.xi_ch, zero.t_det_prime) == (0.3, 0.01, 0.13)
    big = worst_case_shift(n_pe=1e30, w=6.0, **kw)
    assert big.t_ch == pytest.approx(0.3, abs=1e-12) and big.xi_ch == pytest.approx(0.01, abs=1e-12)
    with pytest.raises(InfeasibleError):
        worst_case_shift(n_pe=10, w=6.0, **kw)


@given(st.floats(0.01, 1.0), st.floats(0.0, 1.0), st.floats(1e3, 1e9), st.floats(0.0, 15.0))
def test_shift_directions(t, xi, n_pe, w):
    assume(t > corr_t(t, xi, 6.77, 2, n_pe, w))
    sh = worst_case_shift(t, xi, t * 0.2, xi + 0.1, 0.13, 6.77, 2, n_pe, w)
    assert sh.t_ch <= t and sh.xi_ch >= xi and sh.t_det_prime >= 0.13
    assert min(sh.corr_t_ch, sh.corr_xi_ch, sh.corr_t_full) >= 0


def test_optimistic_correction_smaller():
    assert corr_t(0.3, 0.05, 6.77, 2, 1e6, 6.0, optimistic=True) < corr_t(0.3, 0.05, 6.77, 2, 1e6, 6.0)


@settings(deadline=None, max_examples=5)
@given(st.integers(0, 2**32 - 1))
def test_corrections_versus_empirical_spread(seed):
    # Bob-referred totals at 5 dB; the ξ interval is exactly w standard
    # deviations of the noise-variance estimate when μ = 2
    t, xi, v_a, mu, n_pe, w = 10**-1.245, 0.0974, 6.77, 2, 5_000, 6.3613
    ests = [estimate_t_xi(simulate_awgn_sample(t, xi, v_a, mu, n_pe, seed, stream=k)) for k in range(1000)]
    sd_t = np.std([e.t_hat for e in ests])
    sd_xi = np.std([e.xi_hat for e in ests])
    assert corr_t(t, xi, v_a, mu, n_pe, w) / sd_t == pytest.approx(w, rel=0.2)
    assert corr_xi(xi, mu, n_pe, w) / sd_xi == pytest.approx(w, rel=0.2)
