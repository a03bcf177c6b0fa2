import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.linalg import solve_continuous_lyapunov, solve_discrete_lyapunov

import fdbec.oracles as oracles
from fdbec.core import beta0, fig_params
from fdbec.oracles import (OracleInstability, TrajectoryConfig, meanfield_fixed_point, mode_verdict,
                           nonlinear_meanfield, relaxation_fit, resolvent_spectrum, sde_spectrum,
                           trajectory_rng)
from fdbec.spectrum import FluctuationCoeffs, char_function_E, default_grid, linearization_coeffs, spectrum_at
from fdbec.steady_state import solve_beta


def coeffs(p, mode="rederived"):
    return linearization_coeffs(solve_beta(p), p, mode)


# --- resolvent ----------------------------------------------------------------


def test_resolvent_null_when_b_vanishes():
    c = FluctuationCoeffs(-10 - 3j, 0j, "rederived")
    assert np.all(resolvent_spectrum(default_grid(), c, 10.0) == 0.0)


def test_resolvent_ratio_is_two_gamma():
    p = fig_params(100, 0.05).with_(omega_laser=47.0)
    r = spectrum_at(p)
    ratio = resolvent_spectrum(r.omega_over_gamma, r.coeffs, p.big_gamma) / r.s_values
    assert np.var(ratio) <= 1e-20 * ratio.mean() ** 2
    assert ratio.mean() == pytest.approx(2 * p.big_gamma, rel=1e-13)


def test_symmetrized_closed_form():
    p = fig_params(200, 0.03)
    c = coeffs(p)
    w = default_grid()
    sym = resolvent_spectrum(w, c, p.big_gamma, "symmetrized")
    expected = 2 * p.big_gamma * (np.abs(1j * w - np.conj(c.a_coef)) ** 2 + abs(c.b_coef) ** 2) \
        / np.abs(char_function_E(w, c)) ** 2
    assert np.allclose(sym, expected, rtol=1e-12)


def test_symmetrized_integral_equals_stationary_variance():
    p = fig_params(100, 0.0)
    c = coeffs(p)
    D = 2 * p.big_gamma * np.eye(2)
    var = solve_continuous_lyapunov(c.drift_matrix, -D)[0, 0].real
    f = lambda w: resolvent_spectrum(np.array([w]), c, p.big_gamma, "symmetrized")[0]  # noqa: E731
    total = quad(f, -np.inf, np.inf, limit=400, epsabs=0, epsrel=1e-10)[0] / (2 * np.pi)
    assert total == pytest.approx(var, rel=1e-8)


def test_resolvent_rejects_unknown_ordering():
    with pytest.raises(ValueError):
        resolvent_spectrum(np.zeros(1), FluctuationCoeffs(-1 + 0j, 0j, "rederived"), 1.0, "weyl")


def test_resolvent_warns_when_unstable():
    with pytest.warns(RuntimeWarning, match="Hurwitz"):
        resolvent_spectrum(np.linspace(-1, 1, 5), FluctuationCoeffs(-1 + 0j, 2 + 0j, "rederived"), 1.0)


# --- stochastic trajectories --------------------------------------------------


def test_streams_are_reproducible_and_distinct():
    a = trajectory_rng(3, 7).standard_normal(5)
    assert np.array_equal(a, trajectory_rng(3, 7).standard_normal(5))
    assert not np.array_equal(a, trajectory_rng(3, 8).standard_normal(5))
    assert not np.array_equal(a, trajectory_rng(4, 7).standard_normal(5))


def test_sde_bit_reproducible():
    c = coeffs(fig_params(100, 0.0))
    cfg = TrajectoryConfig.for_rates(c, 10.0, gamma_t=40.0, n_traj=8, seed=11)
    a, b = sde_spectrum(c, 10.0, cfg), sde_spectrum(c, 10.0, cfg)
    assert np.array_equal(a.spectrum, b.spectrum) and a.variance == b.variance


def test_sde_unstable_raises():
    c = FluctuationCoeffs(-1.0 + 0j, 3.0 + 0j, "rederived")
    cfg = TrajectoryConfig(dt=1e-2, t_total=100.0, n_traj=1)
    with pytest.raises(OracleInstability):
        sde_spectrum(c, 1.0, cfg)


def test_config_validation():
    with pytest.raises(ValueError):
        TrajectoryConfig(dt=0.0, t_total=1.0)
    with pytest.raises(ValueError):
        TrajectoryConfig(dt=0.1, t_total=1.0, burn_in=1.0)


@pytest.mark.slow
def test_ornstein_uhlenbeck_limit():
    """B = 0: a Lorentzian of half-width |Re A| centred where the free drift oscillates."""
    p = fig_params(100, 0.01).with_(omega_laser=40.0)  # Delta = 10
    c = coeffs(p)
    assert c.b_coef == 0
    gam, centre = -c.a_coef.real, c.a_coef.imag
    cfg = TrajectoryConfig.for_rates(c, p.big_gamma, n_traj=1024, seed=5)
    est = sde_spectrum(c, p.big_gamma, cfg)
    edges = np.arange(-50.0, 50.1, 5.0)
    _, mean, err = est.band_average(edges)
    mask = est.band_mask(edges)
    lorentz = 2 * p.big_gamma / ((est.omega - centre) ** 2 + gam**2)
    ref = (mask * lorentz).sum(axis=1) / mask.sum(axis=1)
    assert np.max(np.abs(mean - ref) / err) < 3.0
    centres = est.band_average(edges)[0]
    assert abs(centres[np.argmax(mean)] - centre) <= 5.0
    assert gam == pytest.approx(p.big_gamma)


def test_parseval_identity_holds_per_trajectory_in_expectation():
    c = coeffs(fig_params(100, 0.0))
    cfg = TrajectoryConfig.for_rates(c, 10.0, n_traj=256, seed=2)
    est = sde_spectrum(c, 10.0, cfg)
    assert abs(est.parseval_gap) <= 3 * est.parseval_stderr


@pytest.mark.slow
def test_euler_maruyama_bias_is_first_order():
    """Variance matches the exact discrete-time prediction; its offset from the continuum halves with dt."""
    p = fig_params(100, 0.0)
    c = coeffs(p)
    D = 2 * p.big_gamma * np.eye(2)
    continuum = solve_continuous_lyapunov(c.drift_matrix, -D)[0, 0].real
    bias = []
    for s in (0.08, 0.04):
        cfg = TrajectoryConfig.for_rates(c, p.big_gamma, dt_scale=s, n_traj=2048, seed=1)
        discrete = solve_discrete_lyapunov(np.eye(2) + c.drift_matrix * cfg.dt, D * cfg.dt)[0, 0].real
        est = sde_spectrum(c, p.big_gamma, cfg)
        assert abs(est.variance - discrete) <= 3 * est.variance_stderr
        bias.append(est.variance - continuum)
    assert 1.5 < bias[0] / bias[1] < 2.7
    # the exact discrete prediction shows the same order without sampling noise
    dts = [0.08 / 20, 0.04 / 20, 0.02 / 20]
    ex = [solve_discrete_lyapunov(np.eye(2) + c.drift_matrix * h, D * h)[0, 0].real - continuum for h in dts]
    assert ex[0] / ex[1] == pytest.approx(2.0, rel=0.1)
    assert ex[1] / ex[2] == pytest.approx(2.0, rel=0.05)


# --- nonlinear mean field -----------------------------------------------------


def test_meanfield_linear_case_converges_to_beta0():
    p = fig_params(100, 0.01)
    assert abs(meanfield_fixed_point(p, beta0(p) + 0.3 - 0.2j) - beta0(p)) < 1e-10


def test_meanfield_matches_root_finder():
    p = fig_params(100, 0.05)
    assert abs(meanfield_fixed_point(p, beta0(p)) - solve_beta(p).beta) <= 1e-8


def test_meanfield_divergence_names_point(monkeypatch):
    monkeypatch.setattr(oracles, "DIVERGENCE_LIMIT", 1.0)
    p = fig_params(100, 0.05)
    with pytest.raises(OracleInstability, match="n_atoms=100"):
        nonlinear_meanfield(p, 0j, 1.0)


def test_relaxation_rates_select_rederived_mode():
    p = fig_params(100, 0.05)
    beta = solve_beta(p).beta
    fitted = relaxation_fit(p, beta)
    model = linearization_coeffs(beta, p, "rederived").eigenvalues()
    assert min(abs(fitted[0] - m) for m in model) / abs(model[0]) < 1e-4
    v = mode_verdict(p, beta, fitted)
    assert v["supported"] == ["rederived"]
    assert v["errors"]["paper"] > 0.1
