import cmath
import math

import pytest
from hypothesis import given, strategies as st

from fdbec.core import (ParameterError, PhysicalParams, beta0, collision_rate, derive_params, fig_params,
                        format_params, parse_params)


def test_fig1_derived_quantities():
    p = fig_params(100)
    assert p.delta == 0.0
    assert p.big_gamma == pytest.approx(10.0, abs=1e-15)
    assert p.eta == pytest.approx(0.01, abs=1e-18)


@pytest.mark.parametrize("n, gam, eta", [(1, 1.0, 1.0), (10000, 100.0, 1e-4)])
def test_definitions(n, gam, eta):
    p = fig_params(n)
    assert p.big_gamma == pytest.approx(gam, rel=1e-15)
    assert p.eta == pytest.approx(eta, rel=1e-15)


@pytest.mark.parametrize("kw", [{"n_atoms": 0}, {"gamma": 0.0}, {"gamma": -1.0}, {"g": -0.1},
                                {"kappa": -0.01}, {"n_atoms": 2.5}, {"omega_bar": float("nan")}])
def test_validation_rejects(kw):
    base = dict(omega_bar=50.0, omega_laser=50.0, g=2.5)
    base.update(kw)
    with pytest.raises(ParameterError):
        PhysicalParams(**base)


def test_derive_params_matches_properties():
    p = fig_params(400, 0.03).with_(omega_laser=45.0)
    assert derive_params(p) == (5.0, 20.0, 1.0 / 400)


@pytest.mark.parametrize("n", [1, 10, 100, 12345])
def test_beta0_on_resonance_is_independent_of_n(n):
    b = beta0(fig_params(n))
    assert b == pytest.approx(-2.5j, abs=1e-14)
    assert abs(b) == pytest.approx(2.5, rel=1e-15)


def test_beta0_zero_drive():
    assert beta0(fig_params(100).with_(g=0.0)) == 0


def test_beta0_detuned_value_and_linear_fixed_point():
    p = fig_params(100).with_(omega_laser=40.0)  # Delta = 10
    b = beta0(p)
    assert b == pytest.approx(-25j / (10 + 10j), abs=1e-15)
    # undeformed drift -i Delta b - Gamma b - i g sqrt(N) vanishes at beta0
    assert abs(-1j * p.delta * b - p.big_gamma * b - 1j * p.g * math.sqrt(p.n_atoms)) < 1e-13
    assert cmath.phase(b) == pytest.approx(-3 * math.pi / 4)


@pytest.mark.parametrize("args, expected", [((0.0, 1.0, 1.0), 0.0), ((1.0, 1.0, 1.0), math.pi),
                                            ((2.0, 0.5, 3.0), 1.5 * math.pi)])
def test_collision_rate(args, expected):
    assert collision_rate(*args) == pytest.approx(expected, rel=1e-15)


def test_collision_rate_rejects_negative():
    with pytest.raises(ParameterError):
        collision_rate(-1.0, 1.0, 1.0)


def test_parse_comments_and_whitespace():
    text = "# comment\nomega_bar = 50\nomega_laser=50 # trailing\n\ng = 2.5\ngamma = 1\nn_atoms = 100\nkappa = 0.05\n"
    assert parse_params(text) == fig_params(100, 0.05)


@pytest.mark.parametrize("text, msg", [
    ("omega_bar = 1\n", "missing"),
    ("omega_bar = 1\nomega_laser = 1\ng = 1\ngamma = 1\nn_atoms = 1\nkappa = 0\nfoo = 2\n", "unknown"),
    ("omega_bar = 1\nomega_bar = 2\nomega_laser = 1\ng = 1\ngamma = 1\nn_atoms = 1\nkappa = 0\n", "duplicate"),
    ("omega_bar 1\n", "expected"),
])
def test_parse_errors(text, msg):
    with pytest.raises(ParameterError, match=msg):
        parse_params(text)


finite = st.floats(-1e6, 1e6, allow_nan=False)


@given(ob=finite, ol=finite, g=st.floats(0, 1e3), gam=st.floats(1e-6, 1e3), n=st.integers(1, 10**7),
       k=st.floats(0, 10))
def test_format_parse_round_trip(ob, ol, g, gam, n, k):
    p = PhysicalParams(ob, ol, g, gam, n, k)
    assert parse_params(format_params(p)) == p


@given(n=st.integers(1, 10**6), g=st.floats(0, 100), dl=st.floats(-100, 100))
def test_beta0_solves_linear_drift(n, g, dl):
    p = PhysicalParams(50.0, 50.0 - dl, g, 1.0, n)
    b = beta0(p)
    res = -1j * p.delta * b - p.big_gamma * b - 1j * g * math.sqrt(n)
    assert abs(res) <= 1e-12 * max(1.0, g * math.sqrt(n))
