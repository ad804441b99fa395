import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from conftest import scaled
from eitfwm.errors import ParameterError, SingularFrequencyError
from eitfwm.medium import epsilon
from eitfwm.transfer import (
    eval_U,
    eval_V,
    group_delay,
    log_transfer,
    transfer_direct,
    transfer_grid,
    transfer_signal,
)

mpmath.mp.dps = 50


def mp_transfer(w, p):
    """Closed form evaluated literally with 50-digit arithmetic."""
    e2 = mpmath.mpf(abs(epsilon(p))) ** 2
    d, gge, ggs = (mpmath.mpf(x) for x in (p.optical_depth, p.gamma_ge, p.gamma_gs))
    w = mpmath.mpf(w)
    om2 = mpmath.mpf(p.omega_sq)
    i = mpmath.mpc(0, 1)
    v = (i * ggs + w) * (w + i * gge) - om2
    u = mpmath.sqrt((i * w + (i * w - gge) * e2 - ggs) ** 2 + 4 * e2 * om2)
    a = -(d * gge / (4 * v)) * (i * w - i * w * e2 + e2 * gge - ggs)
    c = d * gge * u / (4 * v)
    b = (gge * e2 - i * w - i * e2 * w + ggs) / u
    return mpmath.exp(a) * (b * mpmath.sinh(c) + mpmath.cosh(c))


def matrix_transfer(w, p):
    """Signal transfer from the coupled-field ODE d/dz (a_s, a_i*) = M (a_s, a_i*).

    Derived directly from the Maxwell-Bloch equations in the frequency
    domain, without the closed form.
    """
    eps = epsilon(p)
    om = complex(p.omega)
    s = p.gamma_gs - 1j * w
    q = p.gamma_ge - 1j * w
    g2 = p.optical_depth * p.gamma_ge / 2
    det = q * s + abs(om) ** 2
    m = (g2 / det) * np.array([[-s, -1j * eps * om], [1j * np.conj(eps) * np.conj(om), abs(eps) ** 2 * q]])
    return expm(m)[0, 0]


MODERATE = [
    scaled(optical_depth=10, gamma_gs=0.01, omega=1.0),
    scaled(optical_depth=30, gamma_gs=1e-3, omega=0.5, eta_eff=0.1),
    scaled(optical_depth=20, gamma_gs=0.1, omega=2.0, eta_eff=0.3),
    scaled(optical_depth=5, gamma_gs=0.0, omega=0.7, eta_eff=0.2),
    scaled(optical_depth=1, gamma_gs=0.5, omega=0.0),
]
OMEGAS = [-7.0, -1.3, -0.2, -0.01, 0.003, 0.05, 0.4, 1.1, 3.0, 15.0]


def test_eval_V_examples():
    p = scaled(gamma_gs=0.0, omega=1.5)
    assert eval_V(0.0, p) == pytest.approx(-2.25)
    p = scaled(gamma_gs=0.3, omega=0.0, gamma_ge=2.0)
    assert eval_V(0.0, p) == pytest.approx(-0.6)
    p = scaled(gamma_gs=1.0, gamma_ge=2.0, omega=0.0)
    assert eval_V(3.0, p) == pytest.approx(7 + 9j)


def test_eval_U_examples():
    p = scaled(gamma_gs=0.4, omega=1.0)
    for w in (-2.0, 0.0, 0.7):
        assert eval_U(w, p) == pytest.approx(0.4 - 1j * w)
    p = scaled(optical_depth=10, gamma_gs=0.0, omega=1.0, eta_eff=0.1, delta=1.0)
    assert abs(epsilon(p)) == pytest.approx(0.1)
    assert eval_U(0.0, p) == pytest.approx(math.sqrt(1e-4 + 4e-2), rel=1e-12)
    assert eval_U(0.0, scaled(gamma_gs=0.0, omega=1.0)) == 0


def test_U_branch_continuous_along_grid():
    p = scaled(optical_depth=10, gamma_gs=0.0, omega=1.0, eta_eff=0.5)
    u = eval_U(np.linspace(-5, 5, 2001), p)
    assert np.max(np.abs(np.diff(u))) < 0.05


@pytest.mark.parametrize("p", MODERATE)
def test_log_space_matches_high_precision(p):
    for w in OMEGAS:
        ref = complex(mp_transfer(w, p))
        got = complex(np.exp(log_transfer(w, p)))
        assert abs(got - ref) <= 1e-12 * abs(ref)


@pytest.mark.parametrize("p", MODERATE)
def test_direct_and_log_space_agree(p):
    w = np.array(OMEGAS)
    direct = transfer_direct(w, p)
    logspace = np.exp(log_transfer(w, p))
    assert np.max(np.abs(direct - logspace) / np.abs(logspace)) < 1e-10


@pytest.mark.parametrize(
    "p",
    MODERATE[:4]
    + [
        scaled(optical_depth=550, gamma_gs=2e-3, omega=0.6, eta_eff=0.02),
        scaled(optical_depth=300, gamma_gs=0.0, omega=1.0, eta_eff=0.05),
    ],
)
def test_closed_form_matches_coupled_field_solution(p):
    for w in OMEGAS:
        ref = matrix_transfer(w, p)
        got = log_transfer(w, p)
        assert got.real == pytest.approx(math.log(abs(ref)), abs=1e-8)
        assert abs(np.exp(1j * got.imag) - ref / abs(ref)) < 1e-8


@pytest.mark.parametrize("d", [1.0, 10.0, 50.0])
def test_absorption_law(d):
    p = scaled(optical_depth=d, gamma_gs=0.3, omega=0.0)
    s = transfer_signal(0.0, p)
    assert abs(s.value) ** 2 == pytest.approx(math.exp(-d), rel=1e-10)


def test_absorption_beyond_double_range():
    s = transfer_signal(0.0, scaled(optical_depth=550.0, gamma_gs=0.3, omega=0.0))
    assert 2 * s.log_magnitude == pytest.approx(-550.0, abs=1e-6)
    s = transfer_signal(0.0, scaled(optical_depth=2000.0, gamma_gs=0.3, omega=0.0))
    assert s.value is None
    assert s.log_magnitude == pytest.approx(-1000.0, abs=1e-6)


@pytest.mark.parametrize("omega", [1e-3, 0.5, 1.0, 30.0])
def test_transparency_point(omega):
    for d in (1.0, 100.0, 550.0):
        s = transfer_signal(0.0, scaled(optical_depth=d, gamma_gs=0.0, omega=omega))
        assert abs(s.value - 1) < 1e-12


def test_fwm_gain_example():
    p = scaled(optical_depth=10, gamma_gs=0.0, omega=1.0, eta_eff=0.1, delta=1.0)
    t0 = abs(transfer_signal(0.0, p).value)
    assert t0 == pytest.approx(1.13, abs=5e-3)
    assert t0 == pytest.approx(abs(matrix_transfer(0.0, p)), rel=1e-12)


def test_gain_nondecreasing_in_depth():
    for eta in (0.01, 0.1, 0.5):
        gains = [
            abs(transfer_signal(0.0, scaled(optical_depth=d, gamma_gs=0.0, omega=1.0, eta_eff=eta)).value)
            for d in (1, 10, 50, 100)
        ]
        assert gains[0] >= 1
        assert all(b >= a for a, b in zip(gains, gains[1:]))


def test_value_consistent_with_log_and_phase():
    p = MODERATE[1]
    for w in OMEGAS:
        s = transfer_signal(w, p)
        assert abs(s.value - math.exp(s.log_magnitude) * np.exp(1j * s.phase)) <= 1e-12 * abs(s.value)


def test_singular_frequency_reported():
    with pytest.raises(SingularFrequencyError):
        transfer_signal(0.0, scaled(optical_depth=5.0, gamma_gs=0.0, omega=0.0))


@settings(max_examples=60, deadline=None)
@given(
    d=st.floats(0.0, 600.0),
    ggs=st.floats(0.0, 2.0),
    om=st.floats(0.0, 5.0),
    gge=st.floats(0.1, 3.0),
)
def test_passive_without_fwm(d, ggs, om, gge):
    if ggs == 0 and om == 0:
        ggs = 1e-3
    p = scaled(optical_depth=d, gamma_gs=ggs, omega=om, gamma_ge=gge)
    w = np.linspace(-20 * gge, 20 * gge, 401) + 1e-7
    grid = transfer_grid(w, p)
    assert np.all(grid.log_magnitude <= math.log1p(1e-9))


def test_magnitude_symmetric_without_fwm():
    w = np.linspace(-10, 10, 401)
    for p in (scaled(optical_depth=40, gamma_gs=0.0, omega=1.3), scaled(optical_depth=40, gamma_gs=0.2, omega=0.4)):
        lm = transfer_grid(w, p).log_magnitude
        assert np.allclose(lm, lm[::-1], rtol=0, atol=1e-12)


@given(phi=st.floats(0.0, 2 * math.pi))
def test_control_phase_leaves_magnitude_unchanged(phi):
    base = scaled(optical_depth=30, gamma_gs=0.01, omega=0.8, eta_eff=0.2)
    rotated = base.replace(omega=0.8 * np.exp(1j * phi))
    w = np.array(OMEGAS)
    assert np.allclose(log_transfer(w, rotated).real, log_transfer(w, base).real, atol=1e-12)


def test_epsilon_continuity():
    w = np.linspace(-5, 5, 201)
    base = scaled(optical_depth=50, gamma_gs=0.01, omega=1.0)
    t0 = np.exp(log_transfer(w, base))
    t1 = np.exp(log_transfer(w, base.replace(eta_eff=1e-8)))
    assert np.max(np.abs(t1 - t0)) < 1e-6


def test_grid_contract():
    p = MODERATE[1]
    single = transfer_grid([0.3], p)
    s = transfer_signal(0.3, p)
    assert single[0] == s
    with pytest.raises(ParameterError):
        transfer_grid([0.0, 0.0, 1.0], p)
    with pytest.raises(ParameterError):
        transfer_grid([0.0, 1.0, 3.0], p)
    g = transfer_grid(np.linspace(-3, 3, 601), p)
    assert np.max(np.abs(np.diff(g.phase))) < math.pi
    for k in (0, 300, 600):
        assert np.exp(1j * g.phase[k]) == pytest.approx(np.exp(1j * transfer_signal(g.omega[k], p).phase))


def test_empty_medium_is_identity():
    g = transfer_grid(np.linspace(-10, 10, 51), scaled(optical_depth=0.0, gamma_gs=0.0, omega=0.0))
    assert np.all(g.value == 1)
    assert np.all(g.intensity_transmission == 1)


def test_group_delay_matches_slow_light_formula():
    for d, om in ((100, 1.0), (550, 2.0), (20, 0.5)):
        p = scaled(optical_depth=d, gamma_gs=0.0, omega=om)
        assert group_delay(p) == pytest.approx(d / (2 * om ** 2), rel=1e-6)
