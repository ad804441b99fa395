import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import scaled
from eitfwm.errors import DomainError, MultiPeakError
from eitfwm.metrics import (
    com_time,
    delay,
    delay_bandwidth_product,
    efficiency,
    fwhm,
    fwm_gain,
    metrics_report,
    modal_capacity,
    peak_delay,
    pulse_metrics,
    resample_trace,
    split_pulses,
)
from eitfwm.propagation import PulseSpec, TimeTrace, propagate, synthesize

WIN, DT = 60e-6, 50e-9


def square(center=None, width=6e-6):
    return synthesize(PulseSpec("square", width, center=center), WIN, DT)


def shifted(trace, seconds):
    # shift by an integer number of samples
    k = int(round(seconds / trace.dt))
    return TimeTrace(trace.t0, trace.dt, np.roll(trace.samples, k))


def test_efficiency_examples():
    ref = square()
    assert efficiency(ref, ref) == 1.0
    assert efficiency(ref.scaled(0.5), ref) == pytest.approx(0.25)
    assert efficiency(shifted(ref, 3e-6), ref) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        efficiency(ref, ref.scaled(0.0))


def test_delay_examples():
    ref = square()
    assert delay(shifted(ref, 3e-6), ref) == pytest.approx(3e-6, abs=DT)
    assert delay(ref, ref) == 0.0
    out = propagate(ref, scaled(optical_depth=0.0, gamma_gs=0.0, omega=0.0))
    assert delay(out, ref) == pytest.approx(0.0, abs=1e-15)
    assert peak_delay(shifted(ref, 3e-6), ref) == pytest.approx(3e-6, abs=DT)


@settings(max_examples=25, deadline=None)
@given(shift=st.integers(-100, 100), phase=st.floats(0, 2 * math.pi), scale=st.floats(0.1, 3.0))
def test_efficiency_shift_and_phase_invariance(shift, phase, scale):
    ref = synthesize(PulseSpec("gaussian", 4e-6), WIN, DT)
    out = ref.scaled(scale)
    base = efficiency(out, ref)
    rot = np.exp(1j * phase)

    def move(tr):
        return TimeTrace(tr.t0 + shift * DT, tr.dt, rot * tr.samples)

    assert efficiency(move(out), move(ref)) == pytest.approx(base, rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(a=st.integers(-150, 150), b=st.integers(-150, 150))
def test_delay_antisymmetric(a, b):
    ref = synthesize(PulseSpec("gaussian", 4e-6), WIN, DT)
    x, y = shifted(ref, a * DT), shifted(ref, b * DT)
    assert delay(x, y) == pytest.approx(-delay(y, x), abs=1e-18)


def test_dbp_ratio_and_errors():
    ref = square()
    out = shifted(ref, 18e-6)
    assert delay_bandwidth_product(out, ref) == pytest.approx(18e-6 / fwhm(out))
    assert delay_bandwidth_product(ref, ref) == 0.0
    double = synthesize(PulseSpec("double", 2e-6, separation=8e-6), WIN, DT)
    with pytest.raises(MultiPeakError, match="split_pulses"):
        delay_bandwidth_product(double, double)


def test_dbp_invariant_under_time_rescaling():
    ref = synthesize(PulseSpec("gaussian", 4e-6), WIN, DT)
    out = TimeTrace(0.0, DT, np.roll(ref.samples, 200) * np.linspace(1, 0.5, len(ref)))
    r1 = delay_bandwidth_product(out, ref)
    stretch = 3.7
    r2 = delay_bandwidth_product(
        TimeTrace(0.0, DT * stretch, out.samples), TimeTrace(0.0, DT * stretch, ref.samples)
    )
    assert r2 == pytest.approx(r1, rel=1e-12)


def test_dbp_definition_example():
    # a 6 us wide transmitted pulse delayed by 22.2 us
    ref = square()
    out = shifted(ref, 22.2e-6)
    assert fwhm(out) == pytest.approx(6e-6, abs=DT)
    assert delay_bandwidth_product(out, ref) == pytest.approx(3.7, abs=0.04)


def test_fwhm_interpolates():
    t = np.arange(200) * 0.1
    tri = np.maximum(0, 1 - np.abs(t - 10) / 4)
    tr = TimeTrace(0.0, 0.1, np.sqrt(tri))
    assert fwhm(tr) == pytest.approx(4.0, abs=1e-9)


def test_fwm_gain():
    tr = synthesize(PulseSpec("gaussian", 40.0), 400.0, 0.5)
    assert fwm_gain(scaled(optical_depth=20, gamma_gs=1e-3, omega=0.5), tr) == 1.0
    assert fwm_gain(scaled(optical_depth=0, gamma_gs=1e-3, omega=0.5, eta_eff=0.1), tr) == pytest.approx(1.0)
    assert fwm_gain(scaled(optical_depth=20, gamma_gs=1e-3, omega=0.5, eta_eff=0.1), tr) > 1.0


def test_modal_capacity():
    assert modal_capacity(0) == 0
    assert modal_capacity(9) == pytest.approx(1.0)
    assert modal_capacity(550) == pytest.approx(7.82, abs=0.01)
    values = [modal_capacity(d) for d in np.linspace(0, 1000, 50)]
    assert all(b >= a for a, b in zip(values, values[1:]))
    with pytest.raises(DomainError):
        modal_capacity(-1)


def test_split_pulses():
    double = synthesize(PulseSpec("double", 2e-6, separation=8e-6), WIN, DT)
    parts = split_pulses(double)
    assert len(parts) == 2
    assert parts[0][1].energy == pytest.approx(parts[1][1].energy)
    assert parts[0][1].com_time < parts[1][1].com_time
    assert len(split_pulses(synthesize(PulseSpec("gaussian", 4e-6), WIN, DT))) == 1
    out = propagate(double, scaled(optical_depth=0.0, gamma_gs=0, omega=0))
    assert [m for _, m in split_pulses(out)] == [m for _, m in parts]


def test_pulse_metrics_invariants():
    tr = synthesize(PulseSpec("gaussian", 4e-6), WIN, DT)
    m = pulse_metrics(tr)
    assert m.energy > 0 and m.fwhm > 0
    assert tr.t0 <= m.com_time <= tr.t0 + tr.duration
    assert m.com_time == pytest.approx(com_time(tr))


def test_resampled_comparison():
    ref = synthesize(PulseSpec("gaussian", 4e-6), WIN, DT)
    fine = synthesize(PulseSpec("gaussian", 4e-6), WIN, DT / 2)
    assert efficiency(fine, ref) == pytest.approx(1.0, rel=1e-6)
    assert delay(fine, ref) == pytest.approx(0.0, abs=1e-3 * DT)
    back = resample_trace(fine, DT)
    assert back.dt == pytest.approx(DT)
    assert back.energy == pytest.approx(fine.energy, rel=1e-6)


def test_report_layout():
    ref = square()
    p = scaled(optical_depth=0.0, gamma_gs=0.0, omega=0.0)
    rep = metrics_report(propagate(ref, p), ref, p)
    assert set(rep) >= {"efficiency", "delay_s", "fwhm_s", "dbp", "fwm_gain", "modal_capacity", "per_pulse"}
    assert rep["efficiency"] == pytest.approx(1.0)
    assert rep["delay_s"] == pytest.approx(0.0, abs=1e-15)
    double = synthesize(PulseSpec("double", 2e-6, separation=8e-6), WIN, DT)
    rep = metrics_report(double, double)
    assert rep["dbp"] is None and len(rep["per_pulse"]) == 2
