"""Figures of merit for delayed pulses.

Delay is the difference of intensity centres of mass; widths are the FWHM of
the intensity envelope, from the first and last half-maximum crossings with
linear interpolation between samples.
"""

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.signal import resample

from .errors import ConfigurationError, DomainError, MultiPeakError
from .propagation import TimeTrace, propagate

SPLIT_THRESHOLD = 0.05


@dataclass(frozen=True)
class PulseMetrics:
    energy: float
    com_time: float
    fwhm: float
    peak_time: float

    def to_dict(self):
        return asdict(self)


def energy(trace):
    return trace.energy


def com_time(trace):
    """Intensity-weighted centroid time [s]."""
    intensity = trace.intensity
    total = intensity.sum()
    if total == 0:
        raise DomainError("centre of mass of a zero trace is undefined")
    return float(trace.t0 + trace.dt * np.dot(np.arange(len(intensity)), intensity) / total)


def peak_time(trace):
    return float(trace.t0 + trace.dt * np.argmax(trace.intensity))


def fwhm(trace):
    """Full width at half the global intensity maximum [s]."""
    intensity = trace.intensity
    peak = intensity.max()
    if peak == 0:
        raise DomainError("FWHM of a zero trace is undefined")
    half = peak / 2
    above = np.nonzero(intensity >= half)[0]
    i0, i1 = above[0], above[-1]

    def crossing(lo, hi):
        # linear interpolation between sample lo (below) and hi (above)
        y0, y1 = intensity[lo], intensity[hi]
        return lo + (half - y0) / (y1 - y0) * (hi - lo)

    left = crossing(i0 - 1, i0) if i0 > 0 else float(i0)
    right = crossing(i1 + 1, i1) if i1 < len(intensity) - 1 else float(i1)
    return float((right - left) * trace.dt)


def pulse_metrics(trace):
    return PulseMetrics(
        energy=energy(trace),
        com_time=com_time(trace),
        fwhm=fwhm(trace),
        peak_time=peak_time(trace),
    )


def resample_trace(trace, dt):
    """Band-limited resampling of ``trace`` onto spacing ``dt``.

    Raises ``ConfigurationError`` if the energy changes by more than 1e-6
    relative (the trace is not band-limited enough for the new grid).
    """
    n_new = int(round(len(trace) * trace.dt / dt))
    if n_new < 8:
        raise ConfigurationError("resampled trace too short")
    samples = resample(trace.samples, n_new)
    out = TimeTrace(trace.t0, trace.duration / n_new, samples)
    e0, e1 = trace.energy, out.energy
    if e0 > 0 and abs(e1 - e0) > 1e-6 * e0:
        raise ConfigurationError(
            f"resampling changed the energy by {abs(e1 - e0) / e0:.2e} relative"
        )
    return out


def _commensurate(output, reference):
    if math.isclose(output.dt, reference.dt, rel_tol=1e-9):
        return output, reference
    return resample_trace(output, reference.dt), reference


def _nonzero(trace, label):
    if trace.energy == 0:
        raise DomainError(f"{label} trace has zero energy")


def efficiency(output, reference):
    """Energy of ``output`` relative to ``reference``; exceeds 1 under gain."""
    output, reference = _commensurate(output, reference)
    _nonzero(reference, "reference")
    return output.energy / reference.energy


def delay(output, reference):
    """Centre-of-mass delay of ``output`` relative to ``reference`` [s]."""
    output, reference = _commensurate(output, reference)
    _nonzero(reference, "reference")
    _nonzero(output, "output")
    return com_time(output) - com_time(reference)


def peak_delay(output, reference):
    """Peak-to-peak delay [s]; reported alongside the contractual COM delay."""
    output, reference = _commensurate(output, reference)
    return peak_time(output) - peak_time(reference)


def delay_bandwidth_product(output, reference):
    """Delay divided by the transmitted (output) FWHM.

    Raises
    ------
    MultiPeakError
        If ``output`` contains more than one separated pulse.
    """
    segments = split_pulses(output)
    if len(segments) > 1:
        raise MultiPeakError(
            f"output contains {len(segments)} pulses; analyse them separately with split_pulses"
        )
    return delay(output, reference) / fwhm(output)


def fwm_gain(params, trace):
    """Efficiency with 4WM divided by the efficiency with 4WM switched off."""
    if params.eta_eff == 0:
        return 1.0
    with_fwm = efficiency(propagate(trace, params), trace)
    without = efficiency(propagate(trace, params.without_fwm()), trace)
    return with_fwm / without


def modal_capacity(optical_depth):
    """Temporal-mode capacity estimate ``sqrt(D) / 3``."""
    if optical_depth < 0:
        raise DomainError("optical depth must be >= 0")
    return math.sqrt(optical_depth) / 3.0


def split_pulses(trace, threshold=SPLIT_THRESHOLD):
    """Split a trace into separate pulses.

    Regions where the intensity exceeds ``threshold`` times the global peak
    are pulse cores; neighbouring cores are separated at the intensity
    minimum between them.  Returns ``[(sub_trace, PulseMetrics), ...]`` in
    time order.
    """
    intensity = trace.intensity
    peak = intensity.max()
    if peak == 0:
        raise DomainError("cannot split a zero trace")
    above = intensity > threshold * peak
    edges = np.diff(above.astype(np.int8))
    starts = list(np.nonzero(edges == 1)[0] + 1)
    stops = list(np.nonzero(edges == -1)[0] + 1)
    if above[0]:
        starts.insert(0, 0)
    if above[-1]:
        stops.append(len(intensity))
    cuts = [0]
    for stop, start in zip(stops[:-1], starts[1:]):
        cuts.append(stop + int(np.argmin(intensity[stop:start])))
    cuts.append(len(intensity))
    out = []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        seg = trace.samples[lo:hi]
        if seg.size < 8:
            seg = np.concatenate([seg, np.zeros(8 - seg.size)])
        sub = TimeTrace(trace.t0 + lo * trace.dt, trace.dt, seg.copy())
        out.append((sub, pulse_metrics(sub)))
    return out


def metrics_report(output, reference, params=None):
    """Dictionary in the JSON metrics-report layout.

    Single-pulse quantities are ``None`` when the output holds several
    pulses; the ``per_pulse`` list is always filled.
    """
    segments = split_pulses(output)
    report = {
        "efficiency": efficiency(output, reference),
        "delay_s": delay(output, reference),
        "peak_delay_s": peak_delay(output, reference),
        "fwhm_s": None,
        "dbp": None,
        "fwm_gain": None,
        "modal_capacity": None,
        "per_pulse": [m.to_dict() for _, m in segments],
    }
    if len(segments) == 1:
        report["fwhm_s"] = fwhm(output)
        report["dbp"] = report["delay_s"] / report["fwhm_s"]
    if params is not None:
        report["fwm_gain"] = fwm_gain(params, reference)
        report["modal_capacity"] = modal_capacity(params.optical_depth)
    return report
