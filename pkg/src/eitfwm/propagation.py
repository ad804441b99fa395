"""Pulse synthesis and spectral propagation through the medium.

Fourier convention: the spectrum of a trace is ``A(w) = (1/2pi) int a(t)
exp(+i w t) dt`` and the inverse is ``a(t) = int A(w) exp(-i w t) dw``.  With
this convention the transfer function near the EIT line centre behaves as
``exp(+i w tau)``, so applying it produces a positive delay ``tau``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, NumericalError, WindowTooShortError
from .transfer import _LOG_MAX, log_transfer

MAX_FFT_LENGTH = 2 ** 24
WRAP_FRACTION = 1e-4
WRAP_TAIL = 0.05


@dataclass(frozen=True)
class TimeTrace:
    """Uniformly sampled complex envelope starting at ``t0``."""

    t0: float
    dt: float
    samples: np.ndarray

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=complex)
        if samples.ndim != 1:
            raise ConfigurationError("trace samples must be one-dimensional")
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ConfigurationError(f"dt must be positive, got {self.dt}")
        if samples.size < 8:
            raise ConfigurationError("a trace needs at least 8 samples")
        if not np.all(np.isfinite(samples)):
            raise ConfigurationError("trace samples must be finite")
        object.__setattr__(self, "samples", samples)

    def __len__(self):
        return self.samples.size

    @property
    def times(self):
        return self.t0 + self.dt * np.arange(self.samples.size)

    @property
    def duration(self):
        return self.dt * self.samples.size

    @property
    def intensity(self):
        return np.abs(self.samples) ** 2

    @property
    def energy(self):
        return float(np.sum(self.intensity) * self.dt)

    def padded(self, n):
        """Copy zero-padded at the end to ``n`` samples."""
        if n < len(self):
            raise ConfigurationError("cannot pad to fewer samples")
        out = np.zeros(n, dtype=complex)
        out[: len(self)] = self.samples
        return TimeTrace(self.t0, self.dt, out)

    def trimmed(self, n):
        return TimeTrace(self.t0, self.dt, self.samples[:n].copy())

    def scaled(self, factor):
        return TimeTrace(self.t0, self.dt, factor * self.samples)


@dataclass(frozen=True)
class Spectrum:
    """Spectral amplitudes on the ascending grid ``omega0 + k * d_omega``."""

    omega0: float
    d_omega: float
    samples: np.ndarray

    @property
    def omegas(self):
        return self.omega0 + self.d_omega * np.arange(len(self.samples))


@dataclass(frozen=True)
class PulseSpec:
    """Input pulse description.

    ``width`` is the full width of a square pulse or the intensity FWHM of a
    gaussian.  ``double`` is a pair of square pulses of ``width`` whose
    centres are ``separation`` apart.  ``center=None`` places the pulse (or
    pair) in the middle of the synthesis window.
    """

    shape: str
    width: float
    amplitude: float = 1.0
    separation: float = 0.0
    center: float | None = None

    def __post_init__(self):
        if self.shape not in ("square", "gaussian", "double"):
            raise ConfigurationError(f"unknown pulse shape {self.shape!r}")
        if not self.width > 0:
            raise ConfigurationError("pulse width must be positive")
        if not self.amplitude > 0:
            raise ConfigurationError("pulse amplitude must be positive")
        if self.shape == "double" and not self.separation > self.width:
            raise ConfigurationError("double pulses need separation > width")

    @property
    def total_duration(self):
        """Time from the leading edge of the first pulse to the trailing edge of the last."""
        if self.shape == "double":
            return self.separation + self.width
        return self.width


def _square(n, dt, center, width, amplitude):
    out = np.zeros(n, dtype=complex)
    count = int(round(width / dt))
    start = int(round((center - width / 2) / dt))
    if start < 0 or start + count > n:
        raise ConfigurationError("pulse does not fit inside the synthesis window")
    out[start:start + count] = amplitude
    return out


def synthesize(spec, window, dt):
    """Sample ``spec`` on ``[0, window)`` with spacing ``dt``.

    Raises
    ------
    ConfigurationError
        If ``window < 4 (width + separation)`` or ``dt > width / 32``.
    """
    extent = spec.width + (spec.separation if spec.shape == "double" else 0.0)
    if window < 4 * extent * (1 - 1e-12):
        raise ConfigurationError(
            f"window {window:g} s is shorter than 4 x (width + separation) = {4 * extent:g} s"
        )
    if dt > spec.width / 32 * (1 + 1e-12):
        raise ConfigurationError(f"dt {dt:g} s is coarser than width/32 = {spec.width / 32:g} s")
    n = int(round(window / dt))
    center = window / 2 if spec.center is None else spec.center
    if spec.shape == "square":
        samples = _square(n, dt, center, spec.width, spec.amplitude)
    elif spec.shape == "double":
        half = spec.separation / 2
        samples = _square(n, dt, center - half, spec.width, spec.amplitude)
        samples += _square(n, dt, center + half, spec.width, spec.amplitude)
    else:
        t = dt * np.arange(n)
        samples = spec.amplitude * np.exp(-2 * math.log(2) * ((t - center) / spec.width) ** 2)
        samples = samples.astype(complex)
    return TimeTrace(0.0, dt, samples)


def to_spectrum(trace, pad_to=None):
    """Forward transform under the module's convention.

    The result satisfies ``sum |a|^2 dt = 2 pi sum |A|^2 d_omega``.
    """
    n = len(trace) if pad_to is None else int(pad_to)
    x = trace.padded(n).samples if n != len(trace) else trace.samples
    d_omega = 2 * math.pi / (n * trace.dt)
    omegas = 2 * math.pi * np.fft.fftfreq(n, trace.dt)
    coeffs = np.fft.ifft(x) * (n * trace.dt / (2 * math.pi))
    coeffs *= np.exp(1j * omegas * trace.t0)
    coeffs = np.fft.fftshift(coeffs)
    return Spectrum(float(np.fft.fftshift(omegas)[0]), d_omega, coeffs)


def from_spectrum(spec, t0, dt):
    """Inverse of :func:`to_spectrum` onto the grid ``t0 + k dt``."""
    n = len(spec.samples)
    if not math.isclose(spec.d_omega * n * dt, 2 * math.pi, rel_tol=1e-9):
        raise ConfigurationError("dt is inconsistent with the spectrum's spacing")
    coeffs = np.fft.ifftshift(np.asarray(spec.samples, dtype=complex))
    omegas = 2 * math.pi * np.fft.fftfreq(n, dt)
    coeffs = coeffs * np.exp(-1j * omegas * t0)
    x = np.fft.fft(coeffs) * (2 * math.pi / (n * dt))
    return TimeTrace(t0, dt, x)


def _rough_width(trace):
    intensity = trace.intensity
    peak = intensity.max()
    if peak == 0:
        return trace.duration
    above = np.nonzero(intensity >= peak / 2)[0]
    return max((above[-1] - above[0] + 1) * trace.dt, trace.dt)


def estimated_delay(params):
    """Line-centre group delay ``D gamma_ge / (2 |Omega|^2)`` ignoring decoherence [s]."""
    if params.omega_sq == 0:
        return 0.0
    return params.optical_depth * params.gamma_ge / (2 * params.omega_sq)


def padded_length(trace, params, pad_factor=4):
    """FFT length used by :func:`propagate` for ``trace`` in medium ``params``.

    The next power of two that is at least ``pad_factor`` times the trace,
    holds the trace plus the estimated delay plus ten pulse widths, and
    resolves the EIT window and the pulse bandwidth with eight bins each.
    """
    n = len(trace)
    width = _rough_width(trace)
    span = trace.duration + estimated_delay(params) + 10 * width
    scale = 2 * math.pi / width
    if params.omega_sq > 0 and params.optical_depth > 0:
        eit = params.gamma_gs + params.omega_sq / (params.gamma_ge * max(params.optical_depth, 1.0))
        scale = min(scale, eit)
    n_res = 8 * 2 * math.pi / (scale * trace.dt)
    need = max(pad_factor * n, span / trace.dt, n_res)
    if need > MAX_FFT_LENGTH:
        raise ConfigurationError(
            f"propagation needs {need:.3g} samples (> {MAX_FFT_LENGTH}); use a coarser dt"
        )
    return 1 << int(math.ceil(math.log2(need)))


def propagate(trace, params, *, pad_factor=4, n_fft=None, trim=False, check_wrap=True):
    """Propagate ``trace`` through the medium by spectral multiplication.

    The output is on the padded grid (same ``t0`` and ``dt``, ``n_fft``
    samples) unless ``trim`` is set, in which case it is cut back to the
    input length.

    Raises
    ------
    WindowTooShortError
        If more than 1e-4 of the output energy lies in the last 5% of the
        padded window (energy wrapped around the periodic window).
    NumericalError
        If the transfer function overflows where the input spectrum is nonzero.
    """
    n = padded_length(trace, params, pad_factor) if n_fft is None else int(n_fft)
    if n < len(trace):
        raise ConfigurationError("n_fft is shorter than the trace")
    x = np.zeros(n, dtype=complex)
    x[: len(trace)] = trace.samples
    if params.optical_depth == 0:
        out = x
    else:
        omegas = 2 * math.pi * np.fft.fftfreq(n, trace.dt)
        logt = log_transfer(omegas, params)
        coeffs = np.fft.ifft(x)
        overflow = (logt.real >= _LOG_MAX) & (coeffs != 0)
        if np.any(overflow):
            raise NumericalError(
                f"transfer function overflows at {np.count_nonzero(overflow)} frequencies "
                "carrying input energy"
            )
        with np.errstate(under="ignore"):
            gain = np.exp(logt)
        out = np.fft.fft(gain * coeffs)
    result = TimeTrace(trace.t0, trace.dt, out)
    if check_wrap:
        _check_wrap(result)
    return result.trimmed(len(trace)) if trim else result


def _check_wrap(trace):
    intensity = trace.intensity
    total = intensity.sum()
    if total == 0:
        return
    tail = intensity[int(len(intensity) * (1 - WRAP_TAIL)):].sum()
    if tail > WRAP_FRACTION * total:
        raise WindowTooShortError(
            f"{tail / total:.2e} of the output energy lies in the final 5% of the "
            "window; window too short / aliased delay"
        )
