"""Time-domain integrator of the linearized Maxwell-Bloch equations.

This is an independent route to the output fields: it never evaluates the
closed-form transfer function.  In the co-moving frame (transit time
neglected) and over a normalized length ``z in [0, 1]`` the system reads::

    d/dt b_ge = -gamma_ge b_ge + i G a_s + i Omega b_gs
    d/dt b_gs = -gamma_gs b_gs + i eps G a_i* + i conj(Omega) b_ge
    d/dz a_s  =  i G b_ge
    d/dz a_i* = -i conj(eps) G b_gs

with ``G^2 = D gamma_ge / 2``, ``b = 0`` at ``t0``, ``a_s(0, t)`` the input
and ``a_i*(0, t) = 0``.  ``a_i*`` denotes the conjugate idler envelope.  The
coherences on ``nz + 1`` nodes are stepped with classical RK4; at every stage
the fields are rebuilt from the coherences by cumulative trapezoidal
integration in ``z``.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import ConfigurationError, InstabilityError
from .medium import epsilon
from .propagation import TimeTrace, propagate

BLOWUP = 1e12


class ConvergenceWarning(UserWarning):
    pass


@dataclass(frozen=True)
class GridConfig:
    """Discretization of the integrator: ``nz`` slices, step ``dt``, duration ``window``."""

    nz: int
    dt: float
    window: float

    def check(self, params):
        if self.nz < 50:
            raise ConfigurationError(f"nz must be >= 50, got {self.nz}")
        if not (self.dt > 0 and self.window > 0):
            raise ConfigurationError("dt and window must be positive")
        limit = 0.05
        if params.gamma_ge * self.dt > limit * (1 + 1e-12):
            raise ConfigurationError(
                f"step too coarse: gamma_ge*dt = {params.gamma_ge * self.dt:.3g} > {limit}; "
                f"use dt <= {limit / params.gamma_ge:.3g} s"
            )
        om = abs(complex(params.omega))
        if om * self.dt > limit * (1 + 1e-12):
            raise ConfigurationError(
                f"step too coarse: |Omega|*dt = {om * self.dt:.3g} > {limit}; "
                f"use dt <= {limit / om:.3g} s"
            )

    def refined(self, factor):
        return GridConfig(nz=self.nz * factor, dt=self.dt / factor, window=self.window)


@dataclass
class OracleResult:
    signal: TimeTrace
    idler: TimeTrace


def _input_function(trace):
    t = trace.times
    spline = CubicSpline(t, trace.samples)
    t_end = t[-1]

    def sample(times):
        out = spline(times)
        out = np.where((times < t[0]) | (times > t_end), 0.0, out)
        return out

    return sample


def integrate(trace, params, grid):
    """Integrate the Maxwell-Bloch system for input ``trace``.

    Returns an :class:`OracleResult` with signal and conjugate-idler outputs
    at ``z = L`` sampled on the input grid extended (or cut) to
    ``grid.window``.

    Raises
    ------
    ConfigurationError
        If the grid violates ``nz >= 50``, ``gamma_ge dt <= 0.05`` or
        ``|Omega| dt <= 0.05``.
    InstabilityError
        If any state amplitude exceeds 1e12.
    """
    grid.check(params)
    h = grid.dt
    n_steps = int(round(grid.window / h))
    g = math.sqrt(params.optical_depth * params.gamma_ge / 2.0)
    eps = epsilon(params)
    om = complex(params.omega)
    gge, ggs = params.gamma_ge, params.gamma_gs
    nodes = grid.nz + 1
    dz = 1.0 / grid.nz

    drive = _input_function(trace)
    t_steps = trace.t0 + h * np.arange(n_steps + 1)
    a_in = drive(t_steps)
    a_mid = drive(t_steps[:-1] + h / 2)

    def fields(b1, b2, a0):
        s1 = np.empty(nodes, dtype=complex)
        s2 = np.empty(nodes, dtype=complex)
        s1[0] = s2[0] = 0.0
        np.cumsum(0.5 * dz * (b1[:-1] + b1[1:]), out=s1[1:])
        np.cumsum(0.5 * dz * (b2[:-1] + b2[1:]), out=s2[1:])
        a = a0 + 1j * g * s1
        c = -1j * np.conj(eps) * g * s2
        return a, c

    def rhs(b1, b2, a0):
        a, c = fields(b1, b2, a0)
        d1 = -gge * b1 + 1j * g * a + 1j * om * b2
        d2 = -ggs * b2 + 1j * eps * g * c + 1j * np.conj(om) * b1
        return d1, d2

    b1 = np.zeros(nodes, dtype=complex)
    b2 = np.zeros(nodes, dtype=complex)
    sig = np.empty(n_steps + 1, dtype=complex)
    idl = np.empty(n_steps + 1, dtype=complex)
    a, c = fields(b1, b2, a_in[0])
    sig[0], idl[0] = a[-1], c[-1]
    for k in range(n_steps):
        k1a, k1b = rhs(b1, b2, a_in[k])
        k2a, k2b = rhs(b1 + 0.5 * h * k1a, b2 + 0.5 * h * k1b, a_mid[k])
        k3a, k3b = rhs(b1 + 0.5 * h * k2a, b2 + 0.5 * h * k2b, a_mid[k])
        k4a, k4b = rhs(b1 + h * k3a, b2 + h * k3b, a_in[k + 1])
        b1 = b1 + (h / 6.0) * (k1a + 2 * k2a + 2 * k3a + k4a)
        b2 = b2 + (h / 6.0) * (k1b + 2 * k2b + 2 * k3b + k4b)
        if k % 64 == 0 and not max(np.abs(b1).max(), np.abs(b2).max()) <= BLOWUP:
            raise InstabilityError(
                f"integrator blew up at step {k} (t = {t_steps[k]:.4g} s) with dt = {h:.3g} s; "
                "reduce dt or increase nz"
            )
        a, c = fields(b1, b2, a_in[k + 1])
        sig[k + 1], idl[k + 1] = a[-1], c[-1]
    if not (np.all(np.isfinite(b1)) and np.all(np.isfinite(b2))):
        raise InstabilityError(f"integrator produced non-finite state with dt = {h:.3g} s")

    n_out = int(round(grid.window / trace.dt))
    t_out = trace.t0 + trace.dt * np.arange(n_out)
    ratio = trace.dt / h
    if abs(ratio - round(ratio)) < 1e-9 and round(ratio) >= 1:
        stride = int(round(ratio))
        idx = np.minimum(stride * np.arange(n_out), n_steps)
        sig_out, idl_out = sig[idx], idl[idx]
    else:
        sig_out = CubicSpline(t_steps, sig)(t_out)
        idl_out = CubicSpline(t_steps, idl)(t_out)
    return OracleResult(
        signal=TimeTrace(trace.t0, trace.dt, sig_out),
        idler=TimeTrace(trace.t0, trace.dt, idl_out),
    )


def _rel_l2(x, ref):
    norm = np.linalg.norm(ref)
    diff = np.linalg.norm(x - ref)
    if norm == 0:
        return 0.0 if diff == 0 else math.inf
    return float(diff / norm)


@dataclass
class ConvergenceReport:
    """Relative L2 self-differences of the signal output under refinement.

    ``levels[k]`` is the ``(nz, dt)`` pair of level ``k``; ``differences[k]``
    compares level ``k + 1`` with level ``k``.
    """

    levels: list
    differences: list
    monotone: bool

    @property
    def ratios(self):
        d = self.differences
        return [d[k] / d[k + 1] if d[k + 1] > 0 else math.inf for k in range(len(d) - 1)]

    def to_dict(self):
        return {
            "levels": [{"nz": nz, "dt_s": dt} for nz, dt in self.levels],
            "differences": list(self.differences),
            "ratios": self.ratios,
            "monotone": self.monotone,
        }


def convergence_report(trace, params, grid, levels=3):
    """Run :func:`integrate` at ``(nz, dt)``, ``(2nz, dt/2)``, ``(4nz, dt/4)``.

    A non-monotone sequence of differences triggers a
    :class:`ConvergenceWarning`.
    """
    outputs, cfgs = [], []
    for level in range(levels):
        cfg = grid.refined(2 ** level)
        cfgs.append((cfg.nz, cfg.dt))
        outputs.append(integrate(trace, params, cfg).signal.samples)
    diffs = [_rel_l2(outputs[k], outputs[k + 1]) for k in range(levels - 1)]
    monotone = all(diffs[k + 1] <= diffs[k] for k in range(len(diffs) - 1))
    if not monotone:
        warnings.warn(
            f"oracle refinement is not monotone: differences {diffs}", ConvergenceWarning, stacklevel=2
        )
    return ConvergenceReport(levels=cfgs, differences=diffs, monotone=monotone)


def compare_with_spectral(trace, params, grid, result=None):
    """Relative L2 difference between the oracle signal and the spectral route.

    Both are compared on the oracle's output grid.
    """
    if result is None:
        result = integrate(trace, params, grid)
    n = len(result.signal)
    spectral = propagate(trace, params, n_fft=None)
    if len(spectral) < n:
        spectral = propagate(trace, params, n_fft=1 << int(math.ceil(math.log2(n))))
    return _rel_l2(spectral.samples[:n], result.signal.samples)
