"""Signal transfer function of the EIT medium with four-wave mixing.

With ``s = gamma_gs - i w``, ``p = gamma_ge - i w`` and ``e2 = |epsilon|^2``::

    V(w) = (i gamma_gs + w)(w + i gamma_ge) - |Omega|^2
    U(w) = sqrt((i w + (i w - gamma_ge) e2 - gamma_gs)^2 + 4 e2 |Omega|^2)
    A    = -(D gamma_ge / 4V) (i w - i w e2 + e2 gamma_ge - gamma_gs)
    C    = D gamma_ge U / (4V)
    B    = (s + e2 p) / U
    T(w) = exp(A) [B sinh C + cosh C]

``T`` is even in ``U``.  At optical depths of several hundred the factors
``exp(A)``, ``cosh C`` over- or underflow double precision, so evaluation
works with ``log T`` throughout:

* ``|C| <= 1``: ``log T = A + log(cosh C + (s + e2 p) K sinhc C)`` with
  ``K = D gamma_ge / 4V``.  No division by ``U`` happens, so the EIT line
  centre (``U = 0``) is regular.
* ``|C| > 1``: ``T = exp(A+C)(1+B)/2 + exp(A-C)(1-B)/2`` combined with a
  complex log-sum-exp.  ``1 - B`` is formed as ``4 e2 |Omega|^2 / (U (U + N))``
  with the sign of ``U`` aligned to ``N = s + e2 p`` to avoid cancellation.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, SingularFrequencyError
from .medium import epsilon

# exp() of a real part outside this range is not a normal double
_LOG_MAX = 709.0
_LOG_MIN = -745.0
_SMALL_C = 1.0
_SERIES_C = 1e-3


@dataclass(frozen=True)
class TransferSample:
    """Transfer function at one angular frequency.

    ``value`` is ``None`` when ``|T|`` is not representable as a double;
    ``log_magnitude`` and ``phase`` are always finite for finite parameters.
    """

    omega: float
    value: complex | None
    log_magnitude: float
    phase: float


@dataclass(frozen=True)
class TransferGrid:
    """Vectorized transfer function on a frequency grid.

    ``value`` holds NaN where ``representable`` is False.  ``phase`` is
    unwrapped along the grid; ``u`` is the auxiliary ``U`` with a branch that
    is continuous along the grid.
    """

    omega: np.ndarray
    value: np.ndarray
    log_magnitude: np.ndarray
    phase: np.ndarray
    representable: np.ndarray
    u: np.ndarray

    def __len__(self):
        return len(self.omega)

    def __getitem__(self, k):
        return TransferSample(
            omega=float(self.omega[k]),
            value=complex(self.value[k]) if self.representable[k] else None,
            log_magnitude=float(self.log_magnitude[k]),
            phase=float(self.phase[k]),
        )

    def samples(self):
        return [self[k] for k in range(len(self))]

    @property
    def intensity_transmission(self):
        """``|T|^2``; underflows to zero rather than NaN."""
        return np.exp(2.0 * self.log_magnitude)


def eval_V(omega, params):
    """``(i gamma_gs + w)(w + i gamma_ge) - |Omega|^2``."""
    w = np.asarray(omega, dtype=float)
    return (1j * params.gamma_gs + w) * (w + 1j * params.gamma_ge) - params.omega_sq


def _radicand(w, params, e2):
    core = 1j * w + (1j * w - params.gamma_ge) * e2 - params.gamma_gs
    return core * core + 4.0 * e2 * params.omega_sq


def eval_U(omega, params):
    """Principal square root of the ``U`` radicand.

    For array input the branch is then made continuous along the array.
    """
    w = np.asarray(omega, dtype=float)
    e2 = abs(epsilon(params)) ** 2
    u = np.sqrt(_radicand(w, params, e2).astype(complex))
    if u.ndim == 1 and u.size > 1:
        u = _continuous_branch(u)
    return u if u.ndim else complex(u)


def _continuous_branch(u):
    out = u.copy()
    for k in range(1, len(out)):
        if abs(out[k] - out[k - 1]) > abs(-out[k] - out[k - 1]):
            out[k] = -out[k]
    return out


def _check_params(params):
    vals = (params.optical_depth, params.gamma_ge, params.gamma_gs, params.delta)
    if not (np.all(np.isfinite(vals)) and np.isfinite(complex(params.omega))):
        raise ParameterError("non-finite medium parameter")


def log_transfer(omega, params):
    """Complex ``log T(w)`` (principal imaginary part) for scalar or array ``omega``.

    Raises
    ------
    SingularFrequencyError
        If ``V(w) = 0`` exactly at a requested frequency.
    """
    _check_params(params)
    w = np.atleast_1d(np.asarray(omega, dtype=float))
    if not np.all(np.isfinite(w)):
        raise ParameterError("non-finite frequency")
    if params.optical_depth == 0:
        out = np.zeros(w.shape, dtype=complex)
        return out if np.ndim(omega) else complex(out[0])

    e2 = abs(epsilon(params)) ** 2
    om2 = params.omega_sq
    v = eval_V(w, params)
    if np.any(v == 0):
        bad = w[v == 0]
        raise SingularFrequencyError(f"V(omega) = 0 at omega = {bad[:5]} rad/s")

    s = params.gamma_gs - 1j * w
    p = params.gamma_ge - 1j * w
    numer = s + e2 * p
    kappa = params.optical_depth * params.gamma_ge / (4.0 * v)
    a = kappa * (s - e2 * p)
    u = np.sqrt(numer * numer + 4.0 * e2 * om2)
    # align the branch with numer so that u + numer never cancels
    flip = (u.real * numer.real + u.imag * numer.imag) < 0
    u = np.where(flip, -u, u)
    c = kappa * u

    logt = np.empty(w.shape, dtype=complex)
    small = np.abs(c) <= _SMALL_C
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if np.any(small):
            cs = c[small]
            c2 = cs * cs
            sinhc = np.where(
                np.abs(cs) < _SERIES_C,
                1.0 + c2 / 6.0 + c2 * c2 / 120.0,
                np.sinh(cs) / np.where(cs == 0, 1.0, cs),
            )
            bracket = np.cosh(cs) + numer[small] * kappa[small] * sinhc
            logt[small] = a[small] + np.log(bracket)
        big = ~small
        if np.any(big):
            ub, nb = u[big], numer[big]
            one_plus = (ub + nb) / ub
            one_minus = 4.0 * e2 * om2 / (ub * (ub + nb))
            l1 = a[big] + c[big] + np.log(0.5 * one_plus)
            l2 = a[big] - c[big] + np.log(0.5 * one_minus + 0j)
            logt[big] = _logaddexp_complex(l1, l2)
    return logt if np.ndim(omega) else complex(logt[0])


def _logaddexp_complex(l1, l2):
    swap = l2.real > l1.real
    hi = np.where(swap, l2, l1)
    lo = np.where(swap, l1, l2)
    with np.errstate(invalid="ignore"):
        ratio = np.exp(lo - hi)
    ratio = np.where(np.isneginf(lo.real), 0.0, ratio)
    return hi + np.log1p(ratio)


def _sample(w, logt):
    lm = logt.real
    representable = _LOG_MIN < lm < _LOG_MAX
    value = complex(np.exp(logt)) if representable else None
    return TransferSample(omega=float(w), value=value, log_magnitude=float(lm), phase=float(logt.imag))


def transfer_signal(omega, params):
    """Signal transfer function at one angular frequency [rad/s]."""
    return _sample(omega, log_transfer(float(omega), params))


def transfer_grid(omegas, params):
    """Transfer function on a uniform, strictly increasing frequency grid."""
    w = np.asarray(omegas, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise ParameterError("omegas must be a non-empty 1-D array")
    if w.size > 1:
        steps = np.diff(w)
        if np.any(steps <= 0):
            raise ParameterError("omegas must be strictly increasing")
        if np.max(np.abs(steps - steps[0])) > 1e-9 * max(abs(steps[0]), np.max(np.abs(w))):
            raise ParameterError("omegas must be uniformly spaced")
    logt = log_transfer(w, params)
    lm = logt.real
    representable = (lm > _LOG_MIN) & (lm < _LOG_MAX)
    with np.errstate(over="ignore", under="ignore"):
        value = np.where(representable, np.exp(logt), np.nan + 0j)
    phase = np.unwrap(logt.imag)
    if params.optical_depth == 0:
        u = np.zeros_like(logt)
    else:
        u = eval_U(w, params)
        u = np.atleast_1d(u)
    return TransferGrid(
        omega=w,
        value=value,
        log_magnitude=lm,
        phase=phase,
        representable=representable,
        u=u,
    )


def transfer_direct(omega, params):
    """Literal evaluation of the closed form in native complex arithmetic.

    No overflow protection and no special handling of ``U = 0``; used as a
    reference at moderate optical depth.
    """
    w = np.asarray(omega, dtype=float)
    e2 = abs(epsilon(params)) ** 2
    d, gge, ggs = params.optical_depth, params.gamma_ge, params.gamma_gs
    v = eval_V(w, params)
    u = np.sqrt(_radicand(w, params, e2).astype(complex))
    a = -(d * gge / (4 * v)) * (1j * w - 1j * w * e2 + e2 * gge - ggs)
    c = d * gge * u / (4 * v)
    b = (gge * e2 - 1j * w - 1j * e2 * w + ggs) / u
    return np.exp(a) * (b * np.sinh(c) + np.cosh(c))


def group_delay(params, h=None):
    """Group delay ``d(arg T)/dw`` at ``w = 0`` by central differences [s].

    The default step is a small fraction of the EIT window width.
    """
    if h is None:
        scale = params.gamma_gs + params.omega_sq / (params.gamma_ge * max(params.optical_depth, 1.0))
        if scale == 0:
            scale = params.gamma_ge
        h = 1e-4 * scale
    lp = log_transfer(h, params)
    lm = log_transfer(-h, params)
    dphi = np.angle(np.exp(1j * (lp.imag - lm.imag)))
    return dphi / (2.0 * h)
