"""Slow light and four-wave mixing in a Lambda-type atomic ensemble.

The closed-form signal transfer function (:mod:`eitfwm.transfer`) is applied
to input pulses by FFT (:mod:`eitfwm.propagation`), cross-checked against a
direct Maxwell-Bloch integrator (:mod:`eitfwm.oracle`), reduced to pulse
metrics (:mod:`eitfwm.metrics`) and fitted to measured data
(:mod:`eitfwm.fitting`).  All frequencies are angular (rad/s) and all times
are in seconds.
"""

from .errors import (
    ConfigurationError,
    DomainError,
    EITError,
    IllPosedError,
    InstabilityError,
    MultiPeakError,
    NumericalError,
    ParameterError,
    SingularFrequencyError,
    SingularParameterError,
    WindowTooShortError,
)
from .fitting import FitConfig, FitResult, ObservationRow, fit_global, predict
from .medium import (
    ISOTOPES,
    RB85,
    RB87,
    IsotopeSpec,
    MediumParams,
    epsilon,
    eta_eff,
    eta_mf,
    eta_mf_table,
    fwm_strength_x,
)
from .metrics import (
    delay,
    delay_bandwidth_product,
    efficiency,
    fwhm,
    fwm_gain,
    metrics_report,
    modal_capacity,
    split_pulses,
)
from .oracle import GridConfig, compare_with_spectral, convergence_report, integrate
from .propagation import PulseSpec, TimeTrace, propagate, synthesize
from .transfer import group_delay, log_transfer, transfer_grid, transfer_signal
from .units import parse_frequency, parse_time

__version__ = "0.1.0"
