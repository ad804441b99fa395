"""Exception hierarchy.

Every exception carries an ``exit_code`` used by the command-line front end:
2 for configuration/input problems, 3 for numerical failures.
"""


class EITError(Exception):
    exit_code = 1


class ConfigurationError(EITError, ValueError):
    """Invalid configuration, grid, or input data."""

    exit_code = 2


class ParameterError(ConfigurationError):
    """A physical parameter is out of its allowed domain."""


class SingularParameterError(ParameterError):
    """A parameter combination makes a formula singular (e.g. zero detuning)."""


class DomainError(ConfigurationError):
    """An argument lies outside the domain of an operation."""


class IllPosedError(ConfigurationError):
    """A fit problem cannot determine its parameters."""


class MultiPeakError(DomainError):
    """A single-pulse metric was requested on a multi-pulse trace."""


class NumericalError(EITError, ArithmeticError):
    """A computation failed numerically (overflow, instability, aliasing)."""

    exit_code = 3


class SingularFrequencyError(NumericalError):
    """The transfer-function denominator vanishes at a requested frequency."""


class WindowTooShortError(NumericalError):
    """Output energy wrapped around the end of the periodic time window."""


class InstabilityError(NumericalError):
    """The time-domain integrator blew up."""
