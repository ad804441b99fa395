"""Parsing of unit-suffixed quantity strings.

Frequencies are converted to angular frequency in rad/s (a ``Hz`` family
suffix multiplies by 2*pi, a ``rad/s`` family suffix does not).  Times are
converted to seconds.
"""

import math
import re

from .errors import ConfigurationError

TWO_PI = 2.0 * math.pi

_FREQUENCY = {
    "Hz": TWO_PI,
    "kHz": TWO_PI * 1e3,
    "MHz": TWO_PI * 1e6,
    "GHz": TWO_PI * 1e9,
    "rad/s": 1.0,
    "krad/s": 1e3,
    "Mrad/s": 1e6,
    "Grad/s": 1e9,
}

_TIME = {
    "s": 1.0,
    "ms": 1e-3,
    "us": 1e-6,
    "µs": 1e-6,
    "ns": 1e-9,
    "ps": 1e-12,
}

_PATTERN = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([A-Za-zµ/]+)\s*$")


def _split(text):
    if not isinstance(text, str):
        raise ConfigurationError(
            f"expected a string with a unit suffix, got {text!r}"
        )
    match = _PATTERN.match(text)
    if match is None:
        raise ConfigurationError(f"cannot parse quantity {text!r}")
    return float(match.group(1)), match.group(2)


def parse_frequency(text):
    """Return the angular frequency in rad/s denoted by ``text``.

    >>> round(parse_frequency("1 Hz"), 6)
    6.283185
    >>> parse_frequency("12.8 krad/s")
    12800.0
    """
    value, unit = _split(text)
    try:
        return value * _FREQUENCY[unit]
    except KeyError:
        raise ConfigurationError(
            f"unknown frequency unit {unit!r} in {text!r}; "
            f"expected one of {sorted(_FREQUENCY)}"
        ) from None


def parse_time(text):
    """Return the duration in seconds denoted by ``text``."""
    value, unit = _split(text)
    try:
        return value * _TIME[unit]
    except KeyError:
        raise ConfigurationError(
            f"unknown time unit {unit!r} in {text!r}; expected one of {sorted(_TIME)}"
        ) from None


def parse_quantity(text):
    """Parse either a frequency or a time; returns ``(value, kind)``."""
    value, unit = _split(text)
    if unit in _FREQUENCY:
        return value * _FREQUENCY[unit], "frequency"
    if unit in _TIME:
        return value * _TIME[unit], "time"
    raise ConfigurationError(f"unknown unit {unit!r} in {text!r}")
