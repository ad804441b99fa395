"""Medium parameters and the scalar parameter algebra.

All frequencies are angular frequencies in rad/s.

The four-level model couples a ground state ``|g>`` and a metastable state
``|s>`` (the two ground hyperfine manifolds) through the upper excited
manifold ``|e>`` (signal and control) and, off resonance, through the lower
excited manifold ``|e'>`` (control and idler).
"""

import math
import warnings
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .angular import hyperfine_dipole
from .errors import DomainError, ParameterError, SingularParameterError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class IsotopeSpec:
    """D1-line data for one alkali isotope.

    ``f_ground`` is ``(F_g, F_s)``: the manifold holding the population and
    the metastable manifold addressed by the control.  ``f_excited`` is
    ``(F_e', F_e)``: the lower, off-resonant manifold and the upper manifold
    on which the control is resonant.
    """

    name: str
    ground_splitting: float
    excited_splitting: float
    gamma_ge: float
    f_ground: tuple
    f_excited: tuple
    nuclear_spin: Fraction

    def __post_init__(self):
        for field in ("ground_splitting", "excited_splitting", "gamma_ge"):
            value = getattr(self, field)
            if not (math.isfinite(value) and value > 0):
                raise ParameterError(f"{field} must be finite and positive, got {value}")
        if len(self.f_ground) != 2 or len(self.f_excited) != 2:
            raise ParameterError("f_ground and f_excited must each hold two F values")

    @property
    def ground_sublevels(self):
        """Zeeman sublevels m_F of the populated ground manifold."""
        f = Fraction(self.f_ground[0])
        return [-f + k for k in range(int(2 * f) + 1)]

    def default_idler_detunings(self):
        """``(Delta_e', Delta_e)``, detunings of the idler from the two excited manifolds."""
        return (
            self.ground_splitting - self.excited_splitting,
            self.ground_splitting,
        )


RB85 = IsotopeSpec(
    name="Rb85",
    ground_splitting=TWO_PI * 3.035e9,
    excited_splitting=TWO_PI * 361.58e6,
    gamma_ge=math.pi * 5.75e6,
    f_ground=(2, 3),
    f_excited=(2, 3),
    nuclear_spin=Fraction(5, 2),
)

RB87 = IsotopeSpec(
    name="Rb87",
    ground_splitting=TWO_PI * 6.835e9,
    excited_splitting=TWO_PI * 814.5e6,
    gamma_ge=math.pi * 5.75e6,
    f_ground=(1, 2),
    f_excited=(1, 2),
    nuclear_spin=Fraction(3, 2),
)

ISOTOPES = {"rb85": RB85, "rb87": RB87}

# Literature values of the 4WM strength x at the highest optical depth reached
# for each isotope.  Kept only for the discrepancy warning below.
LITERATURE_X = {
    ("Rb85", 550.0): 0.34,
    ("Rb87", 350.0): 0.08,
}


class FWMStrengthDiscrepancyWarning(UserWarning):
    """The closed-form x differs from the literature value for the same settings."""


def get_isotope(name):
    try:
        return ISOTOPES[name.lower()]
    except (KeyError, AttributeError):
        raise DomainError(
            f"unknown isotope {name!r}; expected one of {sorted(ISOTOPES)}"
        ) from None


@dataclass(frozen=True)
class MediumParams:
    """Parameters of the effective four-level medium.

    Parameters
    ----------
    optical_depth : float
        Resonant intensity optical depth ``D`` (transmission ``exp(-D)`` with
        no control field).
    gamma_ge, gamma_gs : float
        Decay rates of the optical and ground-state coherences [rad/s].
    delta : float
        Detuning of the idler from the excited manifold (the 4WM detuning) [rad/s].
    omega : complex
        Control Rabi frequency [rad/s].
    eta_eff : float
        Idler-to-signal coupling-strength ratio.
    """

    optical_depth: float
    gamma_ge: float
    gamma_gs: float
    delta: float
    omega: complex
    eta_eff: float = 0.0

    def __post_init__(self):
        values = {
            "optical_depth": self.optical_depth,
            "gamma_ge": self.gamma_ge,
            "gamma_gs": self.gamma_gs,
            "delta": self.delta,
            "eta_eff": self.eta_eff,
        }
        for name, value in values.items():
            if not math.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value}")
        if not np.isfinite(complex(self.omega)):
            raise ParameterError(f"omega must be finite, got {self.omega}")
        if self.optical_depth < 0:
            raise ParameterError("optical_depth must be >= 0")
        if self.gamma_ge <= 0:
            raise ParameterError("gamma_ge must be > 0")
        if self.gamma_gs < 0:
            raise ParameterError("gamma_gs must be >= 0")
        if self.delta == 0 and self.eta_eff != 0:
            raise SingularParameterError("delta must be nonzero when eta_eff is nonzero")

    @property
    def omega_sq(self):
        """``|Omega|^2``."""
        return abs(complex(self.omega)) ** 2

    def without_fwm(self):
        """Copy with the 4WM coupling switched off (epsilon = 0)."""
        return replace(self, eta_eff=0.0)

    def replace(self, **changes):
        return replace(self, **changes)

    @classmethod
    def for_isotope(cls, isotope, optical_depth, omega, gamma_gs, eta_eff=None, delta=None):
        """Build parameters from isotope constants.

        ``eta_eff`` defaults to the Zeeman-averaged value and ``delta`` to the
        ground hyperfine splitting.
        """
        if eta_eff is None:
            eta_eff = _average_eta(isotope)
        return cls(
            optical_depth=optical_depth,
            gamma_ge=isotope.gamma_ge,
            gamma_gs=gamma_gs,
            delta=isotope.ground_splitting if delta is None else delta,
            omega=omega,
            eta_eff=eta_eff,
        )


def epsilon(params):
    """Effective 4WM coupling ``eta_eff * Omega / Delta`` (complex)."""
    if params.eta_eff == 0:
        return 0j
    if params.delta == 0:
        raise SingularParameterError("epsilon is singular for delta = 0")
    return params.eta_eff * complex(params.omega) / params.delta


def fwm_strength_x(params):
    """Effective 4WM strength ``x = eta_eff * (D/2) * (gamma_ge / Delta)``.

    ``x`` above one marks the regime where 4WM dominates the propagation.
    """
    if params.delta == 0:
        raise SingularParameterError("x is singular for delta = 0")
    return params.eta_eff * (params.optical_depth / 2.0) * (params.gamma_ge / params.delta)


def check_literature_x(isotope_name, optical_depth, x, rtol=0.05):
    """Warn when ``x`` disagrees with a tabulated literature value.

    Returns the ratio ``literature / x`` or ``None`` when no value is
    tabulated for these settings.  The computed ``x`` is never altered.
    """
    reported = LITERATURE_X.get((isotope_name, float(optical_depth)))
    if reported is None:
        return None
    ratio = reported / x
    if abs(ratio - 1.0) > rtol:
        warnings.warn(
            f"x = {x:.4g} from eta*(D/2)*(gamma_ge/Delta) for {isotope_name} at "
            f"D = {optical_depth:g} differs from the literature value {reported:g} "
            f"(ratio {ratio:.3f}); the convention behind the literature value is "
            "unknown and the closed-form value is kept",
            FWMStrengthDiscrepancyWarning,
            stacklevel=2,
        )
    return ratio


def _check_detunings(idler_detunings):
    d_lower, d_upper = idler_detunings
    if d_lower == 0 or d_upper == 0:
        raise SingularParameterError("idler detunings must be nonzero")
    return d_lower, d_upper


def eta_mf(isotope, m_f, idler_detunings=None):
    """Idler-to-signal coupling ratio for one ground Zeeman sublevel.

    For sigma+ light on all three fields, with ``d(F -> F')`` the dipole
    element from ``|F, m_F>`` to ``|F', m_F + 1>``::

        eta = d(s -> e') d(g -> e') / (d(g -> e) d(s -> e))
              + Delta_e' / Delta_e

    The second term is the upper-manifold path, whose dipole factors cancel.
    """
    m_f = Fraction(m_f)
    if m_f not in isotope.ground_sublevels:
        raise DomainError(
            f"m_F = {m_f} is not a sublevel of F = {isotope.f_ground[0]} for {isotope.name}"
        )
    if idler_detunings is None:
        idler_detunings = isotope.default_idler_detunings()
    d_lower, d_upper = _check_detunings(idler_detunings)

    f_g, f_s = isotope.f_ground
    f_lo, f_up = isotope.f_excited
    i = isotope.nuclear_spin
    m_up = m_f + 1

    def d(f, f_exc):
        return hyperfine_dipole(f, m_f, f_exc, m_up, i)

    denominator = d(f_g, f_up) * d(f_s, f_up)
    if denominator == 0:
        raise DomainError(f"signal or control transition forbidden for m_F = {m_f}")
    return d(f_s, f_lo) * d(f_g, f_lo) / denominator + d_lower / d_upper


def eta_mf_table(isotope, idler_detunings=None):
    """``[(m_F, eta_mF), ...]`` over the populated ground manifold."""
    return [(m, eta_mf(isotope, m, idler_detunings)) for m in isotope.ground_sublevels]


@lru_cache(maxsize=64)
def eta_eff(isotope, idler_detunings=None):
    """Mean of ``eta_mf`` over a uniformly populated ground manifold."""
    values = [v for _, v in eta_mf_table(isotope, idler_detunings)]
    return float(np.mean(values))


_average_eta = eta_eff
