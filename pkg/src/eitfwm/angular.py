"""Wigner 3-j and 6-j symbols and hyperfine dipole matrix elements.

Symbols are evaluated from the Racah closed-form factorial sums with exact
integer factorials, so results are accurate to float rounding for the small
quantum numbers of alkali hyperfine manifolds.  Arguments may be integers or
half-integers (``2.5``, ``Fraction(5, 2)``); they are handled internally as
doubled integers.
"""

import math
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError


def _twice(j):
    two_j = Fraction(j) * 2
    if two_j.denominator != 1:
        raise DomainError(f"{j!r} is not an integer or half-integer")
    return int(two_j)


def _fact(two_n):
    # two_n is a doubled integer that must be even and non-negative
    return math.factorial(two_n // 2)


def _triangle(a, b, c):
    """Whether doubled momenta (a, b, c) satisfy the triangle rule."""
    return (
        abs(a - b) <= c <= a + b
        and (a + b + c) % 2 == 0
    )


def _delta(a, b, c):
    return math.sqrt(
        _fact(a + b - c) * _fact(a - b + c) * _fact(-a + b + c)
        / _fact(a + b + c + 2)
    )


@lru_cache(maxsize=4096)
def _w3j(j1, j2, j3, m1, m2, m3):
    if m1 + m2 + m3 != 0:
        return 0.0
    if not _triangle(j1, j2, j3):
        return 0.0
    for j, m in ((j1, m1), (j2, m2), (j3, m3)):
        if abs(m) > j or (j + m) % 2:
            return 0.0
    # Racah formula; all arguments doubled
    k_min = max(0, j2 - j3 - m1, j1 - j3 + m2)
    k_max = min(j1 + j2 - j3, j1 - m1, j2 + m2)
    total = 0
    for k in range(k_min, k_max + 1, 2):
        denom = (
            _fact(k) * _fact(j1 + j2 - j3 - k) * _fact(j1 - m1 - k)
            * _fact(j2 + m2 - k) * _fact(j3 - j2 + m1 + k)
            * _fact(j3 - j1 - m2 + k)
        )
        sign = -1 if (k // 2) % 2 else 1
        total += Fraction(sign, denom)
    pref = (
        _fact(j1 + m1) * _fact(j1 - m1) * _fact(j2 + m2) * _fact(j2 - m2)
        * _fact(j3 + m3) * _fact(j3 - m3)
    )
    phase = -1 if ((j1 - j2 - m3) // 2) % 2 else 1
    return phase * _delta(j1, j2, j3) * math.sqrt(pref) * float(total)


def wigner_3j(j1, j2, j3, m1, m2, m3):
    """Wigner 3-j symbol ``(j1 j2 j3; m1 m2 m3)``."""
    return _w3j(*(_twice(x) for x in (j1, j2, j3, m1, m2, m3)))


@lru_cache(maxsize=4096)
def _w6j(j1, j2, j3, j4, j5, j6):
    triads = ((j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3))
    if not all(_triangle(*t) for t in triads):
        return 0.0
    a1 = j1 + j2 + j3
    a2 = j1 + j5 + j6
    a3 = j4 + j2 + j6
    a4 = j4 + j5 + j3
    b1 = j1 + j2 + j4 + j5
    b2 = j2 + j3 + j5 + j6
    b3 = j3 + j1 + j6 + j4
    t_min = max(a1, a2, a3, a4)
    t_max = min(b1, b2, b3)
    total = 0
    for t in range(t_min, t_max + 1, 2):
        denom = (
            _fact(t - a1) * _fact(t - a2) * _fact(t - a3) * _fact(t - a4)
            * _fact(b1 - t) * _fact(b2 - t) * _fact(b3 - t)
        )
        sign = -1 if (t // 2) % 2 else 1
        total += Fraction(sign * _fact(t + 2), denom)
    pref = 1.0
    for t in triads:
        pref *= _delta(*t)
    return pref * float(total)


def wigner_6j(j1, j2, j3, j4, j5, j6):
    """Wigner 6-j symbol ``{j1 j2 j3; j4 j5 j6}``."""
    return _w6j(*(_twice(x) for x in (j1, j2, j3, j4, j5, j6)))


def clebsch_gordan(j1, m1, j2, m2, j, m):
    """``<j1 m1; j2 m2 | j m>`` in the Condon-Shortley convention."""
    two = _twice(j1) - _twice(j2) + _twice(m)
    phase = -1 if (two // 2) % 2 else 1
    return phase * math.sqrt(2 * Fraction(j) + 1) * wigner_3j(j1, j2, j, m1, m2, -m)


def hyperfine_dipole(f, m_f, f_exc, m_exc, nuclear_spin, j=Fraction(1, 2), j_exc=Fraction(1, 2)):
    """Dipole element for absorption ``|F, m_F> -> |F', m_F'>``.

    Returned in units of the reduced element ``<J||er||J'>`` using the
    Wigner-Eckart reduction through the fine and hyperfine structure.  The
    polarization component is ``q = m_F' - m_F``; elements with ``|q| > 1``
    vanish.

    Overall per-state phases depend on convention; ratios in which each state
    appears once in the numerator and once in the denominator do not.
    """
    q = Fraction(m_exc) - Fraction(m_f)
    if abs(q) > 1:
        return 0.0
    i = Fraction(nuclear_spin)
    f, f_exc = Fraction(f), Fraction(f_exc)
    j, j_exc = Fraction(j), Fraction(j_exc)
    # <F' m'| d_q |F m> = (-1)^(F'-m') (F' 1 F; -m' q m) <F'||d||F>
    three_j = wigner_3j(f_exc, 1, f, -Fraction(m_exc), q, Fraction(m_f))
    if three_j == 0.0:
        return 0.0
    two = _twice(f_exc - Fraction(m_exc))
    phase_m = -1 if (two // 2) % 2 else 1
    # <F'||d||F> = (-1)^(J'+I+F+1) sqrt((2F'+1)(2F+1)) {J' F' I; F J 1} <J'||d||J>
    two = _twice(j_exc + i + f + 1)
    phase_f = -1 if (two // 2) % 2 else 1
    reduced = phase_f * math.sqrt((2 * f_exc + 1) * (2 * f + 1)) * wigner_6j(
        j_exc, f_exc, i, f, j, 1
    )
    return phase_m * three_j * reduced
