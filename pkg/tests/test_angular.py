import math
import random
from fractions import Fraction

import pytest
from sympy import Rational
from sympy.physics.wigner import wigner_3j as sym_3j
from sympy.physics.wigner import wigner_6j as sym_6j

from eitfwm.angular import clebsch_gordan, hyperfine_dipole, wigner_3j, wigner_6j

HALF = Fraction(1, 2)


def _sym(x):
    return Rational(Fraction(x).numerator, Fraction(x).denominator)


def _sym_6j(*args):
    try:
        return float(sym_6j(*(_sym(a) for a in args)))
    except ValueError:
        # sympy refuses symbols that violate a triangle condition; they vanish
        return 0.0


@pytest.mark.parametrize(
    "args, expected",
    [
        ((1, 1, 1, 1, 1, 1), 1 / 6),
        ((HALF, HALF, 1, HALF, HALF, 0), 0.5),
        ((2, 2, 2, 2, 2, 2), -3 / 70),
        ((1, 1, 2, 1, 1, 2), 1 / 30),
    ],
)
def test_6j_hand_values(args, expected):
    assert wigner_6j(*args) == pytest.approx(expected, abs=1e-14)


@pytest.mark.parametrize(
    "args, expected",
    [
        ((1, 1, 0, 0, 0, 0), -1 / math.sqrt(3)),
        ((HALF, HALF, 1, HALF, -HALF, 0), 1 / math.sqrt(6)),
        ((1, 1, 2, 1, -1, 0), 1 / math.sqrt(30)),
        ((1, 1, 1, 0, 0, 0), 0.0),
    ],
)
def test_3j_hand_values(args, expected):
    assert wigner_3j(*args) == pytest.approx(expected, abs=1e-14)


def _random_3j(rng):
    j1 = Fraction(rng.randint(0, 8), 2)
    j2 = Fraction(rng.randint(0, 8), 2)
    lo, hi = abs(j1 - j2), j1 + j2
    j3 = lo + rng.randint(0, int(hi - lo))
    m1 = -j1 + rng.randint(0, int(2 * j1))
    m2 = -j2 + rng.randint(0, int(2 * j2))
    return j1, j2, j3, m1, m2, -m1 - m2


def test_3j_against_sympy():
    rng = random.Random(3)
    for _ in range(400):
        args = _random_3j(rng)
        ref = float(sym_3j(*(_sym(a) for a in args)))
        assert wigner_3j(*args) == pytest.approx(ref, abs=1e-12)


def test_6j_against_sympy():
    rng = random.Random(5)
    for _ in range(400):
        args = [Fraction(rng.randint(0, 6), 2) for _ in range(6)]
        assert wigner_6j(*args) == pytest.approx(_sym_6j(*args), abs=1e-12)


def test_selection_rule_vanishes():
    assert wigner_3j(1, 1, 1, 1, 1, 0) == 0.0
    assert wigner_3j(1, 1, 3, 0, 0, 0) == 0.0
    assert wigner_6j(1, 1, 3, 1, 1, 1) == 0.0


def test_clebsch_gordan_orthonormal():
    j1, j2 = Fraction(3, 2), 1
    for j in (HALF, Fraction(3, 2), Fraction(5, 2)):
        m = HALF
        total = sum(
            clebsch_gordan(j1, m - m2, j2, m2, j, m) ** 2
            for m2 in (-1, 0, 1)
            if abs(m - m2) <= j1
        )
        assert total == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("nuclear_spin, f_ground", [(Fraction(5, 2), (2, 3)), (Fraction(3, 2), (1, 2))])
def test_dipole_sum_rule(nuclear_spin, f_ground):
    # summed over excited levels and polarizations, every ground sublevel
    # carries the same total strength
    for f in f_ground:
        for k in range(2 * f + 1):
            m = -f + k
            total = 0.0
            for f_exc in f_ground:
                for q in (-1, 0, 1):
                    if abs(m + q) <= f_exc:
                        total += hyperfine_dipole(f, m, f_exc, m + q, nuclear_spin) ** 2
            assert total == pytest.approx(0.5, abs=1e-13)
