"""Fixtures for the acceptance-scale checks."""

import random
from fractions import Fraction

import mpmath
import pytest

from effdom.codes import Interval

ACCEPTANCE_SEED = 20240


@pytest.fixture
def acceptance_rng() -> random.Random:
    return random.Random(ACCEPTANCE_SEED)


@pytest.fixture(scope="session")
def pi_reference() -> Interval:
    """Exact rational bracket around π of width 2·10⁻⁵⁵, taken from mpmath at 60 digits."""
    mpmath.mp.dps = 60
    digits = mpmath.nstr(mpmath.mp.pi, 58, strip_zeros=False)
    centre = Fraction(digits)
    slack = Fraction(1, 10**55)
    return Interval(centre - slack, centre + slack)
