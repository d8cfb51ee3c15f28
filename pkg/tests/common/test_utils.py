import math
from fractions import Fraction

import pytest

from classical_drg.utils import aitken, float_or_none, signed_sqrt, to_fraction


@pytest.mark.parametrize("value, expected", [
    (3, Fraction(3)),
    (Fraction(2, 6), Fraction(1, 3)),
    (" -5/4 ", Fraction(-5, 4)),
    ("0.25", Fraction(1, 4)),
])
def test_to_fraction(value, expected):
    assert to_fraction(value) == expected


@pytest.mark.parametrize("value", [0.5, True, None, [1]])
def test_to_fraction_invalid(value):
    with pytest.raises(TypeError):
        to_fraction(value)


def test_signed_sqrt():
    assert signed_sqrt(Fraction(9, 4), 1) == 1.5
    assert signed_sqrt(Fraction(9, 4), -1) == -1.5
    assert signed_sqrt(Fraction(0), -1) == 0.0
    huge = Fraction(4 ** 700, 9)
    assert signed_sqrt(huge, 1) == pytest.approx(2.0 ** 700 / 3, rel=1e-15)
    with pytest.raises(ValueError):
        signed_sqrt(Fraction(-1), 1)


def test_aitken():
    values = [1 + 0.5 ** n for n in range(10)]
    assert aitken(values) == pytest.approx(1.0, abs=1e-12)
    assert aitken([2.0, 3.0]) == 3.0
    assert aitken([1.0, 1.0, 1.0]) == 1.0
    with pytest.raises(ValueError):
        aitken([])


def test_aitken_keeps_last_term_without_geometric_tail():
    # nearly linear tail, the correction would jump far past the data
    assert aitken([0.0, 1.0, 2.01]) == 2.01


def test_float_or_none():
    assert float_or_none(Fraction(1, 4)) == 0.25
    assert float_or_none(None) is None
    assert float_or_none(math.inf) is None
    assert float_or_none(math.nan) is None
