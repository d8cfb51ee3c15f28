import math
import typing
from fractions import Fraction
from typing import Optional

from classical_drg.types import RationalLike

__all__ = (
    "to_fraction",
    "signed_sqrt",
    "aitken",
    "float_or_none",
)


def to_fraction(value: RationalLike) -> Fraction:
    """Accepts ints, fractions, "p/q" and decimal strings; floats are rejected to keep exactness visible"""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot read {value!r} as a rational number")


def signed_sqrt(square: Fraction, sign: int) -> float:
    """sign * sqrt(square) for huge exact squares, overflow-free as long as the root fits a float"""
    if square < 0:
        raise ValueError("square has to be nonnegative")
    if square == 0:
        return 0.0
    # split into mantissa ratio and power of two before rooting
    shift = square.numerator.bit_length() - square.denominator.bit_length()
    shift -= shift % 2
    scaled = square / (Fraction(2) ** shift)
    return math.copysign(math.sqrt(float(scaled)) * 2.0 ** (shift // 2), sign)


def aitken(values: typing.Sequence[float]) -> float:
    """Aitken's delta-squared estimate from the last three terms, the last term when it cannot be applied"""
    if not values:
        raise ValueError("no values to extrapolate")
    if len(values) < 3:
        return values[-1]
    x0, x1, x2 = values[-3:]
    second_difference = (x2 - x1) - (x1 - x0)
    if second_difference == 0 or not math.isfinite(second_difference):
        return x2
    estimate = x2 - (x2 - x1) ** 2 / second_difference
    # a non-monotone tail makes the correction meaningless
    if abs(estimate - x2) > 10 * abs(x2 - x1) + 1e-15:
        return x2
    return estimate


def float_or_none(value) -> Optional[float]:
    if value is None:
        return None
    value = float(value)
    return value if math.isfinite(value) else None
