import typing
from fractions import Fraction

__all__ = (
    "Exact",
    "Scalar",
    "RationalLike",
    "ApproxScalar",
    "ExactSequence",
    "ExactMatrix",
)

Exact = Fraction

# floats enter only through limits, square roots and user-supplied series arguments
Scalar = typing.Union[Fraction, float]

RationalLike = typing.Union[int, Fraction, str]

ExactSequence = typing.Tuple[Fraction, ...]
ExactMatrix = typing.Tuple[ExactSequence, ...]


class ApproxScalar(typing.NamedTuple):
    """Floating value with a tracked truncation bound"""

    value: float
    abs_err: float = 0.0

    def __float__(self) -> float:
        return self.value
