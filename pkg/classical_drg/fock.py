"""
Quantum decomposition A = A+ + A- + Ao restricted to the primary module, on both sides
of the central limit theorem: scaled finite-diameter coefficients and the interacting
Fock space coefficients they converge to.
"""
import enum
import itertools
import logging
import typing
from dataclasses import dataclass

import numpy as np

from classical_drg.exceptions import DegenerateVariance, InsufficientTruncation, RegimeError
from classical_drg.gibbs import gibbs_variance
from classical_drg.limits import LimitRegime
from classical_drg.params import ClassicalParams, SpectralTable, intersection_array
from classical_drg.qseries import gauss_bracket
from classical_drg.types import RationalLike
from classical_drg.utils import signed_sqrt, to_fraction

__all__ = (
    "Letter",
    "EpsilonWord",
    "FockCoefficients",
    "all_words",
    "finite_coefficients",
    "limit_coefficients",
    "mixed_moment",
    "mixed_moment_finite",
    "mixed_moment_limit",
    "limit_moment",
    "finite_moment",
)

logger = logging.getLogger(__name__)


class Letter(enum.Enum):
    PLUS = "+"
    MINUS = "-"
    CIRCLE = "o"


_LETTER_ALIASES = {
    "+": Letter.PLUS,
    "p": Letter.PLUS,
    "-": Letter.MINUS,
    "m": Letter.MINUS,
    "o": Letter.CIRCLE,
    "c": Letter.CIRCLE,
    "0": Letter.CIRCLE,
}


@dataclass(frozen=True)
class EpsilonWord:
    """Letters in application order, the first letter acts first"""

    letters: typing.Tuple[Letter, ...]

    def __post_init__(self):
        if not self.letters:
            raise ValueError("word has to contain at least one letter")
        object.__setattr__(self, "letters", tuple(Letter(letter) for letter in self.letters))

    @classmethod
    def parse(cls, value: str) -> "EpsilonWord":
        try:
            return cls(tuple(_LETTER_ALIASES[char] for char in value.strip().lower()))
        except KeyError as e:
            raise ValueError(f"unknown letter {e.args[0]!r}, use one of +-o (or p, m, c)") from e

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return "".join(letter.value for letter in self.letters)


def all_words(max_length: int, min_length: int = 1) -> typing.Iterator[EpsilonWord]:
    for length in range(min_length, max_length + 1):
        for letters in itertools.product(Letter, repeat=length):
            yield EpsilonWord(letters)


@dataclass(frozen=True)
class FockCoefficients:
    """
    omega[i] is the Jacobi weight omega_{i+1}, alpha_diag[i] is alpha_{i+1} and
    gamma_w[i] is gamma_i; `length` basis vectors Psi_0 .. Psi_{length-1} are kept.
    """

    omega: typing.Tuple[float, ...]
    alpha_diag: typing.Tuple[float, ...]
    gamma_w: typing.Tuple[float, ...]
    length: int
    truncated: bool = False

    def __post_init__(self):
        if len(self.alpha_diag) != self.length or len(self.gamma_w) != self.length:
            raise ValueError("`alpha_diag` and `gamma_w` have to carry `length` entries")
        if len(self.omega) != self.length - 1:
            raise ValueError("`omega` has to carry `length - 1` entries")
        if any(value <= 0 for value in self.omega):
            raise ValueError("Jacobi weights have to be positive")


def finite_coefficients(cp: ClassicalParams, st: SpectralTable, t: RationalLike) -> FockCoefficients:
    t = to_fraction(t)
    variance = gibbs_variance(cp, t)
    if variance <= 0:
        raise DegenerateVariance(f"variance {variance} at t = {t} is not positive")
    ia = intersection_array(cp)
    d = cp.d
    mean = t * ia.k

    omega = tuple(float(ia.c_seq[i] * ia.b_seq[i - 1] / variance) for i in range(1, d + 1))
    alpha_diag = []
    for i in range(1, d + 2):
        center = ia.a_seq[i - 1] - mean
        alpha_diag.append(signed_sqrt(center * center / variance, 1 if center >= 0 else -1))
    gamma_w = []
    for i in range(d + 1):
        weight = t ** i
        gamma_w.append(signed_sqrt(weight * weight * st.k_seq[i], 1 if weight >= 0 else -1))
    return FockCoefficients(
        omega=omega,
        alpha_diag=tuple(alpha_diag),
        gamma_w=tuple(gamma_w),
        length=d + 1,
        truncated=False,
    )


def limit_coefficients(regime: LimitRegime, n: int) -> FockCoefficients:
    """Coefficients of the limit Fock space on its first `n` levels"""
    if n < 1:
        raise ValueError("`n` has to be a positive integer")
    normalizer = regime.normalizer
    if normalizer <= 0:
        raise RegimeError(f"1 + gamma sigma = {normalizer} is not positive")
    sigma, gamma = regime.sigma, regime.gamma
    root = normalizer ** 0.5

    c_seq = [
        float(gauss_bracket(i, regime.b) * (1 + regime.alpha * gauss_bracket(i - 1, regime.b))) for i in range(1, n)
    ]
    if any(c <= 0 for c in c_seq):
        raise RegimeError(f"limit c_i has to stay positive, got {c_seq}")

    omega = tuple(c / normalizer for c in c_seq)
    alpha_diag = tuple((float(gauss_bracket(i - 1, regime.b)) * sigma - gamma) / root for i in range(1, n + 1))
    gamma_w = [1.0]
    product = 1.0
    for i in range(1, n):
        product *= c_seq[i - 1]
        gamma_w.append(gamma ** i / product ** 0.5)
    return FockCoefficients(omega=omega, alpha_diag=alpha_diag, gamma_w=tuple(gamma_w), length=n, truncated=True)


def _apply(fc: FockCoefficients, letter: Letter, vector: np.ndarray, roots: np.ndarray) -> np.ndarray:
    result = np.zeros_like(vector)
    if letter is Letter.PLUS:
        result[1:] = roots * vector[:-1]
    elif letter is Letter.MINUS:
        result[:-1] = roots * vector[1:]
    else:
        result = np.asarray(fc.alpha_diag) * vector
    return result


def mixed_moment(fc: FockCoefficients, w: EpsilonWord) -> float:
    """sum_i gamma_i <Psi_i, B^{e_m} ... B^{e_1} Psi_0>"""
    if fc.truncated and len(w) >= fc.length:
        raise InsufficientTruncation(f"word of length {len(w)} needs more than {fc.length} levels")
    vector = np.zeros(fc.length)
    vector[0] = 1.0
    roots = np.sqrt(np.asarray(fc.omega, dtype=float))
    for letter in w.letters:
        vector = _apply(fc, letter, vector, roots)
    return float(np.dot(np.asarray(fc.gamma_w), vector))


def mixed_moment_finite(cp: ClassicalParams, st: SpectralTable, t: RationalLike, w: EpsilonWord) -> float:
    return mixed_moment(finite_coefficients(cp, st, t), w)


def mixed_moment_limit(fc: FockCoefficients, w: EpsilonWord) -> float:
    return mixed_moment(fc, w)


def limit_moment(fc: FockCoefficients, m: int) -> float:
    """m-th moment of B+ + B- + Bo in the Gibbs vector, exact on a truncation with more than m levels"""
    if m < 0:
        raise ValueError("`m` has to be a nonnegative integer")
    if fc.truncated and m >= fc.length:
        raise InsufficientTruncation(f"moment {m} needs more than {fc.length} levels")
    roots = np.sqrt(np.asarray(fc.omega, dtype=float))
    jacobi = np.diag(np.asarray(fc.alpha_diag, dtype=float)) + np.diag(roots, 1) + np.diag(roots, -1)
    vector = np.zeros(fc.length)
    vector[0] = 1.0
    for _ in range(m):
        vector = jacobi @ vector
    return float(np.dot(np.asarray(fc.gamma_w), vector))


def finite_moment(cp: ClassicalParams, st: SpectralTable, t: RationalLike, m: int) -> float:
    """Same Jacobi computation on the primary module, equal to the m-th Gibbs moment"""
    return limit_moment(finite_coefficients(cp, st, t), m)
