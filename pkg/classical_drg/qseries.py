"""
Exact and floating q-series kernel.

Finite products and terminating series stay exact on `Fraction` input and fall back
to floats as soon as one argument is a float. Infinite products are always floating
and carry the truncation bound they were stopped at.
"""
import logging
import math
import typing
from fractions import Fraction

from classical_drg.exceptions import ConsistencyError, DivergentProduct, NonTerminatingSeries, ZeroDenominator
from classical_drg.types import ApproxScalar, Scalar

__all__ = (
    "binomial2",
    "gauss_bracket",
    "bracket",
    "exact_power",
    "poch",
    "poch_inf",
    "gen_poch",
    "termination_order",
    "phi_terminating",
)

logger = logging.getLogger(__name__)

MAX_TERMINATION_ORDER = 4096
MAX_PRODUCT_FACTORS = 100_000
# the tail bound is only evaluated once |a q^L| has dropped this far below 1
TAIL_BOUND_TERM = 0.5


def _is_exact(*values) -> bool:
    return not any(isinstance(value, float) for value in values)


def _coerce(value, exact: bool) -> Scalar:
    return Fraction(value) if exact else float(value)


def binomial2(n: int) -> int:
    return n * (n - 1) // 2


def gauss_bracket(i: int, b: int) -> Fraction:
    """[i] = 1 + b + ... + b^(i-1)"""
    if i < 0:
        raise ValueError("`i` has to be a nonnegative integer")
    if b == 0:
        raise ValueError("`b` has to be nonzero")
    return Fraction(sum(b ** h for h in range(i)))


def bracket(n: int, b: int) -> Fraction:
    """(b^n - 1) / (b - 1) for any integer n, which is n itself at b = 1"""
    if n >= 0:
        return gauss_bracket(n, b)
    if b == 1:
        return Fraction(n)
    return (Fraction(b) ** n - 1) / (b - 1)


def _integer_root(value: int, n: int) -> typing.Optional[int]:
    if value < 0:
        return None
    if value in (0, 1):
        return value
    guess = int(round(math.exp(math.log(value) / n)))
    for candidate in (guess - 1, guess, guess + 1):
        if candidate >= 0 and candidate ** n == value:
            return candidate
    return None


def exact_power(base, exponent) -> Scalar:
    """base ** exponent, exact whenever the result is rational"""
    exponent = Fraction(exponent)
    if isinstance(base, float):
        return base ** float(exponent)
    base = Fraction(base)
    if exponent.denominator == 1:
        return base ** exponent.numerator
    if base < 0:
        raise ValueError(f"fractional power {exponent} of a negative base {base}")
    numerator_root = _integer_root(base.numerator, exponent.denominator)
    denominator_root = _integer_root(base.denominator, exponent.denominator)
    if numerator_root is not None and denominator_root is not None:
        return Fraction(numerator_root, denominator_root) ** exponent.numerator
    return float(base) ** float(exponent)


def poch(a: Scalar, q: Scalar, h: int) -> Scalar:
    """(a; q)_h"""
    if h < 0:
        raise ValueError("`h` has to be a nonnegative integer")
    exact = _is_exact(a, q)
    a, q = _coerce(a, exact), _coerce(q, exact)
    result = _coerce(1, exact)
    power = _coerce(1, exact)
    for _ in range(h):
        result *= 1 - a * power
        power *= q
    return result


def gen_poch(x: Scalar, y: Scalar, q: Scalar, h: int) -> Scalar:
    """(x; y; q)_h = (x - y)(x - y q) ... (x - y q^(h-1))"""
    if h < 0:
        raise ValueError("`h` has to be a nonnegative integer")
    exact = _is_exact(x, y, q)
    x, y, q = _coerce(x, exact), _coerce(y, exact), _coerce(q, exact)
    result = _coerce(1, exact)
    power = _coerce(1, exact)
    for _ in range(h):
        result *= x - y * power
        power *= q
    return result


def poch_inf(a: Scalar, q: Scalar, eps: float = 1e-14) -> ApproxScalar:
    """
    (a; q)_inf truncated once the remaining factors provably change the partial product
    by at most `eps`. With partial product P_L and x_l = a q^l the tail satisfies
    |prod_{l >= L} (1 - x_l) - 1| <= exp(S / (1 - |x_L|)) - 1, S = |x_L| / (1 - |q|).
    """
    if eps <= 0:
        raise ValueError("`eps` has to be positive")
    if abs(q) >= 1:
        raise DivergentProduct(f"(a; q)_inf needs |q| < 1, got q = {q}")
    if a == 0:
        return ApproxScalar(1.0, 0.0)

    exact = _is_exact(a, q)
    term = _coerce(a, exact)
    q = _coerce(q, exact)
    abs_q = abs(float(q))
    value = 1.0
    for _ in range(MAX_PRODUCT_FACTORS):
        factor = 1 - term
        if factor == 0:
            return ApproxScalar(0.0, 0.0)
        value *= float(factor)
        if math.isinf(value):
            raise OverflowError(f"partial product of (a; q)_inf with a = {a}, q = {q} is infinite")
        term *= q
        abs_term = abs(float(term))
        if abs_term > TAIL_BOUND_TERM:
            continue
        try:
            bound = abs(value) * math.expm1(abs_term / (1 - abs_q) / (1 - abs_term))
        except OverflowError:
            continue
        if bound <= eps or value == 0.0:
            return ApproxScalar(value, bound)
    raise ConsistencyError(f"(a; q)_inf did not reach eps = {eps} after {MAX_PRODUCT_FACTORS} factors")


def termination_order(uppers: typing.Sequence[Scalar], q: Scalar) -> int:
    """Smallest n such that some upper parameter equals q^-n"""
    exact_uppers = [Fraction(u) for u in uppers if _is_exact(u)]
    if not exact_uppers or not _is_exact(q):
        raise NonTerminatingSeries("termination needs an exact upper parameter and an exact base")
    q = Fraction(q)
    power = Fraction(1)  # q^-n
    for n in range(MAX_TERMINATION_ORDER + 1):
        if power in exact_uppers:
            return n
        power /= q
    raise NonTerminatingSeries(f"no upper parameter equals q^-n for n <= {MAX_TERMINATION_ORDER}")


def phi_terminating(
    uppers: typing.Sequence[Scalar],
    lowers: typing.Sequence[Scalar],
    q: Scalar,
    z: Scalar,
) -> Scalar:
    """
    Terminating basic hypergeometric series r_phi_s with the term
    (uppers; q)_h / ((lowers; q)_h (q; q)_h) * ((-1)^h q^(h(h-1)/2))^(s + 1 - r) * z^h.
    The result is exact when every argument is.
    """
    n = termination_order(uppers, q)
    exact = _is_exact(z, q, *uppers, *lowers)
    q = _coerce(q, exact)
    z = _coerce(z, exact)
    uppers = [_coerce(u, exact) for u in uppers]
    lowers = [_coerce(v, exact) for v in lowers]
    excess = len(uppers) - len(lowers) - 1
    sign = -1 if excess % 2 else 1

    total = _coerce(0, exact)
    term = _coerce(1, exact)
    power = _coerce(1, exact)  # q^h
    for h in range(n + 1):
        total += term
        if h == n:
            break
        numerator = _coerce(1, exact)
        for u in uppers:
            numerator *= 1 - u * power
        denominator = 1 - power * q
        for v in lowers:
            denominator *= 1 - v * power
        if denominator == 0:
            raise ZeroDenominator(f"lower Pochhammer vanishes at term {h + 1} of {n}")
        term = term * numerator / denominator * z
        if excess:
            term *= sign * power ** (-excess)
        power *= q
    logger.debug("terminating series of order %d summed (%d upper, %d lower)", n, len(uppers), len(lowers))
    return total
