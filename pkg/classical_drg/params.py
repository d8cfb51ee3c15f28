import logging
import typing
from dataclasses import dataclass
from fractions import Fraction

from classical_drg.exceptions import ConsistencyError, InfeasibleParameters, ZeroDenominator
from classical_drg.qseries import binomial2, bracket, gauss_bracket, gen_poch, poch
from classical_drg.types import ExactMatrix, ExactSequence, RationalLike
from classical_drg.utils import signed_sqrt, to_fraction

__all__ = (
    "ClassicalParams",
    "IntersectionArray",
    "SpectralTable",
    "intersection_array",
    "valencies_closed_form",
    "spectral_table",
    "multiplicity_closed_form",
    "multiplicity_product_form",
    "multiplicity_from_orthogonality",
    "vertex_count_closed_form",
    "distance_values_closed_form",
    "u_value",
    "sigma_ratio",
    "c_index",
    "feasibility_check",
    "feasibility_notes",
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClassicalParams:
    d: int
    b: int
    alpha: Fraction
    beta: Fraction

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d < 1:
            raise InfeasibleParameters(f"diameter has to be a positive integer, got d = {self.d}")
        if not isinstance(self.b, int) or self.b in (0, -1):
            raise InfeasibleParameters(f"rejected base b = {self.b}, b has to be an integer outside {{0, -1}}")
        object.__setattr__(self, "alpha", to_fraction(self.alpha))
        object.__setattr__(self, "beta", to_fraction(self.beta))

    @classmethod
    def build(cls, d: int, b: int, alpha: RationalLike, beta: RationalLike) -> "ClassicalParams":
        return cls(d=d, b=b, alpha=to_fraction(alpha), beta=to_fraction(beta))

    def bracket(self, i: int) -> Fraction:
        return gauss_bracket(i, self.b)

    @property
    def big_d(self) -> Fraction:
        """alpha - beta + beta * b, the recurring numerator parameter"""
        return self.alpha - self.beta + self.beta * self.b

    @property
    def big_e(self) -> Fraction:
        """alpha + 1 - b, the recurring denominator parameter"""
        return self.alpha + 1 - self.b

    def as_tuple(self) -> typing.Tuple[int, int, Fraction, Fraction]:
        return self.d, self.b, self.alpha, self.beta


@dataclass(frozen=True)
class IntersectionArray:
    b_seq: ExactSequence
    c_seq: ExactSequence
    a_seq: ExactSequence
    k_seq: ExactSequence
    k: Fraction

    @property
    def diameter(self) -> int:
        return len(self.b_seq) - 1

    @property
    def vertex_count(self) -> Fraction:
        return sum(self.k_seq, Fraction(0))


@dataclass(frozen=True)
class SpectralTable:
    theta: ExactSequence
    mult: ExactSequence
    vertex_count: Fraction
    v_matrix: ExactMatrix
    k_seq: ExactSequence = ()
    # indices whose multiplicity came from the orthogonality relation instead of the closed form
    mult_fallback: typing.Tuple[int, ...] = ()
    v_closed_form_checked: bool = True
    vertex_count_closed_form_checked: bool = True

    @property
    def diameter(self) -> int:
        return len(self.theta) - 1

    def u(self, i: int, j: int) -> Fraction:
        return self.v_matrix[i][j] / self.k_seq[i]


def intersection_array(cp: ClassicalParams) -> IntersectionArray:
    d, b, alpha, beta = cp.as_tuple()
    top = cp.bracket(d)
    b_seq = tuple((top - cp.bracket(i)) * (beta - alpha * cp.bracket(i)) for i in range(d + 1))
    c_seq = (Fraction(0),) + tuple(cp.bracket(i) * (1 + alpha * cp.bracket(i - 1)) for i in range(1, d + 1))
    k = b_seq[0]
    a_seq = tuple(k - b_seq[i] - c_seq[i] for i in range(d + 1))

    for i in range(1, d + 1):
        a_closed = cp.bracket(i) * (beta - 1 + alpha * (top - cp.bracket(i) - cp.bracket(i - 1)))
        if a_closed != a_seq[i]:
            raise ConsistencyError(f"a_{i} = {a_seq[i]} disagrees with its closed form {a_closed}")

    k_seq = [Fraction(1)]
    for i in range(1, d + 1):
        if c_seq[i] == 0:
            raise ZeroDenominator(f"c_{i} = 0, valency k_{i} is undefined")
        k_seq.append(k_seq[-1] * b_seq[i - 1] / c_seq[i])

    closed = valencies_closed_form(cp)
    for i, (direct, other) in enumerate(zip(k_seq, closed)):
        if other is not None and other != direct:
            raise ConsistencyError(f"k_{i} = {direct} disagrees with its closed form {other}")

    return IntersectionArray(b_seq=b_seq, c_seq=c_seq, a_seq=a_seq, k_seq=tuple(k_seq), k=k)


def valencies_closed_form(cp: ClassicalParams) -> typing.Tuple[typing.Optional[Fraction], ...]:
    """k_i from the q-Pochhammer form, None where its denominator vanishes"""
    d, b, alpha, _ = cp.as_tuple()
    b_exact = Fraction(b)
    values = []
    for i in range(d + 1):
        denominator = gen_poch(cp.big_e, alpha, b_exact, i) * poch(b_exact, b_exact, i)
        if denominator == 0:
            values.append(None)
            continue
        numerator = poch(b_exact ** -d, b_exact, i) * gen_poch(cp.big_d, alpha, b_exact, i) * b_exact ** (d * i)
        values.append(numerator / denominator)
    return tuple(values)


def _eigenvalues(cp: ClassicalParams, ia: IntersectionArray) -> ExactSequence:
    b = Fraction(cp.b)
    return tuple(ia.b_seq[i] / b ** i - cp.bracket(i) for i in range(cp.d + 1))


def _recurrence_values(ia: IntersectionArray, theta: Fraction) -> typing.List[Fraction]:
    d = ia.diameter
    values = [Fraction(1)]
    if d >= 1:
        values.append(theta)
    for i in range(1, d):
        values.append(((theta - ia.a_seq[i]) * values[i] - ia.b_seq[i - 1] * values[i - 1]) / ia.c_seq[i + 1])
    return values


def distance_values_closed_form(cp: ClassicalParams, i: int, j: int) -> typing.Optional[Fraction]:
    """v_i(theta_j) from the double Pochhammer sum, None where a denominator vanishes"""
    d, b, alpha, _ = cp.as_tuple()
    b_exact = Fraction(b)
    total = Fraction(0)
    for h in range(i + 1):
        rest = i - h
        denominator = poch(b_exact, b_exact, h) * poch(b_exact, b_exact, rest)
        denominator *= gen_poch(cp.big_e, alpha, b_exact, rest)
        if denominator == 0:
            return None
        numerator = (
            poch(b_exact ** -j, b_exact, h)
            * poch(b_exact ** (j - d), b_exact, rest)
            * gen_poch(cp.big_d, alpha * b_exact ** j, b_exact, rest)
            * b_exact ** (rest * (d - j) + j * h)
        )
        total += numerator / denominator
    return total


def multiplicity_closed_form(cp: ClassicalParams, i: int) -> typing.Tuple[Fraction, Fraction]:
    """Numerator and denominator of the Pochhammer form of m_i, kept apart so 0/0 stays visible"""
    d, b, alpha, _ = cp.as_tuple()
    b_exact = Fraction(b)
    big_d, big_e = cp.big_d, cp.big_e
    numerator = (
        poch(b_exact ** -d, b_exact, i)
        * gen_poch(big_d, alpha, b_exact, i)
        * gen_poch(big_d, big_e * b_exact ** -d, b_exact, i)
        * (big_d - big_e * b_exact ** (2 * i - d))
        * b_exact ** (2 * d * i - i * i)
    )
    denominator = (
        poch(b_exact, b_exact, i)
        * gen_poch(big_d, big_e * b_exact, b_exact, i)
        * gen_poch(big_e, alpha * b_exact ** (d - i), b_exact, i)
        * (big_d - big_e * b_exact ** -d)
    )
    return numerator, denominator


def multiplicity_product_form(cp: ClassicalParams, i: int) -> typing.Optional[Fraction]:
    d, b, alpha, beta = cp.as_tuple()
    b_exact = Fraction(b)
    numerator = Fraction(1)
    for h in range(i):
        top = bracket(d - h, b)
        numerator *= top * (beta - bracket(h, b) * alpha) * (1 + top * alpha + b_exact ** (d - h) * beta)
    denominator = Fraction(1)
    for h in range(1, i + 1):
        denominator *= bracket(h, b) * (beta - bracket(h, b) * alpha + b_exact ** h) * (1 + bracket(d - h, b) * alpha)
    numerator *= (1 + bracket(d - 2 * i, b) * alpha + b_exact ** (d - 2 * i) * beta) * b_exact ** i
    denominator *= 1 + bracket(d, b) * alpha + b_exact ** d * beta
    if denominator == 0:
        return None
    return numerator / denominator


def vertex_count_closed_form(cp: ClassicalParams) -> typing.Optional[Fraction]:
    d, b, alpha, _ = cp.as_tuple()
    b_exact = Fraction(b)
    denominator = gen_poch(cp.big_e, alpha, b_exact, d)
    if denominator == 0:
        return None
    numerator = (-1) ** d * gen_poch(cp.big_d, cp.big_e * b_exact ** (1 - d), b_exact, d) * b_exact ** binomial2(d)
    return numerator / denominator


def multiplicity_from_orthogonality(
    k_seq: typing.Sequence[Fraction],
    v_column: typing.Sequence[Fraction],
    vertex_count: Fraction,
) -> Fraction:
    """m_j = |X| / sum_i v_i(theta_j)^2 / k_i"""
    if any(k_i == 0 for k_i in k_seq):
        raise ZeroDenominator("a vanishing valency leaves the orthogonality relation undefined")
    norm = sum((value * value / k_i for value, k_i in zip(v_column, k_seq)), Fraction(0))
    if norm == 0:
        raise ZeroDenominator("orthogonality norm vanishes")
    return vertex_count / norm


def spectral_table(cp: ClassicalParams, ia: typing.Optional[IntersectionArray] = None) -> SpectralTable:
    ia = ia or intersection_array(cp)
    d = cp.d
    theta = _eigenvalues(cp, ia)

    columns = [_recurrence_values(ia, theta_j) for theta_j in theta]
    v_matrix = tuple(tuple(columns[j][i] for j in range(d + 1)) for i in range(d + 1))
    closed_checked = True
    for i in range(d + 1):
        for j in range(d + 1):
            closed = distance_values_closed_form(cp, i, j)
            if closed is None:
                closed_checked = False
                continue
            if closed != v_matrix[i][j]:
                raise ConsistencyError(
                    f"v_{i}(theta_{j}) closed form {closed} disagrees with the three-term recurrence {v_matrix[i][j]}"
                )
    if not closed_checked:
        logger.debug("closed form of v_i(theta_j) undefined somewhere for %s, recurrence used alone", cp)

    vertex_count = ia.vertex_count
    closed_count = vertex_count_closed_form(cp)
    if closed_count is not None and closed_count != vertex_count:
        raise ConsistencyError(f"|X| closed form {closed_count} disagrees with sum of valencies {vertex_count}")

    mult = []
    fallback = []
    for j in range(d + 1):
        numerator, denominator = multiplicity_closed_form(cp, j)
        if denominator != 0:
            mult.append(numerator / denominator)
            continue
        if numerator != 0:
            raise ZeroDenominator(f"closed form of m_{j} has a pole at {cp}")
        fallback.append(j)
        mult.append(multiplicity_from_orthogonality(ia.k_seq, columns[j], vertex_count))
    if fallback:
        logger.debug("multiplicities %s of %s taken from the orthogonality relation", fallback, cp)

    return SpectralTable(
        theta=theta,
        mult=tuple(mult),
        vertex_count=vertex_count,
        v_matrix=v_matrix,
        k_seq=ia.k_seq,
        mult_fallback=tuple(fallback),
        v_closed_form_checked=closed_checked,
        vertex_count_closed_form_checked=closed_count is not None,
    )


def u_value(st: SpectralTable, i: int, j: int) -> Fraction:
    return st.u(i, j)


def sigma_ratio(cp: ClassicalParams) -> float:
    """(beta + alpha [d]) / sqrt(k)"""
    k = cp.bracket(cp.d) * cp.beta
    if k <= 0:
        raise InfeasibleParameters(f"valency has to be positive, got k = {k}")
    value = cp.beta + cp.alpha * cp.bracket(cp.d)
    return signed_sqrt(value * value / k, 1 if value >= 0 else -1)


def c_index(cp: ClassicalParams) -> int:
    """Largest c with b^(2c) <= k"""
    if cp.b < 2:
        raise InfeasibleParameters(f"c index needs b >= 2, got b = {cp.b}")
    k = cp.bracket(cp.d) * cp.beta
    if k < 1:
        raise InfeasibleParameters(f"c index needs k >= 1, got k = {k}")
    square = Fraction(cp.b) ** 2
    c = 0
    while square ** (c + 1) <= k:
        c += 1
    return c


def _is_nonnegative_integer(value: Fraction) -> bool:
    return value.denominator == 1 and value >= 0


def feasibility_check(cp: typing.Union[ClassicalParams, typing.Sequence]) -> typing.List[str]:
    """
    List of violated conditions, empty when every intersection and spectral invariant holds
    and all the data are nonnegative integers. Remarks that do not make the parameters
    infeasible come from `feasibility_notes`.
    """
    if not isinstance(cp, ClassicalParams):
        try:
            cp = ClassicalParams.build(*cp)
        except InfeasibleParameters as e:
            return [e.message]

    report: typing.List[str] = []
    try:
        ia = intersection_array(cp)
    except InfeasibleParameters as e:
        return [e.message]
    except ConsistencyError as e:
        return [f"inconsistent intersection data: {e.message}"]

    d = cp.d
    if ia.b_seq[d] != 0 or ia.c_seq[0] != 0:
        report.append("b_d and c_0 have to vanish")
    if ia.c_seq[1] != 1:
        report.append(f"c_1 has to be 1, got {ia.c_seq[1]}")
    for i in range(1, d + 1):
        if ia.b_seq[i - 1] * ia.c_seq[i] == 0:
            report.append(f"b_{i - 1} c_{i} vanishes")
    for name, sequence in (("b", ia.b_seq), ("c", ia.c_seq), ("a", ia.a_seq), ("k", ia.k_seq)):
        for i, value in enumerate(sequence):
            if not _is_nonnegative_integer(value):
                report.append(f"{name}_{i} = {value} is not a nonnegative integer")
    if d >= 2:
        alpha_from_c2 = ia.c_seq[2] / (cp.b + 1) - 1
        if alpha_from_c2 != cp.alpha:
            report.append(f"alpha = {cp.alpha} differs from c_2 / (b + 1) - 1 = {alpha_from_c2}")

    try:
        st = spectral_table(cp, ia)
    except InfeasibleParameters as e:
        report.append(e.message)
        return report
    except ConsistencyError as e:
        report.append(f"inconsistent spectral data: {e.message}")
        return report

    if st.theta[0] != ia.k:
        report.append("theta_0 has to equal k")
    if sum(st.mult, Fraction(0)) != st.vertex_count:
        report.append("multiplicities do not sum to |X|")
    for j, m in enumerate(st.mult):
        if not _is_nonnegative_integer(m):
            report.append(f"m_{j} = {m} is not a nonnegative integer")
    if not _is_nonnegative_integer(st.vertex_count):
        report.append(f"|X| = {st.vertex_count} is not a nonnegative integer")
    for j in range(d + 1):
        column = sum((st.v_matrix[i][j] for i in range(d + 1)), Fraction(0))
        expected = st.vertex_count if j == 0 else 0
        if column != expected:
            report.append(f"sum_i v_i(theta_{j}) = {column}, expected {expected}")
    for i in range(d + 1):
        trace = sum((st.mult[j] * st.v_matrix[i][j] for j in range(d + 1)), Fraction(0))
        expected = st.vertex_count if i == 0 else 0
        if trace != expected:
            report.append(f"sum_j m_j v_{i}(theta_j) = {trace}, expected {expected}")
    if len(set(st.theta)) != len(st.theta):
        report.append("eigenvalues are not distinct")
    return report


def feasibility_notes(cp: ClassicalParams, st: typing.Optional[SpectralTable] = None) -> typing.List[str]:
    """Remarks that leave the parameters feasible: small diameter, multiplicities off the closed form"""
    st = st or spectral_table(cp)
    notes = []
    if st.mult_fallback:
        fallback = list(st.mult_fallback)
        notes.append(f"closed form of m_j is 0/0 at j in {fallback}, values from the orthogonality relation")
    if cp.d < 3:
        notes.append(f"d = {cp.d} is outside the classical uniqueness range d >= 3")
    return notes
