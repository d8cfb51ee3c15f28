"""
Gibbs (deformed vacuum) state of a distance-regular graph with classical parameters.

For a real t the state phi_t(B) = tr(K_t B) / |X| with K_t = sum_i t^i A_i is a state
iff K_t is positive semidefinite. Everything below is exact except atom positions,
which carry the square root of the variance.
"""
import logging
import math
import typing
from dataclasses import dataclass
from fractions import Fraction

from classical_drg.exceptions import ConsistencyError, DegenerateVariance
from classical_drg.params import ClassicalParams, SpectralTable, spectral_table
from classical_drg.qseries import binomial2, gen_poch, poch
from classical_drg.types import ExactSequence, RationalLike
from classical_drg.utils import signed_sqrt, to_fraction

__all__ = (
    "GibbsPoint",
    "DiscreteMeasure",
    "gibbs_variance",
    "gibbs_point",
    "kt_closed_form",
    "in_pi",
    "check_negative_powers",
    "multiplicity_ratio",
    "gibbs_distribution",
    "measure_moment",
    "exact_moment",
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GibbsPoint:
    t: Fraction
    mean: Fraction
    variance: Fraction
    kt_spectrum: ExactSequence


@dataclass(frozen=True)
class DiscreteMeasure:
    labels: typing.Tuple[int, ...]
    atoms: typing.Tuple[float, ...]
    masses: typing.Tuple[float, ...]
    truncated: bool = False
    tail_bound: float = 0.0
    positivity: bool = True
    # finite Gibbs measures keep masses, centers theta_j - tk and the variance exactly
    exact_masses: typing.Optional[ExactSequence] = None
    exact_centers: typing.Optional[ExactSequence] = None
    variance: typing.Optional[Fraction] = None

    def __post_init__(self):
        if not len(self.labels) == len(self.atoms) == len(self.masses):
            raise ConsistencyError("labels, atoms and masses have to share their length")
        if self.tail_bound < 0:
            raise ConsistencyError("`tail_bound` has to be nonnegative")

    def __len__(self) -> int:
        return len(self.atoms)

    @property
    def is_exact(self) -> bool:
        return self.exact_masses is not None and self.exact_centers is not None and self.variance is not None

    @property
    def total_mass(self) -> float:
        if self.exact_masses is not None:
            return float(sum(self.exact_masses, Fraction(0)))
        return math.fsum(self.masses)

    def point(self, label: int) -> typing.Optional[typing.Tuple[float, float]]:
        """(atom, mass) carrying `label`, None outside the stored window"""
        try:
            index = self.labels.index(label)
        except ValueError:
            return None
        return self.atoms[index], self.masses[index]


def gibbs_variance(cp: ClassicalParams, t: RationalLike) -> Fraction:
    """k (1 - t)(1 + t + t a_1), straight from the classical parameters"""
    t = to_fraction(t)
    k = cp.bracket(cp.d) * cp.beta
    a_1 = cp.beta - 1 + cp.alpha * (cp.bracket(cp.d) - 1)
    return k * (1 - t) * (1 + t + t * a_1)


def kt_closed_form(cp: ClassicalParams, t: Fraction, j: int) -> typing.Optional[Fraction]:
    """(t; b)_j times the terminating l-sum, None where a denominator vanishes"""
    d, b, alpha, _ = cp.as_tuple()
    b_exact = Fraction(b)
    total = Fraction(0)
    for ell in range(d - j + 1):
        denominator = gen_poch(cp.big_e, alpha, b_exact, ell) * poch(b_exact, b_exact, ell)
        if denominator == 0:
            return None
        numerator = (
            poch(b_exact ** (j - d), b_exact, ell)
            * gen_poch(cp.big_d, alpha * b_exact ** j, b_exact, ell)
            * b_exact ** (ell * (d - j))
            * t ** ell
        )
        total += numerator / denominator
    return poch(t, b_exact, j) * total


def gibbs_point(cp: ClassicalParams, st: SpectralTable, t: RationalLike) -> GibbsPoint:
    t = to_fraction(t)
    d = cp.d
    kt_spectrum = []
    for j in range(d + 1):
        direct = sum((t ** i * st.v_matrix[i][j] for i in range(d + 1)), Fraction(0))
        closed = kt_closed_form(cp, t, j)
        if closed is not None and closed != direct:
            raise ConsistencyError(f"K_t eigenvalue {j}: closed form {closed} disagrees with direct sum {direct}")
        kt_spectrum.append(direct)
    k = st.theta[0]
    return GibbsPoint(t=t, mean=t * k, variance=gibbs_variance(cp, t), kt_spectrum=tuple(kt_spectrum))


def in_pi(gp: GibbsPoint) -> bool:
    return min(gp.kt_spectrum) >= 0


def check_negative_powers(
    cp: ClassicalParams,
    i_max: int,
    st: typing.Optional[SpectralTable] = None,
) -> typing.List[str]:
    """Violations of K_t >= 0 at t = b^-i, i = 0..i_max"""
    st = st or spectral_table(cp)
    report = []
    for i in range(i_max + 1):
        t = Fraction(cp.b) ** -i
        gp = gibbs_point(cp, st, t)
        if not in_pi(gp):
            j = min(range(len(gp.kt_spectrum)), key=lambda index: gp.kt_spectrum[index])
            report.append(f"K_t not positive semidefinite at t = {t}: eigenvalue {j} is {gp.kt_spectrum[j]}")
    return report


def multiplicity_ratio(cp: ClassicalParams, j: int) -> typing.Optional[Fraction]:
    """m_j / |X| in one closed form, None where its denominator vanishes"""
    d, b, alpha, _ = cp.as_tuple()
    b_exact = Fraction(b)
    big_d, big_e = cp.big_d, cp.big_e
    denominator = poch(b_exact, b_exact, j) * gen_poch(big_d, big_e * b_exact ** (j - d), b_exact, d + 1)
    if denominator == 0:
        return None
    numerator = (
        poch(b_exact ** -d, b_exact, j)
        * gen_poch(big_d, alpha, b_exact, j)
        * gen_poch(big_e, alpha, b_exact, d - j)
        * (-1) ** d
        * (big_d - big_e * b_exact ** (2 * j - d))
        * b_exact ** (2 * d * j - j * j - binomial2(d))
    )
    return numerator / denominator


def gibbs_distribution(
    cp: ClassicalParams,
    st: SpectralTable,
    t: RationalLike,
    gp: typing.Optional[GibbsPoint] = None,
) -> DiscreteMeasure:
    gp = gp or gibbs_point(cp, st, t)
    if gp.variance <= 0:
        raise DegenerateVariance(f"variance {gp.variance} at t = {gp.t} is not positive")

    centers = []
    atoms = []
    masses = []
    for j, theta in enumerate(st.theta):
        weight = st.mult[j] / st.vertex_count
        ratio = multiplicity_ratio(cp, j)
        if ratio is not None and ratio != weight:
            raise ConsistencyError(f"m_{j}/|X| = {weight} disagrees with its closed form {ratio}")
        center = theta - gp.mean
        centers.append(center)
        atoms.append(signed_sqrt(center * center / gp.variance, 1 if center >= 0 else -1))
        masses.append(weight * gp.kt_spectrum[j])

    total = sum(masses, Fraction(0))
    if total != 1:
        raise ConsistencyError(f"Gibbs masses sum to {total}")
    return DiscreteMeasure(
        labels=tuple(range(cp.d + 1)),
        atoms=tuple(atoms),
        masses=tuple(float(mass) for mass in masses),
        truncated=False,
        tail_bound=0.0,
        positivity=in_pi(gp),
        exact_masses=tuple(masses),
        exact_centers=tuple(centers),
        variance=gp.variance,
    )


def exact_moment(mu: DiscreteMeasure, m: int) -> typing.Tuple[Fraction, Fraction]:
    """
    (numerator, variance) with measure_moment(mu, m) = numerator / variance^(m/2).
    Only finite Gibbs measures carry the exact data this needs.
    """
    if not mu.is_exact:
        raise ValueError("measure carries no exact data")
    numerator = sum((mass * center ** m for mass, center in zip(mu.exact_masses, mu.exact_centers)), Fraction(0))
    return numerator, mu.variance


def measure_moment(mu: DiscreteMeasure, m: int) -> float:
    if m < 0:
        raise ValueError("`m` has to be a nonnegative integer")
    if not mu.is_exact:
        return math.fsum(mass * atom ** m for atom, mass in zip(mu.atoms, mu.masses))

    numerator, variance = exact_moment(mu, m)
    scaled = numerator / variance ** (m // 2)
    if m % 2 == 0:
        return float(scaled)
    if scaled == 0:
        return 0.0
    return signed_sqrt(scaled * scaled / variance, 1 if scaled > 0 else -1)
