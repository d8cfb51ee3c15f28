"""
Finite-diameter distributions and mixed moments compared with their limits along a family.
"""
import functools
import logging
import typing
from dataclasses import dataclass
from fractions import Fraction

from classical_drg.families import FamilyDescriptor, TRule, member, tail_samples
from classical_drg.fock import (
    EpsilonWord,
    FockCoefficients,
    all_words,
    finite_coefficients,
    limit_coefficients,
    mixed_moment,
    mixed_moment_limit,
)
from classical_drg.gibbs import DiscreteMeasure, gibbs_distribution
from classical_drg.limits import LimitRegime, classify, limit_measure
from classical_drg.params import c_index, spectral_table
from classical_drg.settings import Config, get_global_config

__all__ = (
    "ConvergenceRow",
    "QcltRow",
    "limit_regime_for",
    "weak_convergence",
    "qclt_convergence",
    "LIMIT_TRUNCATION",
    "COMPARED_ATOMS",
)

logger = logging.getLogger(__name__)

LIMIT_TRUNCATION = 12
COMPARED_ATOMS = 4


@dataclass(frozen=True)
class ConvergenceRow:
    d: int
    t: Fraction
    max_discrepancy: float
    atom_errors: typing.Dict[int, float]
    mass_errors: typing.Dict[int, float]
    positivity: bool


@dataclass(frozen=True)
class QcltRow:
    word: str
    d: int
    finite: float
    limit: float
    difference: float


@functools.lru_cache(maxsize=64)
def limit_regime_for(
    fd: FamilyDescriptor,
    t_rule: TRule,
    parity: typing.Optional[str] = None,
    depth: typing.Optional[int] = None,
) -> LimitRegime:
    report = classify(tail_samples(fd, t_rule, parity, depth))
    regime = report.regime_for(parity)
    logger.info("%s under %s (%s): %s", fd.label, t_rule, parity or "all", regime)
    return regime


@functools.lru_cache(maxsize=64)
def _limit_measure(regime: LimitRegime, j_min: int, j_max: int, eps: float) -> DiscreteMeasure:
    return limit_measure(regime, j_min, j_max, eps)


@functools.lru_cache(maxsize=64)
def _limit_coefficients(regime: LimitRegime, n: int) -> FockCoefficients:
    return limit_coefficients(regime, n)


def _atom_indices(regime: LimitRegime, cp, count: int) -> typing.List[typing.Tuple[int, int]]:
    """(limit label j, eigenvalue index) pairs compared at this diameter"""
    if regime.rho == 0:
        c = c_index(cp)
        return [(j, c - j) for j in range(count) if 0 <= c - j <= cp.d]
    return [(j, cp.d - j) for j in range(count) if cp.d - j >= 0]


def weak_convergence(
    fd: FamilyDescriptor,
    d_list: typing.Iterable[int],
    t_rule: TRule,
    parity: typing.Optional[str] = None,
    conf: typing.Optional[Config] = None,
) -> typing.List[ConvergenceRow]:
    conf = conf or get_global_config()
    rows = []
    for d in d_list:
        fm = member(fd, d)
        cp = fm.cp
        t = t_rule(cp)
        regime = limit_regime_for(fd, t_rule, parity or fm.subnet_tag, conf.far_diameter)
        mu_inf = _limit_measure(regime, conf.jmin, conf.jmax, conf.prec)
        mu = gibbs_distribution(cp, spectral_table(cp), t)

        atom_errors = {}
        mass_errors = {}
        for label, index in _atom_indices(regime, cp, COMPARED_ATOMS):
            point = mu_inf.point(label)
            if point is None:
                continue
            atom, mass = point
            atom_errors[label] = abs(mu.atoms[index] - atom)
            mass_errors[label] = abs(mu.masses[index] - mass)
        discrepancy = max(list(atom_errors.values()) + list(mass_errors.values()), default=0.0)
        logger.debug("%s, d = %d, t = %s: max discrepancy %.3e", fd.label, d, t, discrepancy)
        rows.append(
            ConvergenceRow(
                d=d,
                t=t,
                max_discrepancy=discrepancy,
                atom_errors=atom_errors,
                mass_errors=mass_errors,
                positivity=mu.positivity,
            )
        )
    return rows


def qclt_convergence(
    fd: FamilyDescriptor,
    d_list: typing.Iterable[int],
    t_rule: TRule,
    words: typing.Optional[typing.Sequence[EpsilonWord]] = None,
    parity: typing.Optional[str] = None,
    conf: typing.Optional[Config] = None,
    truncation: int = LIMIT_TRUNCATION,
) -> typing.List[QcltRow]:
    conf = conf or get_global_config()
    words = list(words) if words is not None else list(all_words(4))
    rows = []
    for d in d_list:
        fm = member(fd, d)
        cp = fm.cp
        t = t_rule(cp)
        finite_fc = finite_coefficients(cp, spectral_table(cp), t)
        regime = limit_regime_for(fd, t_rule, parity or fm.subnet_tag, conf.far_diameter)
        fc = _limit_coefficients(regime, truncation)
        for word in words:
            finite = mixed_moment(finite_fc, word)
            limit = mixed_moment_limit(fc, word)
            rows.append(QcltRow(word=str(word), d=d, finite=finite, limit=limit, difference=abs(finite - limit)))
    return rows
