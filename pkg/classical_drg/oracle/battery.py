"""
Named small instances and the equivalence report between brute force and the formula layer.
"""
import logging
import math
import typing
from dataclasses import dataclass, field
from fractions import Fraction

from classical_drg.exceptions import OracleError
from classical_drg.families import FamilyDescriptor, FamilyName, member
from classical_drg.fock import all_words, finite_coefficients, mixed_moment
from classical_drg.gibbs import gibbs_distribution, measure_moment
from classical_drg.oracle.empirical import (
    QuantumComponents,
    empirical_gibbs,
    empirical_kt_min_eigenvalue,
    empirical_spectrum,
    random_base_vertices,
)
from classical_drg.oracle.graphs import GraphInstance, build_bilinear, build_grassmann, empirical_intersection
from classical_drg.params import ClassicalParams, intersection_array, spectral_table
from classical_drg.settings import Config, get_global_config

__all__ = (
    "OracleCase",
    "OracleReport",
    "BATTERY",
    "EIGENVALUE_TOL",
    "MOMENT_TOL",
    "PSD_TOL",
    "run_case",
    "run_battery",
)

logger = logging.getLogger(__name__)

EIGENVALUE_TOL = 1e-7
MOMENT_TOL = 1e-9
PSD_TOL = 1e-8
MOMENT_ORDER = 8
WORD_LENGTH = 4
BASE_VERTICES = 3


@dataclass(frozen=True)
class OracleCase:
    name: str
    family: FamilyName
    q: int
    d: int
    # n for Grassmann graphs, e for bilinear forms
    size: int

    @property
    def cp(self) -> ClassicalParams:
        if self.family is FamilyName.GRASSMANN:
            fd = FamilyDescriptor(FamilyName.GRASSMANN, self.q, n=self.size)
        else:
            fd = FamilyDescriptor(FamilyName.BILINEAR, self.q, e=self.size)
        return member(fd, self.d).cp

    def build(self, conf: typing.Optional[Config] = None) -> GraphInstance:
        if self.family is FamilyName.GRASSMANN:
            return build_grassmann(self.q, self.size, self.d, conf)
        return build_bilinear(self.q, self.d, self.size, conf)


BATTERY = {
    case.name: case
    for case in (
        OracleCase("grassmann-2-4-2", FamilyName.GRASSMANN, 2, 2, 4),
        OracleCase("grassmann-2-5-2", FamilyName.GRASSMANN, 2, 2, 5),
        OracleCase("grassmann-3-4-2", FamilyName.GRASSMANN, 3, 2, 4),
        OracleCase("grassmann-2-6-3", FamilyName.GRASSMANN, 2, 3, 6),
        OracleCase("bilinear-2-2-2", FamilyName.BILINEAR, 2, 2, 2),
        OracleCase("bilinear-2-2-3", FamilyName.BILINEAR, 2, 2, 3),
        OracleCase("bilinear-3-2-2", FamilyName.BILINEAR, 3, 2, 2),
    )
}


@dataclass
class OracleReport:
    name: str
    n_vertices: int
    diameter: int
    cp: ClassicalParams
    t: Fraction
    intersection_match: bool = False
    vertex_count_match: bool = False
    multiplicity_match: bool = False
    eigenvalue_error: float = math.inf
    moment_error: float = math.inf
    quantum_error: float = math.inf
    kt_min_eigenvalue: float = -math.inf
    base_vertices: typing.List[int] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            self.intersection_match
            and self.vertex_count_match
            and self.multiplicity_match
            and self.eigenvalue_error <= EIGENVALUE_TOL
            and self.moment_error <= MOMENT_TOL
            and self.quantum_error <= MOMENT_TOL
            and self.kt_min_eigenvalue >= -PSD_TOL
        )


def _relative(value: float, reference: float) -> float:
    return abs(value - reference) / max(1.0, abs(reference))


def run_case(
    case: OracleCase,
    conf: typing.Optional[Config] = None,
    g: typing.Optional[GraphInstance] = None,
) -> OracleReport:
    """Brute-force `case` and compare every quantity with its formula-layer counterpart"""
    conf = conf or get_global_config()
    g = g or case.build(conf)
    cp = case.cp
    ia = intersection_array(cp)
    st = spectral_table(cp, ia)
    t = Fraction(1, cp.b)
    report = OracleReport(name=case.name, n_vertices=g.n_vertices, diameter=g.diameter, cp=cp, t=t)

    empirical_ia = empirical_intersection(g)
    report.intersection_match = empirical_ia == ia
    report.vertex_count_match = g.n_vertices == st.vertex_count

    eigenvalues, multiplicities = empirical_spectrum(g, conf)
    expected = sorted(zip(st.theta, st.mult), key=lambda pair: pair[0], reverse=True)
    if len(expected) == len(eigenvalues):
        report.multiplicity_match = all(
            mult == expected_mult for mult, (_, expected_mult) in zip(multiplicities, expected)
        )
        report.eigenvalue_error = max(abs(value - float(theta)) for value, (theta, _) in zip(eigenvalues, expected))

    mu = gibbs_distribution(cp, st, t)
    moments = empirical_gibbs(g, t, MOMENT_ORDER)
    report.moment_error = max(_relative(value, measure_moment(mu, m)) for m, value in enumerate(moments))

    fc = finite_coefficients(cp, st, t)
    words = list(all_words(WORD_LENGTH))
    report.base_vertices = random_base_vertices(g, BASE_VERTICES, conf.seed)
    worst = 0.0
    for vertex in report.base_vertices:
        components = QuantumComponents(g, vertex, t)
        for word in words:
            worst = max(worst, _relative(components(word), mixed_moment(fc, word)))
    report.quantum_error = worst

    report.kt_min_eigenvalue = empirical_kt_min_eigenvalue(g, t, conf)
    logger.info("%s: %s", case.name, "passed" if report.passed else "FAILED")
    return report


def run_battery(
    names: typing.Optional[typing.Iterable[str]] = None,
    conf: typing.Optional[Config] = None,
) -> typing.List[OracleReport]:
    names = list(names) if names is not None else list(BATTERY)
    unknown = [name for name in names if name not in BATTERY]
    if unknown:
        raise OracleError(f"unknown battery instance(s) {', '.join(unknown)}; known: {', '.join(BATTERY)}")
    return [run_case(BATTERY[name], conf) for name in names]
