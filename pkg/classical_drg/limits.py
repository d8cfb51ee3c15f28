"""
Limit layer: the regime a family of classical parameters settles into as the diameter
grows, and the discrete measures the normalized Gibbs distributions converge to.

Three generic constructions cover every regime (beta / sqrt(k) tending to rho > 0,
to alpha / rho, or to zero with alpha = 0). Each named family also has a specialized
closed form; the two are kept independent so that they check each other.
"""
import contextlib
import enum
import logging
import math
import typing
from collections import OrderedDict
from dataclasses import dataclass, field
from fractions import Fraction

from classical_drg.exceptions import NumericalOverflow, RegimeError, ZeroDenominator
from classical_drg.gibbs import DiscreteMeasure
from classical_drg.params import ClassicalParams, c_index
from classical_drg.qseries import binomial2, bracket, exact_power, phi_terminating, poch, poch_inf
from classical_drg.settings import get_global_config
from classical_drg.types import ApproxScalar, RationalLike
from classical_drg.utils import aitken, signed_sqrt, to_fraction

__all__ = (
    "D_EVEN",
    "D_ODD",
    "N_EVEN",
    "N_ODD",
    "ALL",
    "RegimeKind",
    "LimitRegime",
    "Diagnostics",
    "RegimeReport",
    "PresetName",
    "Preset",
    "classify",
    "normalize_eta",
    "measure_case_rho_pos",
    "measure_case_alpha_over_rho",
    "measure_case_rho_zero",
    "limit_measure",
    "family_closed_form",
    "lebesgue_check",
    "dual_polar_c",
    "dual_polar_eta",
    "c_index",
)

logger = logging.getLogger(__name__)

D_EVEN = "d_even"
D_ODD = "d_odd"
N_EVEN = "n_even"
N_ODD = "n_odd"
ALL = "all"

# masses below this are dropped, their neighbours further out only get smaller
TINY = 1e-300
LOG_TINY = math.log(TINY)

RHO_ZERO_RATIO = 0.9
RHO_ZERO_ABS = 1e-6
PARITY_SPLIT_TOL = 1e-2
RHO_MATCH_TOL = 1e-9

# e -> shift of c = floor(d / 2) + shift for (d even, d odd)
DUAL_POLAR_C_SHIFT = {
    Fraction(1): (0, 0),
    Fraction(0): (-1, 0),
    Fraction(2): (0, 1),
    Fraction(3, 2): (0, 0),
    Fraction(1, 2): (-1, 0),
}

# e -> kappa with eta = b^kappa for (d even, d odd)
DUAL_POLAR_ETA_EXPONENT = {
    Fraction(1): (Fraction(1, 2), Fraction(1)),
    Fraction(0): (Fraction(1), Fraction(1, 2)),
    Fraction(2): (Fraction(1), Fraction(1, 2)),
    Fraction(3, 2): (Fraction(3, 4), Fraction(5, 4)),
    Fraction(1, 2): (Fraction(5, 4), Fraction(3, 4)),
}


class RegimeKind(str, enum.Enum):
    CASE_I_RHO = "case_i_rho"
    CASE_I_ALPHA_OVER_RHO = "case_i_alpha_over_rho"
    CASE_II = "case_ii"


@dataclass(frozen=True)
class LimitRegime:
    kind: RegimeKind
    b: int
    alpha: Fraction
    gamma: float
    rho: float
    eta: typing.Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", RegimeKind(self.kind))
        object.__setattr__(self, "alpha", to_fraction(self.alpha))
        object.__setattr__(self, "gamma", float(self.gamma))
        object.__setattr__(self, "rho", float(self.rho))
        if self.eta is not None:
            object.__setattr__(self, "eta", float(self.eta))

        if abs(self.b) < 2:
            raise RegimeError(f"limit regimes need |b| >= 2, got b = {self.b}")
        if not math.isfinite(self.gamma) or not math.isfinite(self.rho):
            raise RegimeError("`gamma` and `rho` have to be finite")
        if self.kind is RegimeKind.CASE_II:
            if self.alpha != 0:
                raise RegimeError(f"case ii needs alpha = 0, got alpha = {self.alpha}")
            if self.rho < 0:
                raise RegimeError("`rho` has to be nonnegative")
            if self.rho == 0:
                if self.b <= 0:
                    raise RegimeError(f"rho = 0 needs b > 0, got b = {self.b}")
                if self.eta is None or not self.eta > 0:
                    raise RegimeError("rho = 0 needs a positive `eta`")
        else:
            if not self.rho > 0:
                raise RegimeError(f"{self.kind.value} needs rho > 0, got rho = {self.rho}")
            if self.alpha == 0:
                raise RegimeError(f"{self.kind.value} needs alpha != 0")
            if self.b < 0:
                if self.alpha >= 0:
                    raise RegimeError(f"b < 0 needs alpha < 0, got alpha = {self.alpha}")
                expected = math.sqrt(-float(self.alpha))
                if abs(self.rho - expected) > RHO_MATCH_TOL * max(1.0, expected):
                    raise RegimeError(f"b < 0 forces rho = sqrt(-alpha) = {expected}, got rho = {self.rho}")
        if not self.normalizer > 0:
            raise RegimeError(f"1 + gamma sigma = {self.normalizer} has to be positive")

    @property
    def sigma(self) -> float:
        """rho + alpha / rho with 0/0 read as 0"""
        if self.rho == 0:
            return 0.0
        return self.rho + float(self.alpha) / self.rho

    @property
    def normalizer(self) -> float:
        return 1 + self.gamma * self.sigma

    @property
    def rho_effective(self) -> float:
        """The accumulation point of beta / sqrt(k) the measure is built on"""
        if self.kind is RegimeKind.CASE_I_ALPHA_OVER_RHO:
            return float(self.alpha) / self.rho
        return self.rho


@dataclass(frozen=True)
class Diagnostics:
    d: typing.Tuple[int, ...]
    t_sqrt_k: typing.Tuple[float, ...]
    beta_over_sqrt_k: typing.Tuple[float, ...]
    sqrt_k_over_bc: typing.Tuple[typing.Optional[float], ...]
    tags: typing.Tuple[str, ...]


@dataclass(frozen=True)
class RegimeReport:
    regimes: typing.Dict[str, LimitRegime]
    diagnostics: Diagnostics
    # groups whose beta / sqrt(k) kept two accumulation points
    split: bool = False

    def regime_for(self, tag: typing.Optional[str] = None) -> LimitRegime:
        if tag is not None and tag in self.regimes:
            return self.regimes[tag]
        if ALL in self.regimes:
            return self.regimes[ALL]
        if tag is None and len(self.regimes) == 1:
            return next(iter(self.regimes.values()))
        raise RegimeError(f"no regime for subnet {tag!r}, available: {list(self.regimes)}")

    @property
    def regime(self) -> LimitRegime:
        return self.regime_for(None)


def _diagnostic_row(cp: ClassicalParams, t: Fraction) -> typing.Tuple[float, float, typing.Optional[float]]:
    k = cp.bracket(cp.d) * cp.beta
    if k <= 0:
        raise RegimeError(f"valency has to be positive, got k = {k} at d = {cp.d}")
    t_sqrt_k = signed_sqrt(t * t * k, 1 if t >= 0 else -1)
    beta_over_sqrt_k = signed_sqrt(cp.beta * cp.beta / k, 1 if cp.beta >= 0 else -1)
    sqrt_k_over_bc = None
    if cp.b >= 2 and k >= 1:
        c = c_index(cp)
        sqrt_k_over_bc = signed_sqrt(k / Fraction(cp.b) ** (2 * c), 1)
    return t_sqrt_k, beta_over_sqrt_k, sqrt_k_over_bc


def _differs(x: float, y: float) -> bool:
    return abs(x - y) > PARITY_SPLIT_TOL * max(1.0, abs(x), abs(y))


def _parity_groups(diagnostics: Diagnostics) -> typing.Optional[typing.Dict[str, typing.List[int]]]:
    groups = OrderedDict(((D_EVEN, []), (D_ODD, [])))
    for index, d in enumerate(diagnostics.d):
        groups[D_ODD if d % 2 else D_EVEN].append(index)
    if not groups[D_EVEN] or not groups[D_ODD]:
        return None

    def estimate(values, indices):
        picked = [values[i] for i in indices]
        if any(value is None for value in picked):
            return None
        return aitken(picked)

    for values in (diagnostics.beta_over_sqrt_k, diagnostics.sqrt_k_over_bc):
        even, odd = estimate(values, groups[D_EVEN]), estimate(values, groups[D_ODD])
        if even is not None and odd is not None and _differs(even, odd):
            return groups
    return None


def _classify_group(
    samples: typing.Sequence[typing.Tuple[ClassicalParams, Fraction]],
    diagnostics: Diagnostics,
    indices: typing.Sequence[int],
) -> LimitRegime:
    tail = [samples[i][0] for i in indices[-3:]]
    if len({cp.b for cp in tail}) > 1 or len({cp.alpha for cp in tail}) > 1:
        raise RegimeError("b and alpha have to settle along the tail of the samples")
    b, alpha = tail[-1].b, tail[-1].alpha

    gamma = aitken([diagnostics.t_sqrt_k[i] for i in indices])
    s_values = [diagnostics.beta_over_sqrt_k[i] for i in indices]
    s_limit = aitken(s_values)
    logger.debug("b = %s, alpha = %s: gamma ~ %.12g, beta/sqrt(k) ~ %.12g", b, alpha, gamma, s_limit)

    if b < 0:
        if alpha >= 0:
            raise RegimeError(f"b < 0 needs alpha < 0, got alpha = {alpha}")
        rho = signed_sqrt(-alpha, 1)
        kind = RegimeKind.CASE_I_RHO if s_limit > 0 else RegimeKind.CASE_I_ALPHA_OVER_RHO
        return LimitRegime(kind=kind, b=b, alpha=alpha, gamma=gamma, rho=rho)

    if alpha == 0:
        last = s_values[-1]
        vanishing = abs(last) < RHO_ZERO_ABS
        if len(s_values) >= 2 and s_values[-2] != 0:
            vanishing = vanishing or last / s_values[-2] <= RHO_ZERO_RATIO
        if not vanishing:
            return LimitRegime(kind=RegimeKind.CASE_II, b=b, alpha=alpha, gamma=gamma, rho=s_limit)
        ratios = [diagnostics.sqrt_k_over_bc[i] for i in indices]
        if b <= 0 or any(value is None for value in ratios):
            raise RegimeError(f"beta / sqrt(k) -> 0 needs b > 0, got b = {b}")
        eta = math.sqrt(b - 1) * aitken(ratios)
        return LimitRegime(kind=RegimeKind.CASE_II, b=b, alpha=alpha, gamma=gamma, rho=0.0, eta=eta)

    if not s_limit > 0:
        raise RegimeError(f"beta / sqrt(k) tends to {s_limit}, a positive limit is needed when b > 0")
    return LimitRegime(kind=RegimeKind.CASE_I_RHO, b=b, alpha=alpha, gamma=gamma, rho=s_limit)


def classify(
    samples: typing.Sequence[typing.Tuple[ClassicalParams, RationalLike]],
    tags: typing.Optional[typing.Sequence[str]] = None,
) -> RegimeReport:
    """
    Read the limit regime off samples ordered by increasing d. Samples whose
    beta / sqrt(k) (or sqrt(k) / b^c) keeps two accumulation points are split by the
    parity of d, unless explicit subnet `tags` are given.
    """
    if not samples:
        raise RegimeError("no samples to classify")
    samples = [(cp, to_fraction(t)) for cp, t in samples]
    rows = [_diagnostic_row(cp, t) for cp, t in samples]

    if tags is not None:
        if len(tags) != len(samples):
            raise RegimeError("`tags` have to match the samples one to one")
        groups = OrderedDict()
        for index, tag in enumerate(tags):
            groups.setdefault(tag, []).append(index)
        split = len(groups) > 1
    else:
        tags = [ALL] * len(samples)
        groups = None
        split = False

    diagnostics = Diagnostics(
        d=tuple(cp.d for cp, _ in samples),
        t_sqrt_k=tuple(row[0] for row in rows),
        beta_over_sqrt_k=tuple(row[1] for row in rows),
        sqrt_k_over_bc=tuple(row[2] for row in rows),
        tags=tuple(tags),
    )
    if groups is None:
        groups = _parity_groups(diagnostics)
        if groups is None:
            groups = OrderedDict(((ALL, list(range(len(samples)))),))
        else:
            split = True
            tags = [D_ODD if cp.d % 2 else D_EVEN for cp, _ in samples]
            diagnostics = Diagnostics(
                d=diagnostics.d,
                t_sqrt_k=diagnostics.t_sqrt_k,
                beta_over_sqrt_k=diagnostics.beta_over_sqrt_k,
                sqrt_k_over_bc=diagnostics.sqrt_k_over_bc,
                tags=tuple(tags),
            )

    regimes = OrderedDict((tag, _classify_group(samples, diagnostics, indices)) for tag, indices in groups.items())
    return RegimeReport(regimes=dict(regimes), diagnostics=diagnostics, split=split)


@contextlib.contextmanager
def _float_range(what: str):
    try:
        yield
    except OverflowError as exc:
        raise NumericalOverflow(f"{what} left the range of doubles: {exc}") from exc


def _power(base: float, exponent: float) -> float:
    try:
        return base ** exponent
    except OverflowError:
        return math.inf


def _relative(value: ApproxScalar) -> float:
    return value.abs_err / abs(value.value) if value.value else 0.0


def _settings(j_min, j_max, eps) -> typing.Tuple[int, int, float]:
    conf = get_global_config()
    return (
        conf.jmin if j_min is None else j_min,
        conf.jmax if j_max is None else j_max,
        conf.prec if eps is None else eps,
    )


@dataclass
class _MeasureBuilder:
    labels: typing.List[int] = field(default_factory=list)
    atoms: typing.List[float] = field(default_factory=list)
    masses: typing.List[float] = field(default_factory=list)
    abs_err: float = 0.0
    truncated: bool = True

    def add(self, label: int, atom: float, mass: float, rel_err: float = 0.0):
        self.labels.append(label)
        self.atoms.append(atom)
        self.masses.append(mass)
        self.abs_err += abs(mass) * rel_err

    def build(self) -> DiscreteMeasure:
        total = math.fsum(self.masses)
        return DiscreteMeasure(
            labels=tuple(self.labels),
            atoms=tuple(self.atoms),
            masses=tuple(self.masses),
            truncated=self.truncated,
            tail_bound=max(abs(1 - total), self.abs_err),
            positivity=all(mass >= 0 for mass in self.masses),
        )


def _case_i_series(regime: LimitRegime, rho_e: float, j: int) -> float:
    """Terminating l-sum of the second mass factor, generated by its term ratio"""
    if regime.gamma == 0 or j == 0:
        return 1.0
    b = float(regime.b)
    alpha = float(regime.alpha)
    big_e = regime.alpha + 1 - regime.b
    bj = b ** j
    total, term = 1.0, 1.0
    for ell in range(j):
        gap = big_e - regime.alpha * Fraction(regime.b) ** ell
        if gap == 0:
            raise ZeroDenominator(f"E - alpha b^{ell} vanishes")
        bl = b ** ell
        term *= (bj - bl) * (1 - alpha * bl / (rho_e * rho_e * bj)) * regime.gamma * rho_e * (b - 1)
        term /= float(gap) * (1 - bl * b)
        total += term
    return total


def _case_i_measure(regime: LimitRegime, j_max: int, eps: float) -> DiscreteMeasure:
    rho_e = regime.rho_effective
    b = float(regime.b)
    q = 1 / b
    alpha = float(regime.alpha)
    big_e_exact = regime.alpha + 1 - regime.b
    big_e = float(big_e_exact)
    rho2 = rho_e * rho_e
    root = math.sqrt(regime.normalizer)

    builder = _MeasureBuilder()
    # gp(E, alpha; b)_j / ((b; b)_j rho^2j b^(j^2 - j)), advanced by its ratio
    factor = 1.0
    for j in range(j_max + 1):
        bj = b ** j
        atom = (float(bracket(j, regime.b)) * (rho_e - alpha / (rho_e * bj)) - 1 / (rho_e * bj) - regime.gamma) / root

        head = poch_inf(alpha / (rho2 * bj * b), q, eps)
        tail = poch_inf(big_e / (rho2 * bj * b), q, eps)
        if tail.value == 0:
            raise ZeroDenominator(f"denominator product vanishes at atom {j}")
        if j == 0:
            ratio = 1.0
        else:
            below = 1 - big_e / (rho2 * bj)
            if below == 0:
                raise ZeroDenominator(f"mass ratio has a pole at atom {j}")
            ratio = (1 - big_e / (rho2 * bj * bj)) / below
        second = poch_inf(regime.gamma * (b - 1) / (rho_e * bj * b), q, eps)
        series = _case_i_series(regime, rho_e, j)
        mass = head.value / tail.value * factor * ratio * second.value * series
        builder.add(j, atom, mass, _relative(head) + _relative(tail) + _relative(second))

        if big_e_exact == regime.alpha * Fraction(regime.b) ** j:
            # every further mass carries the vanishing factor
            builder.truncated = False
            break
        factor *= (big_e - alpha * bj) / ((1 - bj * b) * rho2 * bj * bj)
        if abs(factor) < TINY:
            logger.debug("masses dropped below %g after atom %d", TINY, j)
            break
    return builder.build()


def measure_case_rho_pos(
    regime: LimitRegime,
    j_max: typing.Optional[int] = None,
    eps: typing.Optional[float] = None,
) -> DiscreteMeasure:
    if regime.kind is RegimeKind.CASE_I_ALPHA_OVER_RHO or (regime.kind is RegimeKind.CASE_II and regime.rho == 0):
        raise RegimeError(f"beta / sqrt(k) -> rho > 0 measure does not apply to {regime.kind.value}")
    _, j_max, eps = _settings(None, j_max, eps)
    return _case_i_measure(regime, j_max, eps)


def measure_case_alpha_over_rho(
    regime: LimitRegime,
    j_max: typing.Optional[int] = None,
    eps: typing.Optional[float] = None,
) -> DiscreteMeasure:
    if regime.kind is not RegimeKind.CASE_I_ALPHA_OVER_RHO:
        raise RegimeError(f"beta / sqrt(k) -> alpha / rho measure does not apply to {regime.kind.value}")
    _, j_max, eps = _settings(None, j_max, eps)
    return _case_i_measure(regime, j_max, eps)


def normalize_eta(b: int, eta: float) -> typing.Tuple[float, int]:
    """(eta', shift) with eta = eta' b^shift and eta' / sqrt(b - 1) in [1, b)"""
    if b < 2:
        raise RegimeError(f"eta normalization needs b >= 2, got b = {b}")
    if not eta > 0:
        raise RegimeError("`eta` has to be positive")
    scale = math.sqrt(b - 1)
    ratio = eta / scale
    shift = 0
    while ratio >= b * (1 - 1e-12):
        ratio /= b
        shift += 1
    while ratio < 1 - 1e-12:
        ratio *= b
        shift -= 1
    return ratio * scale, shift


def measure_case_rho_zero(
    regime: LimitRegime,
    j_min: typing.Optional[int] = None,
    j_max: typing.Optional[int] = None,
    eps: typing.Optional[float] = None,
) -> DiscreteMeasure:
    """
    Two-sided measure of the alpha = 0, beta / sqrt(k) -> 0 regime. The window [j_min, j_max]
    is taken around the normalized eta; labels are reported in the scale of the given eta.
    """
    if regime.kind is not RegimeKind.CASE_II or regime.rho != 0:
        raise RegimeError("beta / sqrt(k) -> 0 measure needs case ii with rho = 0")
    if regime.b <= 0:
        raise RegimeError(f"beta / sqrt(k) -> 0 needs b > 0, got b = {regime.b}")
    j_min, j_max, eps = _settings(j_min, j_max, eps)
    if j_min > j_max:
        raise ValueError("`j_min` has to be at most `j_max`")

    b = float(regime.b)
    q = 1 / b
    eta, shift = normalize_eta(regime.b, regime.eta)
    scale = math.sqrt(b - 1)
    gamma = regime.gamma

    products = (poch_inf(q, q, eps), poch_inf(-1 / eta ** 2, q, eps), poch_inf(-(eta ** 2) / b, q, eps))
    log_norm = sum(math.log(value.value) for value in products)
    norm_err = sum(_relative(value) for value in products)

    builder = _MeasureBuilder()
    for j in range(j_min, j_max + 1):
        x = eta * b ** j
        log_mass = math.log1p(1 / (x * x)) - (2 * j * j - j) * math.log(b) - 4 * j * math.log(eta) - log_norm
        if log_mass < LOG_TINY:
            continue
        first = poch_inf(gamma * scale / (x * b), q, eps)
        second = poch_inf(-gamma * scale * x / b, q, eps)
        mass = math.exp(log_mass) * first.value * second.value
        atom = (x - 1 / x) / scale - gamma
        builder.add(j - shift, atom, mass, norm_err + _relative(first) + _relative(second))
    logger.debug(
        "two-sided measure: eta %.12g normalized by b^%d, %d atoms kept", regime.eta, shift, len(builder.atoms)
    )
    return builder.build()


def limit_measure(
    regime: LimitRegime,
    j_min: typing.Optional[int] = None,
    j_max: typing.Optional[int] = None,
    eps: typing.Optional[float] = None,
) -> DiscreteMeasure:
    with _float_range(f"{regime.kind.value} measure at gamma = {regime.gamma}"):
        if regime.kind is RegimeKind.CASE_I_ALPHA_OVER_RHO:
            return measure_case_alpha_over_rho(regime, j_max, eps)
        if regime.kind is RegimeKind.CASE_II and regime.rho == 0:
            return measure_case_rho_zero(regime, j_min, j_max, eps)
        return measure_case_rho_pos(regime, j_max, eps)


def dual_polar_c(d: int, e: RationalLike) -> int:
    """Atom index offset c = floor(log_b sqrt(k)) of a dual polar graph with parameters (d, b, 0, b^e)"""
    e = to_fraction(e)
    if e not in DUAL_POLAR_C_SHIFT:
        raise RegimeError(f"no dual polar type with e = {e}")
    even, odd = DUAL_POLAR_C_SHIFT[e]
    return d // 2 + (odd if d % 2 else even)


def dual_polar_eta(b: int, e: RationalLike, parity: str) -> float:
    """eta = b^((d + e) / 2 - c), which only depends on the parity of d"""
    e = to_fraction(e)
    if e not in DUAL_POLAR_C_SHIFT:
        raise RegimeError(f"no dual polar type with e = {e}")
    if parity not in (D_EVEN, D_ODD):
        raise RegimeError(f"dual polar eta needs a parity of d, got {parity!r}")
    even, odd = DUAL_POLAR_C_SHIFT[e]
    exponent = e / 2 - even if parity == D_EVEN else (1 + e) / 2 - odd
    return float(exact_power(b, exponent))


class PresetName(str, enum.Enum):
    GRASSMANN = "grassmann"
    HALF_DUAL_POLAR = "half_dual_polar"
    SECOND_DUAL_POLAR = "second_dual_polar"
    BILINEAR = "bilinear"
    ALTERNATING = "alternating"
    HERMITIAN_FORMS = "hermitian_forms"
    DUAL_POLAR = "dual_polar"


@dataclass(frozen=True)
class Preset:
    """
    A family limit in closed form. `base` is q for grassmann, bilinear and dual_polar
    (where it is b itself) and r for the others; `sign` picks the subnet of the b = -r
    families (+1 for odd d), `parity` the subnet of alternating forms and dual polar graphs.
    """

    name: PresetName
    base: int
    delta: Fraction = Fraction(0)
    epsilon: int = 0
    sign: int = 1
    e: typing.Optional[Fraction] = None
    parity: typing.Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "name", PresetName(self.name))
        object.__setattr__(self, "delta", to_fraction(self.delta))
        if self.e is not None:
            object.__setattr__(self, "e", to_fraction(self.e))
        if self.base < 2:
            raise RegimeError(f"preset base has to be at least 2, got {self.base}")
        if self.sign not in (-1, 1):
            raise RegimeError("`sign` has to be +1 or -1")
        if self.epsilon not in (0, 1):
            raise RegimeError("`epsilon` has to be 0 or 1")
        if self.name is PresetName.ALTERNATING and self.parity not in (N_EVEN, N_ODD):
            raise RegimeError(f"alternating forms need the parity of n, got {self.parity!r}")
        if self.name is PresetName.DUAL_POLAR:
            if self.e not in DUAL_POLAR_C_SHIFT:
                raise RegimeError(f"no dual polar type with e = {self.e}")
            if self.parity not in (D_EVEN, D_ODD):
                raise RegimeError(f"dual polar presets need the parity of d, got {self.parity!r}")

    @property
    def b(self) -> int:
        if self.name in (PresetName.HALF_DUAL_POLAR, PresetName.ALTERNATING):
            return self.base ** 2
        if self.name in (PresetName.SECOND_DUAL_POLAR, PresetName.HERMITIAN_FORMS):
            return -self.base
        return self.base

    @property
    def alpha(self) -> Fraction:
        r = Fraction(self.base)
        return {
            PresetName.GRASSMANN: r,
            PresetName.HALF_DUAL_POLAR: r * (r + 1),
            PresetName.SECOND_DUAL_POLAR: r * (r + 1) / (1 - r),
            PresetName.BILINEAR: r - 1,
            PresetName.ALTERNATING: r * r - 1,
            PresetName.HERMITIAN_FORMS: -r - 1,
            PresetName.DUAL_POLAR: Fraction(0),
        }[self.name]

    @property
    def forms_delta(self) -> Fraction:
        """delta of the bilinear-type closed form, alternating forms included"""
        if self.name is PresetName.ALTERNATING:
            return Fraction(-1, 4) if self.parity == N_EVEN else Fraction(1, 4)
        return self.delta

    @property
    def rho(self) -> float:
        b = float(self.b)
        if self.name is PresetName.GRASSMANN:
            return b ** float(self.delta)
        if self.name in (PresetName.BILINEAR, PresetName.ALTERNATING):
            return b ** float(self.forms_delta) * math.sqrt(b - 1)
        if self.name is PresetName.DUAL_POLAR:
            return 0.0
        if self.name is PresetName.HALF_DUAL_POLAR:
            return math.sqrt(self.base + 1)
        return math.sqrt(-float(self.alpha))

    @property
    def kind(self) -> RegimeKind:
        if self.name is PresetName.DUAL_POLAR:
            return RegimeKind.CASE_II
        if self.name is PresetName.HALF_DUAL_POLAR and self.epsilon == 1:
            return RegimeKind.CASE_I_ALPHA_OVER_RHO
        if self.name in (PresetName.SECOND_DUAL_POLAR, PresetName.HERMITIAN_FORMS) and self.sign < 0:
            return RegimeKind.CASE_I_ALPHA_OVER_RHO
        return RegimeKind.CASE_I_RHO

    @property
    def eta(self) -> typing.Optional[float]:
        if self.name is not PresetName.DUAL_POLAR:
            return None
        return dual_polar_eta(self.base, self.e, self.parity)

    def regime(self, gamma: float = 0.0) -> LimitRegime:
        return LimitRegime(kind=self.kind, b=self.b, alpha=self.alpha, gamma=gamma, rho=self.rho, eta=self.eta)

    def derived_gamma(self) -> float:
        """gamma reached by t = b^-d (t = b^-c for dual polar graphs)"""
        r = float(self.base)
        b = float(self.b)
        if self.name is PresetName.GRASSMANN:
            return r ** float(self.delta) / (r - 1)
        if self.name is PresetName.HALF_DUAL_POLAR:
            return r ** self.epsilon / ((r - 1) * math.sqrt(r + 1))
        if self.name is PresetName.SECOND_DUAL_POLAR:
            return -self.sign * math.sqrt(r / (r * r - 1))
        if self.name in (PresetName.BILINEAR, PresetName.ALTERNATING):
            return b ** float(self.forms_delta) / math.sqrt(b - 1)
        if self.name is PresetName.HERMITIAN_FORMS:
            return -self.sign / math.sqrt(r + 1)
        return self.eta / math.sqrt(b - 1)


def _grassmann_closed_form(preset: Preset, gamma: float, j_max: int, eps: float) -> DiscreteMeasure:
    q = preset.base
    b = float(q)
    delta = float(preset.delta)
    root = (b - 1) * math.sqrt(1 + gamma * (b ** delta + b ** (1 - delta)))
    builder = _MeasureBuilder()
    for j in range(j_max + 1):
        head = _power(b, -j * (2 * delta + j - 1)) - _power(b, -(j + 1) * (2 * delta + j))
        if j > 0 and abs(head) < TINY:
            break
        atom = (b ** (delta + j) + b ** (-delta - j) - b ** delta - b ** (1 - delta) - gamma * (b - 1)) / root
        product = poch_inf(gamma * (b - 1) / b ** (delta + j + 1), 1 / b, eps)
        series = phi_terminating(
            [Fraction(q) ** -j, exact_power(q, 1 - 2 * preset.delta - j)],
            [Fraction(q)],
            q,
            gamma * (b - 1) * b ** (delta + j),
        )
        builder.add(j, atom, head * product.value * float(series), _relative(product))
    return builder.build()


def _half_dual_polar_closed_form(preset: Preset, gamma: float, j_max: int, eps: float) -> DiscreteMeasure:
    r = preset.base
    rf = float(r)
    epsilon = preset.epsilon
    root = (rf - 1) * math.sqrt(rf + 1 + gamma * (rf + 1) ** 2.5)
    q = 1 / rf ** 2
    constant = poch_inf(1 / rf, q, eps)
    norm = poch_inf(q, q, eps)
    spread = gamma * (rf - 1) * math.sqrt(rf + 1)
    builder = _MeasureBuilder()
    for j in range(j_max + 1):
        x = rf ** (epsilon + 2 * j)
        # (x^2 - 1) / (x - 1) with the value 1 at x = 1
        ratio = 1.0 if epsilon == 0 and j == 0 else x + 1
        head = ratio * constant.value / (_power(rf, (epsilon + j) * (2 * j + 1)) * norm.value)
        if j > 0 and abs(head) < TINY:
            break
        atom = (x + 1 / x - rf - 1 - spread) / root
        product = poch_inf(spread / rf ** (epsilon + 2 * j + 2), q, eps)
        series = phi_terminating(
            [Fraction(r) ** (-2 * j), Fraction(r) ** (1 - 2 * epsilon - 2 * j)],
            [Fraction(r)],
            r * r,
            gamma * x * (rf - 1) * math.sqrt(rf + 1),
        )
        rel_err = _relative(constant) + _relative(norm) + _relative(product)
        builder.add(j, atom, head * product.value * float(series), rel_err)
    return builder.build()


def _second_dual_polar_closed_form(preset: Preset, gamma: float, j_max: int, eps: float) -> DiscreteMeasure:
    r = float(preset.base)
    sign = preset.sign
    scale = math.sqrt((r * r - 1) / r)
    constant = poch_inf(1 / r, -1 / r, eps)
    norm = poch_inf(-1 / r, -1 / r, eps)
    builder = _MeasureBuilder()
    for j in range(j_max + 1):
        head = (_power(r, 2 * j + 1) + 1) * constant.value / (_power(r, (j + 1) ** 2) * norm.value)
        if j > 0 and abs(head) < TINY:
            break
        atom = sign * (-math.sqrt(r) * (-r) ** j + (-r) ** -j / math.sqrt(r)) / math.sqrt(r * r - 1) - gamma
        product = poch_inf(-sign * gamma * (-r) ** (-j - 1) * scale, -1 / r, eps)
        finite = poch(-sign * gamma * (-r) ** (j - 1) * scale, 1 / r ** 2, j)
        rel_err = _relative(constant) + _relative(norm) + _relative(product)
        builder.add(j, atom, head * product.value * finite, rel_err)
    return builder.build()


def _bilinear_closed_form(base: int, delta: Fraction, gamma: float, j_max: int, eps: float) -> DiscreteMeasure:
    b = float(base)
    d = float(delta)
    root = math.sqrt(b - 1 + gamma * (b ** d + b ** -d) * (b - 1) ** 1.5)
    builder = _MeasureBuilder()
    for j in range(j_max + 1):
        scale = poch(b, b, j) * _power(b, 2 * d * j + binomial2(j))
        product = poch_inf(_power(b, -2 * d - j - 1), 1 / b, eps)
        head = (-1) ** j * product.value / scale
        if j > 0 and abs(head) < TINY:
            break
        atom = (b ** (d + j) - b ** d - b ** -d - gamma * math.sqrt(b - 1)) / root
        second = poch_inf(gamma * math.sqrt(b - 1) / b ** (d + j + 1), 1 / b, eps)
        series = phi_terminating(
            [Fraction(base) ** -j, exact_power(base, -2 * delta - j)],
            [],
            base,
            gamma * b ** (d + j) * math.sqrt(b - 1),
        )
        builder.add(j, atom, head * second.value * float(series), _relative(product) + _relative(second))
    return builder.build()


def _hermitian_forms_closed_form(preset: Preset, gamma: float, j_max: int, eps: float) -> DiscreteMeasure:
    r = preset.base
    rf = float(r)
    sign = preset.sign
    minus_r = Fraction(-r)
    builder = _MeasureBuilder()
    for j in range(j_max + 1):
        product = poch_inf(-((-rf) ** (-j - 1)), -1 / rf, eps)
        scale = poch(-rf, -rf, j) * _power(-rf, binomial2(j))
        head = product.value / scale
        if j > 0 and abs(head) < TINY:
            break
        atom = -sign * (-rf) ** j / math.sqrt(rf + 1) - gamma
        second = poch_inf(-sign * gamma * math.sqrt(rf + 1) / (-rf) ** (j + 1), -1 / rf, eps)
        series = phi_terminating(
            [minus_r ** -j, -(minus_r ** -j)],
            [],
            minus_r,
            sign * gamma * (-rf) ** j * math.sqrt(rf + 1),
        )
        builder.add(j, atom, head * second.value * float(series), _relative(product) + _relative(second))
    return builder.build()


def _theta_normalizer(b: int, kappa: Fraction, eps: float) -> float:
    """sum over n of b^(-n(n-1)/2 - 2 kappa n), which is (1/b; 1/b)(-b^-2kappa; 1/b)(-b^(2kappa-1); 1/b)"""
    terms = [1.0]
    for step in (1, -1):
        n = step
        while True:
            term = _power(float(b), float(-Fraction(n * (n - 1), 2) - 2 * kappa * n))
            terms.append(term)
            if term <= eps * math.fsum(terms):
                break
            n += step
    return math.fsum(terms)


def _dual_polar_closed_form(preset: Preset, gamma: float, j_min: int, j_max: int, eps: float) -> DiscreteMeasure:
    b = preset.base
    bf = float(b)
    q = 1 / bf
    kappa = DUAL_POLAR_ETA_EXPONENT[preset.e][0 if preset.parity == D_EVEN else 1]
    scale = math.sqrt(bf - 1)
    norm = _theta_normalizer(b, kappa, eps)
    builder = _MeasureBuilder()
    for label in range(j_min, j_max + 1):
        exponent = -2 * label * label + label - 4 * kappa * label
        head = _power(bf, float(exponent)) + _power(bf, float(exponent - 2 * kappa - 2 * label))
        if head < TINY:
            continue
        x = _power(bf, float(kappa + label))
        first = poch_inf(gamma * scale / (x * bf), q, eps)
        second = poch_inf(-gamma * scale * x / bf, q, eps)
        atom = (x - 1 / x) / scale - gamma
        builder.add(label, atom, head / norm * first.value * second.value, eps + _relative(first) + _relative(second))
    return builder.build()


def family_closed_form(
    preset: Preset,
    gamma: float = 0.0,
    j_min: typing.Optional[int] = None,
    j_max: typing.Optional[int] = None,
    eps: typing.Optional[float] = None,
) -> DiscreteMeasure:
    """Specialized limit measure of a named family; `j_min` only matters for dual polar graphs"""
    j_min, j_max, eps = _settings(j_min, j_max, eps)
    # validates the normalizer before any evaluation
    preset.regime(gamma)
    with _float_range(f"{preset.name.value} closed form at gamma = {gamma}"):
        if preset.name is PresetName.GRASSMANN:
            return _grassmann_closed_form(preset, gamma, j_max, eps)
        if preset.name is PresetName.HALF_DUAL_POLAR:
            return _half_dual_polar_closed_form(preset, gamma, j_max, eps)
        if preset.name is PresetName.SECOND_DUAL_POLAR:
            return _second_dual_polar_closed_form(preset, gamma, j_max, eps)
        if preset.name in (PresetName.BILINEAR, PresetName.ALTERNATING):
            return _bilinear_closed_form(preset.b, preset.forms_delta, gamma, j_max, eps)
        if preset.name is PresetName.HERMITIAN_FORMS:
            return _hermitian_forms_closed_form(preset, gamma, j_max, eps)
        if j_min > j_max:
            raise ValueError("`j_min` has to be at most `j_max`")
        return _dual_polar_closed_form(preset, gamma, j_min, j_max, eps)


def lebesgue_check(r: int, tol: float) -> bool:
    """(r^-1; -r^-1)_inf (-r^-1; r^-2)_inf = 1"""
    if r < 2:
        raise ValueError("`r` has to be at least 2")
    if tol <= 0:
        raise ValueError("`tol` has to be positive")
    eps = min(tol / 10, 1e-14)
    value = poch_inf(1 / r, -1 / r, eps).value * poch_inf(-1 / r, 1 / r ** 2, eps).value
    return abs(value - 1) < tol
