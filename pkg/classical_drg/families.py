"""
Catalog of the known infinite families with classical parameters, and the t-schedules
that drive them into a limit regime.
"""
import enum
import logging
import math
import typing
from dataclasses import dataclass
from fractions import Fraction

from classical_drg.exceptions import DegenerateVariance, InfeasibleParameters, RegimeError
from classical_drg.gibbs import gibbs_variance
from classical_drg.limits import D_EVEN, D_ODD, DUAL_POLAR_C_SHIFT, N_EVEN, N_ODD, Preset, PresetName, dual_polar_eta
from classical_drg.params import ClassicalParams
from classical_drg.qseries import bracket, exact_power
from classical_drg.settings import get_global_config
from classical_drg.types import RationalLike
from classical_drg.utils import to_fraction

__all__ = (
    "FamilyName",
    "DualPolarType",
    "FamilyDescriptor",
    "FamilyMember",
    "TRule",
    "member",
    "schedule",
    "eta_table",
    "catalog",
    "limit_preset",
    "tail_samples",
)

logger = logging.getLogger(__name__)


class FamilyName(str, enum.Enum):
    GRASSMANN = "grassmann"
    TWISTED_GRASSMANN = "twisted_grassmann"
    DUAL_POLAR = "dual_polar"
    HEMMETER = "hemmeter"
    HALF_DUAL_POLAR = "half_dual_polar"
    USTIMENKO = "ustimenko"
    SECOND_HERMITIAN_DUAL_POLAR = "second_hermitian_dual_polar"
    BILINEAR = "bilinear"
    ALTERNATING = "alternating"
    QUADRATIC = "quadratic"
    HERMITIAN_FORMS = "hermitian_forms"


class DualPolarType(str, enum.Enum):
    C = "C"
    B = "B"
    D = "D"
    TWISTED_D = "2D"
    UNITARY_EVEN = "2A_even"
    UNITARY_ODD = "2A_odd"

    @property
    def e(self) -> Fraction:
        return {
            DualPolarType.C: Fraction(1),
            DualPolarType.B: Fraction(1),
            DualPolarType.D: Fraction(0),
            DualPolarType.TWISTED_D: Fraction(2),
            DualPolarType.UNITARY_EVEN: Fraction(3, 2),
            DualPolarType.UNITARY_ODD: Fraction(1, 2),
        }[self]

    @property
    def squared_base(self) -> bool:
        """Unitary types live over the field with r^2 elements"""
        return self in (DualPolarType.UNITARY_EVEN, DualPolarType.UNITARY_ODD)


# parameter names each family reads from its descriptor
_FAMILY_PARAMETERS = {
    FamilyName.GRASSMANN: ("q", "n | delta"),
    FamilyName.TWISTED_GRASSMANN: ("q",),
    FamilyName.DUAL_POLAR: ("q | r", "kind"),
    FamilyName.HEMMETER: ("q",),
    FamilyName.HALF_DUAL_POLAR: ("r", "n | epsilon"),
    FamilyName.USTIMENKO: ("r", "n | epsilon"),
    FamilyName.SECOND_HERMITIAN_DUAL_POLAR: ("r",),
    FamilyName.BILINEAR: ("q", "e | delta"),
    FamilyName.ALTERNATING: ("r", "n | epsilon"),
    FamilyName.QUADRATIC: ("r", "n | epsilon"),
    FamilyName.HERMITIAN_FORMS: ("r",),
}


@dataclass(frozen=True)
class FamilyDescriptor:
    """
    `base` is q or r. Families indexed by a second integer either fix it (`n`, or `e` for
    bilinear forms) or tie it to the diameter: n = 2d + 2 delta - 1 for Grassmann graphs,
    e = d + 2 delta for bilinear forms, n = 2d + epsilon for the half dual polar type.
    """

    name: FamilyName
    base: int
    n: typing.Optional[int] = None
    e: typing.Optional[int] = None
    delta: typing.Optional[Fraction] = None
    epsilon: typing.Optional[int] = None
    kind: typing.Optional[DualPolarType] = None

    def __post_init__(self):
        object.__setattr__(self, "name", FamilyName(self.name))
        if self.delta is not None:
            object.__setattr__(self, "delta", to_fraction(self.delta))
        if self.kind is not None:
            object.__setattr__(self, "kind", DualPolarType(self.kind))
        if self.base < 2:
            raise InfeasibleParameters(f"family base has to be at least 2, got {self.base}")
        if self.epsilon is not None and self.epsilon not in (0, 1):
            raise InfeasibleParameters("`epsilon` has to be 0 or 1")
        if self.name is FamilyName.DUAL_POLAR and self.kind is None:
            raise InfeasibleParameters("dual polar graphs need a `kind`")
        if self.name is FamilyName.GRASSMANN and (self.n is None) == (self.delta is None):
            raise InfeasibleParameters("Grassmann graphs need exactly one of `n` and `delta`")
        if self.name is FamilyName.BILINEAR and (self.e is None) == (self.delta is None):
            raise InfeasibleParameters("bilinear forms graphs need exactly one of `e` and `delta`")
        if self.delta is not None and (2 * self.delta).denominator != 1:
            raise InfeasibleParameters(f"`delta` has to be a multiple of 1/2, got {self.delta}")
        paired = (FamilyName.HALF_DUAL_POLAR, FamilyName.USTIMENKO, FamilyName.ALTERNATING, FamilyName.QUADRATIC)
        if self.name in paired and (self.n is None) == (self.epsilon is None):
            raise InfeasibleParameters(f"{self.name.value} needs exactly one of `n` and `epsilon`")

    @property
    def label(self) -> str:
        extras = []
        for name in ("n", "e", "delta", "epsilon"):
            value = getattr(self, name)
            if value is not None:
                extras.append(f"{name}={value}")
        if self.kind is not None:
            extras.append(f"kind={self.kind.value}")
        return f"{self.name.value}({', '.join([f'base={self.base}'] + extras)})"


@dataclass(frozen=True)
class FamilyMember:
    descriptor: FamilyDescriptor
    d: int
    cp: ClassicalParams
    subnet_tag: typing.Optional[str] = None


def _half_n(fd: FamilyDescriptor, d: int, n_shift: int = 0) -> int:
    """n of a family with d = floor(n / 2); quadratic forms count n one lower"""
    if fd.n is not None:
        n = fd.n + n_shift
        if n // 2 != d:
            raise InfeasibleParameters(f"{fd.label} only has the member d = {n // 2}, asked for d = {d}")
        return n
    return 2 * d + fd.epsilon


def _m_exponent(n: int) -> int:
    return 2 * math.ceil(n / 2) - 1


def _parity(value: int, even: str, odd: str) -> str:
    return odd if value % 2 else even


def member(fd: FamilyDescriptor, d: int) -> FamilyMember:
    if d < 1:
        raise InfeasibleParameters(f"diameter has to be positive, got d = {d}")
    name = fd.name
    q = fd.base
    r = Fraction(q)
    tag = None

    if name in (FamilyName.GRASSMANN, FamilyName.TWISTED_GRASSMANN):
        if name is FamilyName.TWISTED_GRASSMANN:
            n = 2 * d + 1
        elif fd.n is not None:
            n = fd.n
        else:
            n = 2 * d + int(2 * fd.delta) - 1
        if n < 2 * d:
            raise InfeasibleParameters(f"Grassmann graphs need n >= 2d, got n = {n}, d = {d}")
        cp = ClassicalParams(d, q, r, r * bracket(n - d, q))
    elif name in (FamilyName.DUAL_POLAR, FamilyName.HEMMETER):
        kind = DualPolarType.D if name is FamilyName.HEMMETER else fd.kind
        b = q * q if kind.squared_base else q
        e = Fraction(0) if name is FamilyName.HEMMETER else kind.e
        cp = ClassicalParams(d, b, Fraction(0), Fraction(exact_power(b, e)))
        tag = _parity(d, D_EVEN, D_ODD)
    elif name in (FamilyName.HALF_DUAL_POLAR, FamilyName.USTIMENKO):
        n = _half_n(fd, d)
        m = _m_exponent(n)
        cp = ClassicalParams(d, q * q, r * (r + 1), r * (r ** m - 1) / (r - 1))
        tag = _parity(n, N_EVEN, N_ODD)
    elif name is FamilyName.SECOND_HERMITIAN_DUAL_POLAR:
        cp = ClassicalParams(d, -q, r * (r + 1) / (1 - r), r * (1 + (-r) ** d) / (1 - r))
        tag = _parity(d, D_EVEN, D_ODD)
    elif name is FamilyName.BILINEAR:
        e = fd.e if fd.e is not None else d + int(2 * fd.delta)
        if e < d:
            raise InfeasibleParameters(f"bilinear forms graphs need e >= d, got e = {e}, d = {d}")
        cp = ClassicalParams(d, q, r - 1, r ** e - 1)
    elif name in (FamilyName.ALTERNATING, FamilyName.QUADRATIC):
        n = _half_n(fd, d, 1 if name is FamilyName.QUADRATIC else 0)
        m = _m_exponent(n)
        cp = ClassicalParams(d, q * q, r * r - 1, r ** m - 1)
        tag = _parity(n, N_EVEN, N_ODD)
    elif name is FamilyName.HERMITIAN_FORMS:
        cp = ClassicalParams(d, -q, -r - 1, -((-r) ** d) - 1)
        tag = _parity(d, D_EVEN, D_ODD)
    else:
        raise InfeasibleParameters(f"unknown family {name}")
    return FamilyMember(descriptor=fd, d=d, cp=cp, subnet_tag=tag)


@dataclass(frozen=True)
class TRule:
    """
    t along a family: `zero`, `constant` (t = value) or
    `power` (t = b^-ceil(slope d + intercept)).
    """

    kind: str
    value: Fraction = Fraction(0)
    slope: Fraction = Fraction(1)
    intercept: Fraction = Fraction(0)

    ZERO = "zero"
    CONSTANT = "constant"
    POWER = "power"

    def __post_init__(self):
        if self.kind not in (self.ZERO, self.CONSTANT, self.POWER):
            raise ValueError(f"unknown t-rule kind {self.kind!r}")
        object.__setattr__(self, "value", to_fraction(self.value))
        object.__setattr__(self, "slope", to_fraction(self.slope))
        object.__setattr__(self, "intercept", to_fraction(self.intercept))

    @classmethod
    def zero(cls) -> "TRule":
        return cls(cls.ZERO)

    @classmethod
    def constant(cls, value: RationalLike) -> "TRule":
        return cls(cls.CONSTANT, value=to_fraction(value))

    @classmethod
    def power(cls, slope: RationalLike = 1, intercept: RationalLike = 0) -> "TRule":
        return cls(cls.POWER, slope=to_fraction(slope), intercept=to_fraction(intercept))

    def __call__(self, cp: ClassicalParams) -> Fraction:
        if self.kind == self.ZERO:
            return Fraction(0)
        if self.kind == self.CONSTANT:
            return self.value
        exponent = math.ceil(self.slope * cp.d + self.intercept)
        return Fraction(cp.b) ** -exponent

    def __str__(self) -> str:
        if self.kind == self.ZERO:
            return self.ZERO
        if self.kind == self.CONSTANT:
            return f"const:{self.value}"
        return f"power:{self.slope},{self.intercept}"


def schedule(
    fd: FamilyDescriptor,
    d_list: typing.Iterable[int],
    t_rule: TRule,
) -> typing.List[typing.Tuple[ClassicalParams, Fraction]]:
    samples = []
    for d in d_list:
        cp = member(fd, d).cp
        t = t_rule(cp)
        variance = gibbs_variance(cp, t)
        if variance <= 0:
            raise DegenerateVariance(f"{fd.label}: variance {variance} at d = {d}, t = {t}")
        samples.append((cp, t))
    return samples


def _dual_polar_e(fd: FamilyDescriptor) -> Fraction:
    if fd.name is FamilyName.HEMMETER:
        return Fraction(0)
    if fd.name is FamilyName.DUAL_POLAR:
        return fd.kind.e
    raise RegimeError(f"{fd.name.value} has no eta table")


def _dual_polar_b(fd: FamilyDescriptor) -> int:
    return fd.base * fd.base if fd.kind is not None and fd.kind.squared_base else fd.base


def eta_table(fd: FamilyDescriptor, parity: str) -> typing.Tuple[float, int]:
    """(eta, c_shift) of a dual polar type, with c = floor(d / 2) + c_shift"""
    e = _dual_polar_e(fd)
    even, odd = DUAL_POLAR_C_SHIFT[e]
    if parity not in (D_EVEN, D_ODD):
        raise RegimeError(f"eta depends on the parity of d, got {parity!r}")
    return dual_polar_eta(_dual_polar_b(fd), e, parity), even if parity == D_EVEN else odd


def limit_preset(fd: FamilyDescriptor, parity: typing.Optional[str] = None) -> typing.Optional[Preset]:
    """Closed-form limit of the family along growing d, None for families pinned to one member"""
    name = fd.name
    if name is FamilyName.GRASSMANN:
        return None if fd.delta is None else Preset(PresetName.GRASSMANN, fd.base, delta=fd.delta)
    if name is FamilyName.TWISTED_GRASSMANN:
        return Preset(PresetName.GRASSMANN, fd.base, delta=Fraction(1))
    if name is FamilyName.BILINEAR:
        return None if fd.delta is None else Preset(PresetName.BILINEAR, fd.base, delta=fd.delta)
    if name in (FamilyName.HALF_DUAL_POLAR, FamilyName.USTIMENKO):
        return None if fd.epsilon is None else Preset(PresetName.HALF_DUAL_POLAR, fd.base, epsilon=fd.epsilon)
    if name in (FamilyName.ALTERNATING, FamilyName.QUADRATIC):
        if fd.epsilon is None:
            return None
        return Preset(PresetName.ALTERNATING, fd.base, parity=N_ODD if fd.epsilon else N_EVEN)

    if parity not in (D_EVEN, D_ODD):
        raise RegimeError(f"{name.value} splits by the parity of d, got {parity!r}")
    if name in (FamilyName.DUAL_POLAR, FamilyName.HEMMETER):
        return Preset(PresetName.DUAL_POLAR, _dual_polar_b(fd), e=_dual_polar_e(fd), parity=parity)
    sign = 1 if parity == D_ODD else -1
    if name is FamilyName.SECOND_HERMITIAN_DUAL_POLAR:
        return Preset(PresetName.SECOND_DUAL_POLAR, fd.base, sign=sign)
    return Preset(PresetName.HERMITIAN_FORMS, fd.base, sign=sign)


def tail_samples(
    fd: FamilyDescriptor,
    t_rule: TRule,
    parity: typing.Optional[str] = None,
    depth: typing.Optional[int] = None,
) -> typing.List[typing.Tuple[ClassicalParams, Fraction]]:
    """
    Far members d = D, D + 2, D + 4 of the requested parity of d (any parity for the
    n-subnets), or six consecutive ones when no parity is given.
    """
    depth = depth or get_global_config().far_diameter
    if parity in (D_EVEN, D_ODD):
        start = depth + (depth % 2 != (parity == D_ODD))
        d_list = [start, start + 2, start + 4]
    elif parity in (N_EVEN, N_ODD):
        d_list = [depth, depth + 2, depth + 4]
    elif parity is None:
        d_list = list(range(depth, depth + 6))
    else:
        raise RegimeError(f"unknown subnet {parity!r}")
    logger.debug("tail of %s under %s at d = %s", fd.label, t_rule, d_list)
    return schedule(fd, d_list, t_rule)


@dataclass(frozen=True)
class CatalogEntry:
    name: FamilyName
    parameters: typing.Tuple[str, ...]
    presets: typing.Tuple[str, ...]
    subnets: typing.Tuple[str, ...]


def catalog() -> typing.List[CatalogEntry]:
    entries = []
    for name, parameters in _FAMILY_PARAMETERS.items():
        if name in (FamilyName.GRASSMANN, FamilyName.TWISTED_GRASSMANN):
            presets, subnets = (PresetName.GRASSMANN,), ()
        elif name in (FamilyName.DUAL_POLAR, FamilyName.HEMMETER):
            presets, subnets = (PresetName.DUAL_POLAR,), (D_EVEN, D_ODD)
        elif name in (FamilyName.HALF_DUAL_POLAR, FamilyName.USTIMENKO):
            presets, subnets = (PresetName.HALF_DUAL_POLAR,), (N_EVEN, N_ODD)
        elif name is FamilyName.SECOND_HERMITIAN_DUAL_POLAR:
            presets, subnets = (PresetName.SECOND_DUAL_POLAR, PresetName.DUAL_POLAR), (D_EVEN, D_ODD)
        elif name is FamilyName.BILINEAR:
            presets, subnets = (PresetName.BILINEAR,), ()
        elif name in (FamilyName.ALTERNATING, FamilyName.QUADRATIC):
            presets, subnets = (PresetName.ALTERNATING,), (N_EVEN, N_ODD)
        else:
            presets, subnets = (PresetName.HERMITIAN_FORMS,), (D_EVEN, D_ODD)
        entries.append(
            CatalogEntry(
                name=name,
                parameters=parameters,
                presets=tuple(preset.value for preset in presets),
                subnets=subnets,
            )
        )
    return entries
