import math
from fractions import Fraction

import pytest

from classical_drg.exceptions import NumericalOverflow, RegimeError
from classical_drg.families import DualPolarType, FamilyDescriptor, FamilyName, TRule, tail_samples
from classical_drg.fock import limit_coefficients, limit_moment
from classical_drg.gibbs import measure_moment
from classical_drg.limits import (
    D_EVEN,
    D_ODD,
    DUAL_POLAR_ETA_EXPONENT,
    N_EVEN,
    N_ODD,
    LimitRegime,
    Preset,
    RegimeKind,
    _theta_normalizer,
    classify,
    dual_polar_c,
    dual_polar_eta,
    family_closed_form,
    lebesgue_check,
    limit_measure,
    measure_case_alpha_over_rho,
    measure_case_rho_pos,
    measure_case_rho_zero,
    normalize_eta,
)
from classical_drg.qseries import poch_inf

PRESETS = [
    Preset("grassmann", 2, delta=1),
    Preset("grassmann", 3, delta=Fraction(3, 2)),
    Preset("half_dual_polar", 2, epsilon=0),
    Preset("half_dual_polar", 2, epsilon=1),
    Preset("second_dual_polar", 2, sign=1),
    Preset("second_dual_polar", 3, sign=-1),
    Preset("bilinear", 2, delta=0),
    Preset("bilinear", 3, delta=1),
    Preset("alternating", 2, parity=N_EVEN),
    Preset("alternating", 2, parity=N_ODD),
    Preset("hermitian_forms", 2, sign=1),
    Preset("hermitian_forms", 3, sign=-1),
    Preset("dual_polar", 2, e=1, parity=D_EVEN),
    Preset("dual_polar", 3, e=0, parity=D_ODD),
    Preset("dual_polar", 2, e=Fraction(3, 2), parity=D_EVEN),
    Preset("dual_polar", 4, e=Fraction(1, 2), parity=D_ODD),
]
PRESET_IDS = [f"{preset.name.value}-{preset.base}-{index}" for index, preset in enumerate(PRESETS)]


def gammas(preset: Preset):
    return (0.0, preset.derived_gamma())


@pytest.mark.parametrize("kwargs", [
    {"kind": "case_i_rho", "b": 1, "alpha": 1, "gamma": 0, "rho": 1},
    {"kind": "case_ii", "b": 2, "alpha": 1, "gamma": 0, "rho": 1},
    {"kind": "case_ii", "b": 2, "alpha": 0, "gamma": 0, "rho": -1},
    {"kind": "case_ii", "b": 2, "alpha": 0, "gamma": 0, "rho": 0},
    {"kind": "case_ii", "b": -2, "alpha": 0, "gamma": 0, "rho": 0, "eta": 1},
    {"kind": "case_i_rho", "b": 2, "alpha": 1, "gamma": 0, "rho": 0},
    {"kind": "case_i_rho", "b": 2, "alpha": 0, "gamma": 0, "rho": 1},
    {"kind": "case_i_rho", "b": -2, "alpha": 1, "gamma": 0, "rho": 1},
    {"kind": "case_i_rho", "b": -2, "alpha": -3, "gamma": 0, "rho": 1},
    {"kind": "case_i_rho", "b": 2, "alpha": 2, "gamma": -1, "rho": 2},
    {"kind": "case_i_rho", "b": 2, "alpha": 2, "gamma": math.inf, "rho": 2},
])
def test_limit_regime_validation(kwargs):
    with pytest.raises(RegimeError):
        LimitRegime(**kwargs)


def test_limit_regime_properties():
    regime = LimitRegime(kind="case_i_alpha_over_rho", b=4, alpha=6, gamma=0, rho=math.sqrt(3))
    assert regime.kind is RegimeKind.CASE_I_ALPHA_OVER_RHO
    assert regime.alpha == Fraction(6)
    assert regime.sigma == pytest.approx(3 * math.sqrt(3))
    assert regime.rho_effective == pytest.approx(2 * math.sqrt(3))
    assert regime.normalizer == 1.0

    dual = LimitRegime(kind="case_ii", b=2, alpha=0, gamma=0.5, rho=0, eta=math.sqrt(2))
    assert dual.sigma == 0.0
    assert dual.normalizer == 1.0
    assert dual.rho_effective == 0.0


def test_normalize_eta():
    eta, shift = normalize_eta(2, 4 * math.sqrt(2))
    assert eta == pytest.approx(math.sqrt(2))
    assert shift == 2
    eta, shift = normalize_eta(3, math.sqrt(2) / 9)
    assert eta == pytest.approx(math.sqrt(2))
    assert shift == -2
    assert normalize_eta(2, 1.5) == (1.5, 0)


def test_normalize_eta_invalid():
    with pytest.raises(RegimeError):
        normalize_eta(1, 1.0)
    with pytest.raises(RegimeError):
        normalize_eta(2, 0.0)


def test_dual_polar_c():
    assert dual_polar_c(4, 1) == 2
    assert dual_polar_c(5, 1) == 2
    assert dual_polar_c(4, 0) == 1
    assert dual_polar_c(5, 2) == 3
    with pytest.raises(RegimeError):
        dual_polar_c(4, 3)


def test_dual_polar_eta():
    assert dual_polar_eta(2, 1, D_EVEN) == pytest.approx(math.sqrt(2))
    assert dual_polar_eta(2, 1, D_ODD) == 2.0
    assert dual_polar_eta(2, 2, D_ODD) == pytest.approx(math.sqrt(2))
    assert dual_polar_eta(2, 0, D_EVEN) == 2.0
    with pytest.raises(RegimeError):
        dual_polar_eta(2, 1, N_EVEN)


def test_dual_polar_eta_matches_valencies():
    # eta = sqrt(k) / b^c in the limit; k = b^e [d] for C_d(b)
    for d in (40, 41):
        k = 2 * (2 ** d - 1)
        c = dual_polar_c(d, 1)
        assert math.sqrt(k) / 2 ** c == pytest.approx(dual_polar_eta(2, 1, D_ODD if d % 2 else D_EVEN), rel=1e-9)


def test_preset_properties():
    alternating = Preset("alternating", 2, parity=N_EVEN)
    assert alternating.b == 4
    assert alternating.alpha == 3
    assert alternating.forms_delta == Fraction(-1, 4)
    assert Preset("alternating", 2, parity=N_ODD).forms_delta == Fraction(1, 4)

    hermitian = Preset("hermitian_forms", 2, sign=-1)
    assert hermitian.b == -2
    assert hermitian.alpha == -3
    assert hermitian.rho == pytest.approx(math.sqrt(3))
    assert hermitian.kind is RegimeKind.CASE_I_ALPHA_OVER_RHO
    assert Preset("hermitian_forms", 2).kind is RegimeKind.CASE_I_RHO

    grassmann = Preset("grassmann", 2, delta=1)
    assert grassmann.rho == 2.0
    assert grassmann.derived_gamma() == 2.0
    assert grassmann.eta is None

    dual = Preset("dual_polar", 2, e=1, parity=D_EVEN)
    assert dual.kind is RegimeKind.CASE_II
    assert dual.eta == pytest.approx(math.sqrt(2))
    assert dual.regime().rho == 0.0


@pytest.mark.parametrize("kwargs", [
    {"name": "grassmann", "base": 1},
    {"name": "grassmann", "base": 2, "sign": 0},
    {"name": "half_dual_polar", "base": 2, "epsilon": 2},
    {"name": "alternating", "base": 2},
    {"name": "dual_polar", "base": 2, "parity": D_EVEN},
    {"name": "dual_polar", "base": 2, "e": 1},
    {"name": "dual_polar", "base": 2, "e": 5, "parity": D_EVEN},
])
def test_preset_validation(kwargs):
    with pytest.raises(RegimeError):
        Preset(**kwargs)


def test_grassmann_closed_form_first_atoms():
    mu = family_closed_form(Preset("grassmann", 2, delta=1), 0.0, j_max=2)
    assert mu.labels == (0, 1, 2)
    assert mu.atoms[0] == pytest.approx(-0.5)
    assert mu.masses[0] == pytest.approx(0.75)
    assert mu.atoms[1] == pytest.approx(1.25)
    assert mu.masses[1] == pytest.approx(15 / 64)
    assert mu.truncated


@pytest.mark.parametrize("preset", PRESETS, ids=PRESET_IDS)
def test_closed_form_total_mass(preset):
    for gamma in gammas(preset):
        mu = family_closed_form(preset, gamma)
        assert 1 - 1e-8 <= mu.total_mass <= 1 + 1e-12, f"total mass {mu.total_mass} at gamma = {gamma}"
        assert measure_moment(mu, 1) == pytest.approx(0.0, abs=1e-6)
        assert measure_moment(mu, 2) == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("preset", PRESETS, ids=PRESET_IDS)
def test_generic_measure_matches_closed_form(preset):
    for gamma in gammas(preset):
        generic = limit_measure(preset.regime(gamma), j_max=10)
        closed = family_closed_form(preset, gamma, j_max=10)
        common = sorted(set(generic.labels) & set(closed.labels))
        assert len(common) >= 3, f"{preset} keeps too few atoms"
        for label in common:
            atom, mass = generic.point(label)
            closed_atom, closed_mass = closed.point(label)
            assert atom == pytest.approx(closed_atom, rel=1e-10, abs=1e-10), f"atom {label} of {preset}"
            assert mass == pytest.approx(closed_mass, rel=1e-10, abs=1e-10), f"mass {label} of {preset}"


@pytest.mark.parametrize("preset", PRESETS, ids=PRESET_IDS)
def test_fock_moments_match_measure(preset):
    for gamma in gammas(preset):
        fc = limit_coefficients(preset.regime(gamma), 12)
        mu = family_closed_form(preset, gamma)
        for m in range(7):
            assert limit_moment(fc, m) == pytest.approx(measure_moment(mu, m), rel=1e-8, abs=1e-8), (
                f"moment {m} of {preset} at gamma = {gamma}"
            )


@pytest.mark.parametrize("r", [2, 3])
@pytest.mark.parametrize("sign, parity", [(1, D_ODD), (-1, D_EVEN)])
def test_second_dual_polar_is_unitary_dual_polar(r, sign, parity):
    second = family_closed_form(Preset("second_dual_polar", r, sign=sign), 0.0, j_max=20)
    dual = family_closed_form(Preset("dual_polar", r * r, e=Fraction(1, 2), parity=parity), 0.0)
    for atom, mass in zip(second.atoms, second.masses):
        if mass < 1e-12:
            continue
        index = min(range(len(dual.atoms)), key=lambda i: abs(dual.atoms[i] - atom))
        assert dual.atoms[index] == pytest.approx(atom, rel=1e-8, abs=1e-8)
        assert dual.masses[index] == pytest.approx(mass, rel=1e-8, abs=1e-8)


@pytest.mark.parametrize("e", [Fraction(1), Fraction(0), Fraction(2), Fraction(3, 2), Fraction(1, 2)])
@pytest.mark.parametrize("parity", [D_EVEN, D_ODD])
def test_dual_polar_eta_exponent(e, parity):
    kappa = DUAL_POLAR_ETA_EXPONENT[e][0 if parity == D_EVEN else 1]
    assert dual_polar_eta(4, e, parity) == pytest.approx(4 ** float(kappa), rel=1e-14)


@pytest.mark.parametrize("b", [2, 3, 4, 9])
@pytest.mark.parametrize("kappa", [Fraction(1, 2), Fraction(3, 4), Fraction(1), Fraction(5, 4)])
def test_theta_normalizer_is_triple_product(b, kappa):
    q = 1 / b
    product = (
        poch_inf(q, q).value
        * poch_inf(-(b ** -float(2 * kappa)), q).value
        * poch_inf(-(b ** float(2 * kappa - 1)), q).value
    )
    assert _theta_normalizer(b, kappa, 1e-16) == pytest.approx(product, rel=1e-12)


def test_dual_polar_closed_form_labels():
    # labels run over the window in the scale of the given eta = 2^(1/2)
    mu = family_closed_form(Preset("dual_polar", 2, e=1, parity=D_EVEN), 0.0, -3, 3)
    assert mu.labels == (-3, -2, -1, 0, 1, 2, 3)
    assert mu.atoms[3] == pytest.approx(math.sqrt(2) - 1 / math.sqrt(2))
    with pytest.raises(ValueError):
        family_closed_form(Preset("dual_polar", 2, e=1, parity=D_EVEN), 0.0, 3, 2)


def test_overflow_is_reported():
    preset = Preset("dual_polar", 2, e=1, parity=D_EVEN)
    with pytest.raises(NumericalOverflow):
        family_closed_form(preset, 1e300)
    with pytest.raises(NumericalOverflow):
        limit_measure(preset.regime(1e300))


@pytest.mark.parametrize("r", range(2, 8))
def test_lebesgue_identity(r):
    assert lebesgue_check(r, 1e-12)


def test_lebesgue_check_invalid():
    with pytest.raises(ValueError):
        lebesgue_check(1, 1e-12)
    with pytest.raises(ValueError):
        lebesgue_check(2, 0)


def test_measure_dispatch():
    case_i = Preset("grassmann", 2, delta=1).regime()
    over_rho = Preset("half_dual_polar", 2, epsilon=1).regime()
    rho_zero = Preset("dual_polar", 2, e=1, parity=D_EVEN).regime()
    assert limit_measure(case_i, j_max=3).labels == measure_case_rho_pos(case_i, j_max=3).labels
    assert limit_measure(over_rho, j_max=3).masses == measure_case_alpha_over_rho(over_rho, j_max=3).masses
    assert limit_measure(rho_zero, -2, 2).atoms == measure_case_rho_zero(rho_zero, -2, 2).atoms
    with pytest.raises(RegimeError):
        measure_case_rho_pos(over_rho)
    with pytest.raises(RegimeError):
        measure_case_rho_pos(rho_zero)
    with pytest.raises(RegimeError):
        measure_case_alpha_over_rho(case_i)
    with pytest.raises(RegimeError):
        measure_case_rho_zero(case_i)
    with pytest.raises(ValueError):
        measure_case_rho_zero(rho_zero, 3, 2)


def test_rho_zero_window_labels():
    # eta = 4 sqrt(2) is sqrt(2) two steps up, labels follow the given eta
    regime = LimitRegime(kind="case_ii", b=2, alpha=0, gamma=0, rho=0, eta=4 * math.sqrt(2))
    reference = LimitRegime(kind="case_ii", b=2, alpha=0, gamma=0, rho=0, eta=math.sqrt(2))
    mu = measure_case_rho_zero(regime, -4, 4)
    assert mu.labels[0] == -6
    assert mu.labels[-1] == 2
    assert mu.atoms == measure_case_rho_zero(reference, -4, 4).atoms


def test_classify_grassmann():
    fd = FamilyDescriptor(FamilyName.GRASSMANN, 2, delta=1)
    report = classify(tail_samples(fd, TRule.power(1), depth=40))
    assert not report.split
    regime = report.regime
    assert regime.kind is RegimeKind.CASE_I_RHO
    assert regime.b == 2
    assert regime.alpha == 2
    assert regime.gamma == pytest.approx(2.0, rel=1e-6)
    assert regime.rho == pytest.approx(2.0, rel=1e-6)
    assert report.regime_for(D_EVEN) is regime


def test_classify_dual_polar_splits_by_parity():
    fd = FamilyDescriptor(FamilyName.DUAL_POLAR, 2, kind=DualPolarType.C)
    report = classify(tail_samples(fd, TRule.zero(), depth=30))
    assert report.split
    assert set(report.regimes) == {D_EVEN, D_ODD}
    for parity, regime in report.regimes.items():
        assert regime.kind is RegimeKind.CASE_II
        assert regime.rho == 0.0
        assert regime.gamma == 0.0
        # eta is only fixed up to powers of b
        steps = math.log(regime.eta / dual_polar_eta(2, 1, parity), 2)
        assert steps == pytest.approx(round(steps), abs=1e-6), f"eta of {parity}"
    assert report.regimes[D_EVEN].eta == pytest.approx(math.sqrt(2), rel=1e-6)
    assert report.diagnostics.tags[0] == D_EVEN


def test_classify_with_tags():
    fd = FamilyDescriptor(FamilyName.DUAL_POLAR, 2, kind=DualPolarType.C)
    samples = tail_samples(fd, TRule.zero(), D_EVEN, depth=30)
    report = classify(samples, [D_EVEN] * len(samples))
    assert list(report.regimes) == [D_EVEN]
    assert not report.split
    with pytest.raises(RegimeError):
        report.regime_for(D_ODD)


def test_classify_invalid():
    with pytest.raises(RegimeError):
        classify([])
    fd = FamilyDescriptor(FamilyName.GRASSMANN, 2, delta=1)
    samples = tail_samples(fd, TRule.power(1), depth=20)
    with pytest.raises(RegimeError):
        classify(samples, [D_EVEN])
