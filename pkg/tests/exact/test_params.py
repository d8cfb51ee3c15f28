from fractions import Fraction

import pytest

from classical_drg.exceptions import InfeasibleParameters, ZeroDenominator
from classical_drg.params import (
    ClassicalParams,
    c_index,
    distance_values_closed_form,
    feasibility_check,
    feasibility_notes,
    intersection_array,
    multiplicity_from_orthogonality,
    multiplicity_product_form,
    sigma_ratio,
    spectral_table,
    u_value,
    valencies_closed_form,
    vertex_count_closed_form,
)
from tests.utils import build_cp, fractions


def nondegenerate(ia) -> bool:
    d = ia.diameter
    return all(ia.b_seq[i] != 0 for i in range(d)) and all(ia.c_seq[i] != 0 for i in range(1, d + 1))


@pytest.mark.parametrize("name", ["grassmann_2_4_2", "bilinear_2_2_2"])
def test_intersection_array(instances, name):
    data = instances[name]
    ia = intersection_array(build_cp(data))
    assert ia.b_seq == fractions(data["b_seq"])
    assert ia.c_seq == fractions(data["c_seq"])
    assert ia.a_seq == fractions(data["a_seq"])
    assert ia.k_seq == fractions(data["k_seq"])
    assert ia.k == ia.b_seq[0]
    assert ia.vertex_count == Fraction(data["vertex_count"])
    assert ia.diameter == data["cp"][0]


@pytest.mark.parametrize("name", ["grassmann_2_4_2", "bilinear_2_2_2"])
def test_spectral_table(instances, name):
    data = instances[name]
    st = spectral_table(build_cp(data))
    assert st.theta == fractions(data["theta"])
    assert st.mult == fractions(data["mult"])
    assert st.vertex_count == Fraction(data["vertex_count"])
    assert st.v_matrix[0] == (1,) * len(st.theta)
    assert st.v_matrix[2] == fractions(data["v_row_2"])
    assert st.mult_fallback == ()
    assert st.v_closed_form_checked


@pytest.mark.parametrize("name", ["grassmann_2_4_2", "bilinear_2_2_2"])
def test_multiplicity_from_orthogonality(instances, name):
    st = spectral_table(build_cp(instances[name]))
    for j in range(len(st.theta)):
        column = [row[j] for row in st.v_matrix]
        assert multiplicity_from_orthogonality(st.k_seq, column, st.vertex_count) == st.mult[j]


def test_multiplicity_from_orthogonality_degenerate():
    with pytest.raises(ZeroDenominator):
        multiplicity_from_orthogonality(fractions([1, 0]), fractions([1, 1]), Fraction(2))
    with pytest.raises(ZeroDenominator):
        multiplicity_from_orthogonality(fractions([1, 3]), fractions([0, 0]), Fraction(4))


@pytest.mark.parametrize("name", ["grassmann_2_4_2", "bilinear_2_2_2"])
def test_sigma_ratio_and_c_index(instances, name):
    data = instances[name]
    cp = build_cp(data)
    assert sigma_ratio(cp) == pytest.approx(data["sigma_ratio"], rel=1e-15)
    assert c_index(cp) == data["c_index"]


def test_complete_graph():
    st = spectral_table(ClassicalParams.build(1, 2, 0, 5))
    assert st.theta == (5, -1)
    assert st.mult == (1, 5)
    assert st.vertex_count == 6


def test_hermitian_forms_negative_base():
    cp = ClassicalParams.build(2, -2, -3, -5)
    ia = intersection_array(cp)
    assert ia.b_seq == (5, 4, 0)
    assert ia.c_seq == (0, 1, 2)
    assert ia.vertex_count == 16
    assert feasibility_check(cp) == []
    assert feasibility_notes(cp) == ["d = 2 is outside the classical uniqueness range d >= 3"]


def test_classical_params_build():
    cp = ClassicalParams.build(2, 2, "1/2", "6")
    assert cp.alpha == Fraction(1, 2)
    assert cp.big_d == Fraction(1, 2) - 6 + 12
    assert cp.big_e == Fraction(-1, 2)
    assert cp.as_tuple() == (2, 2, Fraction(1, 2), Fraction(6))


@pytest.mark.parametrize("d, b", [(0, 2), (-1, 2), (2, 0), (2, -1)])
def test_classical_params_rejected(d, b):
    with pytest.raises(InfeasibleParameters):
        ClassicalParams.build(d, b, 1, 1)


def test_classical_params_rejects_floats():
    with pytest.raises(TypeError):
        ClassicalParams.build(2, 2, 0.5, 6)


def test_b_equal_one_tables():
    # Johnson-type parameters J(7, 3)
    cp = ClassicalParams.build(3, 1, 1, 4)
    ia = intersection_array(cp)
    st = spectral_table(cp, ia)
    assert ia.vertex_count == 35
    assert sum(st.mult) == st.vertex_count
    assert st.theta[0] == ia.k == 12


def test_valencies_closed_form(grassmann_cp):
    assert valencies_closed_form(grassmann_cp) == (1, 18, 16)


def test_closed_forms(grassmann_cp, grassmann_st):
    assert vertex_count_closed_form(grassmann_cp) == 35
    assert [multiplicity_product_form(grassmann_cp, i) for i in range(3)] == [1, 14, 20]
    for i in range(3):
        for j in range(3):
            assert distance_values_closed_form(grassmann_cp, i, j) == grassmann_st.v_matrix[i][j]


def test_u_value(grassmann_st):
    assert u_value(grassmann_st, 1, 1) == Fraction(3, 18)
    assert u_value(grassmann_st, 2, 2) == Fraction(2, 16)
    assert u_value(grassmann_st, 0, 2) == 1


@pytest.mark.parametrize("params", [(2, 2, "2", "6"), (3, 2, "2", "30"), (3, -2, "-3", "7")])
def test_feasibility_of_real_graphs(params):
    assert feasibility_check(params) == []


def test_feasibility_notes(grassmann_cp, grassmann_st):
    assert feasibility_check(grassmann_cp) == [], "J_2(4,2) reported as infeasible"
    assert feasibility_notes(grassmann_cp, grassmann_st) == ["d = 2 is outside the classical uniqueness range d >= 3"]
    assert feasibility_notes(ClassicalParams.build(3, 2, 2, 30)) == []


def test_feasibility_violations():
    report = feasibility_check((2, 2, "1/2", "6"))
    assert any("not a nonnegative integer" in line for line in report)
    assert feasibility_check((2, -1, 1, 1))[0].startswith("rejected base")


def test_random_tables_identities(random_parameter_sets):
    checked = 0
    for cp, ia, st in random_parameter_sets:
        d = cp.d
        assert st.theta[0] == ia.k
        assert sum(st.mult) == st.vertex_count
        for i in range(d):
            assert ia.k_seq[i] * ia.b_seq[i] == ia.k_seq[i + 1] * ia.c_seq[i + 1]
        for j in range(1, d + 1):
            assert sum(st.v_matrix[i][j] for i in range(d + 1)) == 0, f"column {j} of {cp}"
        for i in range(d + 1):
            trace = sum(st.mult[j] * st.v_matrix[i][j] for j in range(d + 1))
            assert trace == (st.vertex_count if i == 0 else 0), f"row {i} of {cp}"
        if not nondegenerate(ia):
            continue
        checked += 1
        for i in range(d + 1):
            for h in range(d + 1):
                inner = sum(st.mult[j] * st.v_matrix[i][j] * st.v_matrix[h][j] for j in range(d + 1))
                assert inner == (st.vertex_count * ia.k_seq[i] if i == h else 0), f"rows {i}, {h} of {cp}"
        for j in range(d + 1):
            product = multiplicity_product_form(cp, j)
            if product is not None:
                assert product == st.mult[j], f"m_{j} product form of {cp}"
    assert checked > 10, "too few nondegenerate parameter sets drawn"
