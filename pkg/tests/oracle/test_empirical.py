from fractions import Fraction

import numpy as np
import pytest

from classical_drg.exceptions import DegenerateVariance, OracleError
from classical_drg.fock import EpsilonWord, all_words, finite_coefficients, mixed_moment
from classical_drg.gibbs import gibbs_distribution, gibbs_point, measure_moment
from classical_drg.oracle.empirical import (
    QuantumComponents,
    empirical_gibbs,
    empirical_kt_min_eigenvalue,
    empirical_quantum_components,
    empirical_spectrum,
    kt_matrix,
    random_base_vertices,
)
from classical_drg.params import spectral_table
from tests.utils import fractions


def test_kt_matrix(grassmann_graph):
    assert np.array_equal(kt_matrix(grassmann_graph, 0), np.eye(35))
    assert np.array_equal(kt_matrix(grassmann_graph, 1), np.ones((35, 35)))
    kt = kt_matrix(grassmann_graph, Fraction(1, 2))
    assert set(np.unique(kt)) == {1.0, 0.5, 0.25}


def test_empirical_spectrum(grassmann_graph, grassmann_st):
    theta, mult = empirical_spectrum(grassmann_graph)
    assert list(theta) == pytest.approx([float(value) for value in grassmann_st.theta], abs=1e-9)
    assert mult == (1, 14, 20)


def test_empirical_spectrum_bilinear(bilinear_graph, instances):
    theta, mult = empirical_spectrum(bilinear_graph)
    data = instances["bilinear_2_2_2"]
    assert list(theta) == pytest.approx([float(value) for value in fractions(data["theta"])], abs=1e-9)
    assert mult == tuple(int(value) for value in fractions(data["mult"]))


@pytest.mark.parametrize("t", [Fraction(0), Fraction(1, 2), Fraction(1, 8)])
def test_empirical_gibbs_moments(grassmann_graph, grassmann_cp, grassmann_st, t):
    mu = gibbs_distribution(grassmann_cp, grassmann_st, t)
    moments = empirical_gibbs(grassmann_graph, t, 6)
    assert len(moments) == 7
    assert moments[0] == pytest.approx(1.0)
    for m, value in enumerate(moments):
        assert value == pytest.approx(measure_moment(mu, m), rel=1e-9, abs=1e-9), f"moment {m} at t = {t}"


def test_empirical_gibbs_invalid(grassmann_graph):
    with pytest.raises(ValueError):
        empirical_gibbs(grassmann_graph, Fraction(1, 2), -1)
    with pytest.raises(DegenerateVariance):
        empirical_gibbs(grassmann_graph, 1, 2)


def test_kt_min_eigenvalue(grassmann_graph, grassmann_cp, grassmann_st):
    assert empirical_kt_min_eigenvalue(grassmann_graph, Fraction(1, 2)) >= -1e-8
    gp = gibbs_point(grassmann_cp, grassmann_st, Fraction(3, 4))
    assert empirical_kt_min_eigenvalue(grassmann_graph, gp.t) == pytest.approx(float(min(gp.kt_spectrum)), abs=1e-9)


@pytest.mark.parametrize("t", [Fraction(0), Fraction(1, 2)])
def test_quantum_components_match_fock(grassmann_graph, grassmann_cp, grassmann_st, t):
    fc = finite_coefficients(grassmann_cp, grassmann_st, t)
    for vertex in (0, 17, 34):
        components = QuantumComponents(grassmann_graph, vertex, t)
        for word in all_words(4):
            assert components(word) == pytest.approx(mixed_moment(fc, word), abs=1e-9), f"{word} at vertex {vertex}"


def test_quantum_components_bilinear(bilinear_graph, bilinear_cp):
    t = Fraction(1, 4)
    fc = finite_coefficients(bilinear_cp, spectral_table(bilinear_cp), t)
    word = EpsilonWord.parse("+o-")
    assert empirical_quantum_components(bilinear_graph, 5, t, word) == pytest.approx(mixed_moment(fc, word), abs=1e-9)


def test_quantum_components_invalid_vertex(grassmann_graph):
    with pytest.raises(OracleError):
        QuantumComponents(grassmann_graph, 35, Fraction(1, 2))


def test_random_base_vertices(grassmann_graph, bilinear_graph):
    vertices = random_base_vertices(grassmann_graph, 3, seed=0)
    assert len(set(vertices)) == 3
    assert all(0 <= vertex < 35 for vertex in vertices)
    assert random_base_vertices(grassmann_graph, 3, seed=0) == vertices
    assert sorted(random_base_vertices(bilinear_graph, 100, seed=1)) == list(range(16))
