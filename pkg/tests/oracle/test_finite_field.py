import numpy as np
import pytest

from classical_drg.exceptions import OracleError, SizeBoundExceeded
from classical_drg.oracle.finite_field import (
    all_matrices,
    check_field,
    encode,
    gaussian_binomial,
    rank_mod_p,
    rref_subspaces,
)


@pytest.mark.parametrize("n, d, q, expected", [
    (4, 2, 2, 35),
    (5, 2, 2, 155),
    (4, 2, 3, 130),
    (6, 3, 2, 1395),
    (3, 0, 2, 1),
    (3, 4, 2, 0),
])
def test_gaussian_binomial(n, d, q, expected):
    assert gaussian_binomial(n, d, q) == expected


@pytest.mark.parametrize("matrix, p, expected", [
    ([[1, 1], [1, 1]], 2, 1),
    ([[1, 0], [0, 1]], 2, 2),
    ([[1, 2], [2, 1]], 3, 1),
    ([[1, 2], [2, 1]], 2, 2),
    ([[0, 0, 0]], 3, 0),
    ([[1, 0, 1], [0, 1, 1], [1, 1, 0]], 2, 2),
])
def test_rank_mod_p(matrix, p, expected):
    assert rank_mod_p(np.array(matrix), p) == expected


def test_rref_subspaces():
    subspaces = rref_subspaces(2, 4, 2)
    assert subspaces.shape == (35, 2, 4)
    assert all(rank_mod_p(basis, 2) == 2 for basis in subspaces)
    assert len({basis.tobytes() for basis in subspaces}) == 35, "a subspace is listed twice"


def test_rref_subspaces_size_bound():
    with pytest.raises(SizeBoundExceeded):
        rref_subspaces(2, 4, 2, max_count=10)


def test_all_matrices():
    matrices = all_matrices(2, 1, 2)
    assert matrices.tolist() == [[0, 0], [0, 1], [1, 0], [1, 1]]
    assert encode(matrices, 2).tolist() == [0, 1, 2, 3]
    assert all_matrices(3, 2, 2).shape == (81, 4)
    with pytest.raises(SizeBoundExceeded):
        all_matrices(3, 2, 2, max_count=80)


def test_encode_reduces_mod_q():
    assert encode(np.array([[2, 3]]), 3).tolist() == [6]


@pytest.mark.parametrize("q", [4, 5, 1])
def test_check_field(q):
    with pytest.raises(OracleError):
        check_field(q)
