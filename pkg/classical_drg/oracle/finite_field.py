"""Linear algebra over a prime field, enough to enumerate subspaces and matrices."""
import itertools
import typing
from fractions import Fraction

import numpy as np

from classical_drg.exceptions import OracleError, SizeBoundExceeded
from classical_drg.qseries import gauss_bracket

__all__ = (
    "PRIMES",
    "check_field",
    "gaussian_binomial",
    "rank_mod_p",
    "rref_subspaces",
    "all_matrices",
    "encode",
)

PRIMES = (2, 3)


def check_field(q: int) -> None:
    if q not in PRIMES:
        raise OracleError(f"brute-force constructions support the prime fields {PRIMES}, got q = {q}")


def gaussian_binomial(n: int, d: int, q: int) -> int:
    """Number of d-dimensional subspaces of F_q^n"""
    if not 0 <= d <= n:
        return 0
    value = Fraction(1)
    for i in range(d):
        value *= gauss_bracket(n - i, q) / gauss_bracket(i + 1, q)
    return int(value)


def rank_mod_p(matrix: np.ndarray, p: int) -> int:
    """Rank over F_p by Gaussian elimination"""
    work = np.array(matrix, dtype=np.int64) % p
    rows, cols = work.shape
    rank = 0
    for col in range(cols):
        if rank == rows:
            break
        nonzero = np.nonzero(work[rank:, col])[0]
        if nonzero.size == 0:
            continue
        pivot = rank + nonzero[0]
        if pivot != rank:
            work[[rank, pivot]] = work[[pivot, rank]]
        inverse = pow(int(work[rank, col]), p - 2, p)
        work[rank] = (work[rank] * inverse) % p
        factors = work[:, col].copy()
        factors[rank] = 0
        work = (work - np.outer(factors, work[rank])) % p
        rank += 1
    return rank


def rref_subspaces(q: int, n: int, d: int, max_count: typing.Optional[int] = None) -> np.ndarray:
    """
    Every d-dimensional subspace of F_q^n as its reduced row echelon d x n matrix,
    stacked into an array of shape (count, d, n).
    """
    check_field(q)
    count = gaussian_binomial(n, d, q)
    if max_count is not None and count > max_count:
        raise SizeBoundExceeded(f"{count} subspaces exceed the bound {max_count}")

    subspaces = []
    for pivots in itertools.combinations(range(n), d):
        free = [(row, col) for row, pivot in enumerate(pivots) for col in range(pivot + 1, n) if col not in pivots]
        for values in itertools.product(range(q), repeat=len(free)):
            matrix = np.zeros((d, n), dtype=np.int64)
            for row, pivot in enumerate(pivots):
                matrix[row, pivot] = 1
            for (row, col), value in zip(free, values):
                matrix[row, col] = value
            subspaces.append(matrix)
    if len(subspaces) != count:
        raise OracleError(f"enumerated {len(subspaces)} subspaces, expected {count}")
    return np.stack(subspaces)


def all_matrices(q: int, rows: int, cols: int, max_count: typing.Optional[int] = None) -> np.ndarray:
    """Every rows x cols matrix over F_q, flattened row-major, in base-q counting order"""
    check_field(q)
    count = q ** (rows * cols)
    if max_count is not None and count > max_count:
        raise SizeBoundExceeded(f"{count} matrices exceed the bound {max_count}")
    return np.array(list(itertools.product(range(q), repeat=rows * cols)), dtype=np.int64)


def encode(vectors: np.ndarray, q: int) -> np.ndarray:
    """Integer code of each row read as base-q digits, most significant first"""
    width = vectors.shape[-1]
    weights = q ** np.arange(width - 1, -1, -1, dtype=np.int64)
    return vectors % q @ weights
