import logging
import typing

import numpy as np

from classical_drg.exceptions import ClusterAmbiguity, EigenResidualError, OracleError
from classical_drg.settings import Config, get_global_config

__all__ = (
    "jacobi_eigh",
    "symmetric_eigensolve",
    "check_residuals",
    "cluster_eigenvalues",
    "MAX_SWEEPS",
)

logger = logging.getLogger(__name__)

MAX_SWEEPS = 60
OFF_DIAGONAL_TOL = 1e-12


def jacobi_eigh(matrix: np.ndarray, max_sweeps: int = MAX_SWEEPS) -> typing.Tuple[np.ndarray, np.ndarray]:
    """
    Cyclic Jacobi rotations on a real symmetric matrix.
    Returns (w, V) with eigenvalues in descending order and eigenvectors as columns of V.
    """
    a = np.array(matrix, dtype=np.float64)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n:
        raise OracleError("Jacobi rotations need a square matrix")
    v = np.eye(n)
    scale = max(np.linalg.norm(a), 1.0)

    for sweep in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= OFF_DIAGONAL_TOL * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= OFF_DIAGONAL_TOL * scale / n:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c

                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0

                vec_p, vec_q = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q
    else:
        # residuals are checked by the caller
        logger.warning("Jacobi rotations stopped after %d sweeps above the off-diagonal tolerance", max_sweeps)

    logger.debug("Jacobi rotations converged after %d sweeps on a %d x %d matrix", sweep, n, n)
    w = np.diag(a).copy()
    order = np.argsort(w)[::-1]
    return w[order], v[:, order]


def check_residuals(matrix: np.ndarray, w: np.ndarray, v: np.ndarray, tol: float) -> float:
    """Largest ||A v - lambda v|| / ||v|| over all eigenpairs, raises above `tol`"""
    residual = matrix @ v - v * w
    worst = float(np.max(np.linalg.norm(residual, axis=0) / np.linalg.norm(v, axis=0)))
    if worst > tol:
        raise EigenResidualError(f"eigenpair residual {worst:.3e} exceeds {tol:.1e}")
    return worst


def symmetric_eigensolve(
    matrix: np.ndarray,
    conf: typing.Optional[Config] = None,
) -> typing.Tuple[np.ndarray, np.ndarray]:
    """Jacobi rotations for small matrices, LAPACK above `jacobi_max_size`; descending order either way"""
    conf = conf or get_global_config()
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.shape[0] <= conf.jacobi_max_size:
        w, v = jacobi_eigh(matrix)
    else:
        w, v = np.linalg.eigh(matrix)
        w, v = w[::-1], v[:, ::-1]
    check_residuals(matrix, w, v, conf.residual_tol)
    return w, v


def cluster_eigenvalues(w: typing.Sequence[float], tol: float) -> typing.List[typing.Tuple[float, int]]:
    """
    (mean value, multiplicity) per cluster, descending. Neighbours closer than `tol`
    share a cluster; a gap between `tol` and 10 `tol` cannot be told apart from noise.
    """
    values = sorted((float(x) for x in w), reverse=True)
    if not values:
        return []
    clusters = [[values[0]]]
    for previous, value in zip(values, values[1:]):
        gap = previous - value
        if gap <= tol:
            clusters[-1].append(value)
        elif gap < 10 * tol:
            raise ClusterAmbiguity(f"eigenvalues {previous!r} and {value!r} are {gap:.3e} apart")
        else:
            clusters.append([value])
    return [(float(np.mean(cluster)), len(cluster)) for cluster in clusters]
