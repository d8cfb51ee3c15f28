"""
Spectra, Gibbs moments and quantum component moments read directly off |X| x |X| matrices.
"""
import logging
import typing

import numpy as np

from classical_drg.exceptions import DegenerateVariance, OracleError
from classical_drg.fock import EpsilonWord, Letter
from classical_drg.oracle.eigen import cluster_eigenvalues, symmetric_eigensolve
from classical_drg.oracle.graphs import GraphInstance
from classical_drg.settings import Config, get_global_config
from classical_drg.types import RationalLike
from classical_drg.utils import to_fraction

__all__ = (
    "kt_matrix",
    "empirical_spectrum",
    "empirical_gibbs",
    "empirical_kt_min_eigenvalue",
    "QuantumComponents",
    "empirical_quantum_components",
    "random_base_vertices",
)

logger = logging.getLogger(__name__)


def kt_matrix(g: GraphInstance, t: RationalLike) -> np.ndarray:
    """K_t = sum_i t^i A_i, entrywise t^dist(x, y)"""
    powers = np.array([float(to_fraction(t) ** i) for i in range(g.diameter + 1)])
    return powers[g.distance]


def empirical_spectrum(
    g: GraphInstance,
    conf: typing.Optional[Config] = None,
) -> typing.Tuple[typing.Tuple[float, ...], typing.Tuple[int, ...]]:
    conf = conf or get_global_config()
    w, _ = symmetric_eigensolve(g.adjacency, conf)
    clusters = cluster_eigenvalues(w, conf.cluster_tol)
    logger.debug("%s spectrum: %s", g.name, clusters)
    return tuple(value for value, _ in clusters), tuple(mult for _, mult in clusters)


def _normalization(g: GraphInstance, kt: np.ndarray) -> typing.Tuple[float, float]:
    """(mean, standard deviation) of A in the state tr(K_t .) / |X|"""
    adjacency = g.adjacency.astype(np.float64)
    mean = float(np.sum(kt * adjacency)) / g.n_vertices
    second = float(np.sum(kt * (adjacency @ adjacency))) / g.n_vertices
    variance = second - mean * mean
    if variance <= 0:
        raise DegenerateVariance(f"{g.name}: empirical variance {variance} is not positive")
    return mean, variance ** 0.5


def empirical_gibbs(g: GraphInstance, t: RationalLike, m_max: int) -> typing.List[float]:
    """phi_t of the powers 0..m_max of (A - tk) / Sigma, as normalized traces"""
    if m_max < 0:
        raise ValueError("`m_max` has to be a nonnegative integer")
    kt = kt_matrix(g, t)
    mean, sigma = _normalization(g, kt)
    normalized = (g.adjacency.astype(np.float64) - mean * np.eye(g.n_vertices)) / sigma

    moments = []
    power = np.eye(g.n_vertices)
    for _ in range(m_max + 1):
        # K_t and every power are symmetric, so tr(K_t B) is the entrywise sum
        moments.append(float(np.sum(kt * power)) / g.n_vertices)
        power = power @ normalized
    return moments


def empirical_kt_min_eigenvalue(g: GraphInstance, t: RationalLike, conf: typing.Optional[Config] = None) -> float:
    w, _ = symmetric_eigensolve(kt_matrix(g, t), conf)
    return float(w[-1])


class QuantumComponents:
    """
    Normalized components of A split by distance to `base_vertex`, in the state phi_t.
    On the primary module the state is sum_x t^dist(o, x) <e_x, B e_o>.
    """

    def __init__(self, g: GraphInstance, base_vertex: int, t: RationalLike):
        if not 0 <= base_vertex < g.n_vertices:
            raise OracleError(f"{g.name} has no vertex {base_vertex}")
        kt = kt_matrix(g, t)
        mean, sigma = _normalization(g, kt)
        self.base_vertex = base_vertex
        self.weights = kt[base_vertex]

        level = g.distance[base_vertex]
        adjacency = g.adjacency.astype(np.float64)
        # component[x, y] keeps the edge y -> x by how it moves the distance to the base vertex
        step = level[:, None] - level[None, :]
        self.components = {
            Letter.PLUS: np.where(step == 1, adjacency, 0.0) / sigma,
            Letter.MINUS: np.where(step == -1, adjacency, 0.0) / sigma,
            Letter.CIRCLE: (np.where(step == 0, adjacency, 0.0) - mean * np.eye(g.n_vertices)) / sigma,
        }

    def __call__(self, word: EpsilonWord) -> float:
        """phi_t(B^{e_m} ... B^{e_1})"""
        vector = np.zeros(self.weights.shape[0])
        vector[self.base_vertex] = 1.0
        for letter in word.letters:
            vector = self.components[letter] @ vector
        return float(self.weights @ vector)


def empirical_quantum_components(
    g: GraphInstance,
    base_vertex: int,
    t: RationalLike,
    word: EpsilonWord,
) -> float:
    return QuantumComponents(g, base_vertex, t)(word)


def random_base_vertices(g: GraphInstance, count: int, seed: int) -> typing.List[int]:
    rng = np.random.default_rng(seed)
    return [int(vertex) for vertex in rng.choice(g.n_vertices, size=min(count, g.n_vertices), replace=False)]
