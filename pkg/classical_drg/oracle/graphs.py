"""
Brute-force Grassmann and bilinear forms graphs over small prime fields, with their
distance matrices and empirically read intersection numbers.
"""
import logging
import typing
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx
import numpy as np

from classical_drg.exceptions import NotDistanceRegular, OracleError, SizeBoundExceeded
from classical_drg.oracle.finite_field import (
    all_matrices,
    check_field,
    encode,
    gaussian_binomial,
    rank_mod_p,
    rref_subspaces,
)
from classical_drg.params import IntersectionArray
from classical_drg.settings import Config, get_global_config

__all__ = (
    "GraphInstance",
    "build_grassmann",
    "build_bilinear",
    "distance_matrix",
    "to_networkx",
    "dump_edgelist",
    "empirical_intersection",
    "NX_CROSS_CHECK_SIZE",
)

logger = logging.getLogger(__name__)

NX_CROSS_CHECK_SIZE = 200


@dataclass(frozen=True)
class GraphInstance:
    name: str
    n_vertices: int
    adjacency: np.ndarray
    distance: np.ndarray
    diameter: int

    def __post_init__(self):
        if self.adjacency.shape != (self.n_vertices, self.n_vertices):
            raise OracleError(f"{self.name}: adjacency shape {self.adjacency.shape} does not fit {self.n_vertices}")
        if not np.array_equal(self.adjacency, self.adjacency.T):
            raise OracleError(f"{self.name}: adjacency is not symmetric")
        if np.any(np.diag(self.adjacency)):
            raise OracleError(f"{self.name}: graph has loops")

    @property
    def degree(self) -> int:
        return int(self.adjacency[0].sum())


def distance_matrix(adjacency: np.ndarray) -> np.ndarray:
    """Level-synchronous BFS from every vertex at once, -1 marks unreachable pairs"""
    n = adjacency.shape[0]
    step = adjacency.astype(np.float64)
    distance = np.full((n, n), -1, dtype=np.int64)
    np.fill_diagonal(distance, 0)
    reached = np.eye(n, dtype=bool)
    frontier = reached.copy()
    level = 0
    while frontier.any():
        level += 1
        frontier = ((frontier.astype(np.float64) @ step) > 0) & ~reached
        distance[frontier] = level
        reached |= frontier
    return distance


def _instance(name: str, adjacency: np.ndarray) -> GraphInstance:
    distance = distance_matrix(adjacency)
    if np.any(distance < 0):
        raise NotDistanceRegular(f"{name} is not connected")
    instance = GraphInstance(
        name=name,
        n_vertices=adjacency.shape[0],
        adjacency=adjacency,
        distance=distance,
        diameter=int(distance.max()),
    )
    logger.info("built %s: %d vertices, degree %d, diameter %d", name, instance.n_vertices,
                instance.degree, instance.diameter)
    return instance


def build_grassmann(q: int, n: int, d: int, conf: typing.Optional[Config] = None) -> GraphInstance:
    """
    d-subspaces of F_q^n, adjacent when they meet in dimension d - 1.
    Each subspace is stored as the set of its q^d vectors, so the incidence product
    counts q^dim(x & y) common vectors.
    """
    conf = conf or get_global_config()
    check_field(q)
    if not 1 <= d <= n:
        raise OracleError(f"need 1 <= d <= n, got d = {d}, n = {n}")
    count = gaussian_binomial(n, d, q)
    if count > conf.max_vertices:
        raise SizeBoundExceeded(f"J_{q}({n},{d}) has {count} vertices, the bound is {conf.max_vertices}")

    subspaces = rref_subspaces(q, n, d)
    coefficients = all_matrices(q, 1, d)
    incidence = np.zeros((count, q ** n), dtype=np.float64)
    for index, basis in enumerate(subspaces):
        incidence[index, encode(coefficients @ basis, q)] = 1.0
    common = np.rint(incidence @ incidence.T).astype(np.int64)
    adjacency = (common == q ** (d - 1)).astype(np.uint8)
    return _instance(f"J_{q}({n},{d})", adjacency)


def build_bilinear(q: int, d: int, e: int, conf: typing.Optional[Config] = None) -> GraphInstance:
    """d x e matrices over F_q, adjacent when their difference has rank one"""
    conf = conf or get_global_config()
    check_field(q)
    if not 1 <= d <= e:
        raise OracleError(f"need 1 <= d <= e, got d = {d}, e = {e}")
    count = q ** (d * e)
    if count > conf.max_vertices:
        raise SizeBoundExceeded(f"Bil_{q}({d}x{e}) has {count} vertices, the bound is {conf.max_vertices}")

    matrices = all_matrices(q, d, e)
    rank_one = [matrix for matrix in matrices if rank_mod_p(matrix.reshape(d, e), q) == 1]
    adjacency = np.zeros((count, count), dtype=np.uint8)
    rows = np.arange(count)
    # all_matrices lists matrices in base-q counting order, so the code is the vertex index
    for difference in rank_one:
        adjacency[rows, encode(matrices + difference, q)] = 1
    return _instance(f"Bil_{q}({d}x{e})", adjacency)


def to_networkx(g: GraphInstance) -> nx.Graph:
    graph = nx.from_numpy_array(g.adjacency)
    graph.name = g.name
    return graph


def dump_edgelist(g: GraphInstance, path) -> None:
    nx.write_edgelist(to_networkx(g), path, data=False)


def _constant(values: np.ndarray, label: str, g: GraphInstance) -> int:
    if values.size == 0:
        raise NotDistanceRegular(f"{g.name}: no pairs to read {label} from")
    low, high = int(values.min()), int(values.max())
    if low != high:
        raise NotDistanceRegular(f"{g.name}: {label} varies between {low} and {high}")
    return low


def empirical_intersection(g: GraphInstance) -> IntersectionArray:
    """Intersection numbers counted over all vertex pairs, each of which has to be constant"""
    d = g.diameter
    step = g.adjacency.astype(np.float64)
    shells = [(g.distance == i) for i in range(d + 1)]
    # (A_i A)[x, y] counts neighbours z of y at distance i from x
    counts = [np.rint(shell.astype(np.float64) @ step).astype(np.int64) for shell in shells]

    b_seq, c_seq, a_seq = [], [Fraction(0)], []
    for i in range(d + 1):
        a_seq.append(Fraction(_constant(counts[i][shells[i]], f"a_{i}", g)))
        if i < d:
            b_seq.append(Fraction(_constant(counts[i + 1][shells[i]], f"b_{i}", g)))
        if i > 0:
            c_seq.append(Fraction(_constant(counts[i - 1][shells[i]], f"c_{i}", g)))
    b_seq.append(Fraction(0))
    k_seq = tuple(Fraction(_constant(shell.sum(axis=1), f"k_{i}", g)) for i, shell in enumerate(shells))

    if g.n_vertices <= NX_CROSS_CHECK_SIZE:
        _networkx_cross_check(g, b_seq, c_seq)
    return IntersectionArray(
        b_seq=tuple(b_seq),
        c_seq=tuple(c_seq),
        a_seq=tuple(a_seq),
        k_seq=k_seq,
        k=b_seq[0],
    )


def _networkx_cross_check(g: GraphInstance, b_seq, c_seq) -> None:
    graph = to_networkx(g)
    if not nx.is_connected(graph):
        raise NotDistanceRegular(f"{g.name} is not connected")
    try:
        nx_b, nx_c = nx.intersection_array(graph)
    except nx.NetworkXError as e:
        raise NotDistanceRegular(f"{g.name}: {e}") from e
    if list(nx_b) != [int(b) for b in b_seq[:-1]] or list(nx_c) != [int(c) for c in c_seq[1:]]:
        raise OracleError(f"{g.name}: networkx reads {{{nx_b}; {nx_c}}}, counting gives {{{b_seq}; {c_seq}}}")
