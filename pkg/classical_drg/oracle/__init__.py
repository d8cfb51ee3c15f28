"""
Independent brute-force ground truth: small Grassmann and bilinear forms graphs built
explicitly, with distances, spectra and states read off their matrices.
"""
from classical_drg.oracle.battery import BATTERY, OracleCase, OracleReport, run_battery, run_case
from classical_drg.oracle.eigen import cluster_eigenvalues, jacobi_eigh, symmetric_eigensolve
from classical_drg.oracle.empirical import (
    QuantumComponents,
    empirical_gibbs,
    empirical_kt_min_eigenvalue,
    empirical_quantum_components,
    empirical_spectrum,
    kt_matrix,
)
from classical_drg.oracle.graphs import (
    GraphInstance,
    build_bilinear,
    build_grassmann,
    dump_edgelist,
    empirical_intersection,
    to_networkx,
)

__all__ = (
    "BATTERY",
    "OracleCase",
    "OracleReport",
    "run_battery",
    "run_case",
    "cluster_eigenvalues",
    "jacobi_eigh",
    "symmetric_eigensolve",
    "QuantumComponents",
    "empirical_gibbs",
    "empirical_kt_min_eigenvalue",
    "empirical_quantum_components",
    "empirical_spectrum",
    "kt_matrix",
    "GraphInstance",
    "build_bilinear",
    "build_grassmann",
    "dump_edgelist",
    "empirical_intersection",
    "to_networkx",
)
