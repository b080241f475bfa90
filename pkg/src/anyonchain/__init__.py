"""Entanglement of random and chaotic states in anyonic chains.

Fusion categories (SU(2)_k, Fibonacci, Z_n), fusion-path bases with
bipartite decompositions, the anyonic entanglement entropy of sector states,
closed-form Haar averages, and the golden chain Hamiltonian.
"""

from __future__ import annotations

from .analytic import (
    asymptotic_aee,
    asymptotic_variance,
    exact_average_aee,
    exact_variance,
    q_sree,
    resolved_crossover,
    sector_dims,
)
from .category import (
    AnyonModel,
    braid_matrix,
    build_abelian_zn,
    build_fibonacci,
    build_model,
    build_su2k,
    dump_model,
    load_model,
    validate,
)
from .entropy import SectorState, aee, monte_carlo_aee, reduce, sample_haar, state_aee
from .fusion import (
    BipartiteDecomposition,
    FusionBasis,
    bipartite_decomposition,
    dim_bruteforce,
    dim_verlinde,
    enumerate_basis,
)
from .hamiltonian import (
    GoldenChainSpec,
    asymmetry_curve,
    build_hamiltonian,
    eigenstate_aee_curve,
    finite_size_fit,
    golden_chain_spectrum,
    half_chain_ratio,
    level_spacing_ratios,
    parity_operator,
)

__version__ = "0.1.0"

__all__ = [
    "AnyonModel",
    "BipartiteDecomposition",
    "FusionBasis",
    "GoldenChainSpec",
    "SectorState",
    "aee",
    "asymmetry_curve",
    "asymptotic_aee",
    "asymptotic_variance",
    "bipartite_decomposition",
    "braid_matrix",
    "build_abelian_zn",
    "build_fibonacci",
    "build_hamiltonian",
    "build_model",
    "build_su2k",
    "dim_bruteforce",
    "dim_verlinde",
    "dump_model",
    "eigenstate_aee_curve",
    "enumerate_basis",
    "exact_average_aee",
    "exact_variance",
    "finite_size_fit",
    "golden_chain_spectrum",
    "half_chain_ratio",
    "level_spacing_ratios",
    "load_model",
    "monte_carlo_aee",
    "parity_operator",
    "q_sree",
    "reduce",
    "resolved_crossover",
    "sample_haar",
    "sector_dims",
    "state_aee",
    "validate",
]
