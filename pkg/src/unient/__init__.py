"""Unified-entropy entanglement measures for finite-dimensional quantum states."""

from .bipartite import (
    concurrence_two_qubit,
    entanglement_pure,
    h_check,
    proposition1_triple,
    two_qubit_measure,
    werner_state,
)
from .entropy import DomainError, Family, MeasureParams, classical_limit_entropy, reduced_function_h, unified_entropy
from .multipartite import (
    Form,
    GlobalMeasureKind,
    c_gme,
    extremal_constants,
    fidelity_reduction_check,
    gem_lower_bounds,
    gem_mixed,
    gem_pure,
    glmem_mixed,
    glmem_pure,
)
from .partitions import Partition, XiUndefinedError, coarser, enumerate_partitions, xi_set
from .roof import EnsembleDecomposition, RoofConfig, convex_roof_estimate, roof_entanglement, roof_gap_report
from .states import (
    DensityMatrix,
    PureState,
    StateError,
    basis_state,
    bell_state,
    ghz_state,
    make_rng,
    matrix_power,
    partial_trace,
    sample_ginibre_density,
    sample_haar_pure,
    schmidt_coefficients,
    spectral_decompose,
    trace_power,
    w_state,
)

__version__ = "0.1.0"

__all__ = [
    "basis_state",
    "bell_state",
    "c_gme",
    "classical_limit_entropy",
    "coarser",
    "concurrence_two_qubit",
    "convex_roof_estimate",
    "DensityMatrix",
    "DomainError",
    "EnsembleDecomposition",
    "entanglement_pure",
    "enumerate_partitions",
    "extremal_constants",
    "Family",
    "fidelity_reduction_check",
    "Form",
    "gem_lower_bounds",
    "gem_mixed",
    "gem_pure",
    "ghz_state",
    "glmem_mixed",
    "glmem_pure",
    "GlobalMeasureKind",
    "h_check",
    "make_rng",
    "matrix_power",
    "MeasureParams",
    "partial_trace",
    "Partition",
    "proposition1_triple",
    "PureState",
    "reduced_function_h",
    "roof_entanglement",
    "roof_gap_report",
    "RoofConfig",
    "sample_ginibre_density",
    "sample_haar_pure",
    "schmidt_coefficients",
    "spectral_decompose",
    "StateError",
    "trace_power",
    "two_qubit_measure",
    "unified_entropy",
    "w_state",
    "werner_state",
    "xi_set",
    "XiUndefinedError",
]
