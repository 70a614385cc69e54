"""Quaternion-valued orthonormal wavelets on the plane.

The package solves a nonconvex feasibility problem over ensembles of
spinor-vector block matrices with the Douglas-Rachford algorithm, then
extracts filter banks, runs a quaternionic cascade, and validates the
resulting scaling function and wavelets.
"""

from .algebra import (
    PlaneVector,
    Quaternion,
    Spinor,
    from_polar,
    multiply,
    phase,
    polar,
    split,
    wedge,
)
from .ensembles import (
    Ensemble,
    consistency_residuals,
    dense_samples,
    dft_forward,
    dft_inverse,
    dft_matrix,
    inner_product_real,
    load_ensemble,
    max_consistency_residual,
    modulate,
    save_ensemble,
    symmetrize,
)
from .projectors import (
    Problem,
    RegularityMatrices,
    build_problem,
    build_regularity,
    project_constraints,
    project_diagonal,
    project_point_symmetry,
    project_symmetry_pair,
    project_unitary_samples,
    project_unitary_shifted,
    project_vanishing_moments,
)
from .solver import (
    SolverConfig,
    SolverReport,
    constraint_residuals,
    dr_step,
    random_start,
    solve,
)
from .svblocks import (
    SVBlockMatrix,
    SVMatrix,
    codify,
    decodify,
    is_positive_definite,
    nearest_unitary,
    project_unitary,
    project_unitary_corner,
    sv_eigenvalues,
    sv_multiply,
)
from .synthesis import (
    FilterBank,
    OrthonormalityProfile,
    SampledFunction,
    cascade,
    completeness_residual,
    evaluate_filter,
    evaluate_sv,
    extract_filters,
    integral,
    orthonormality_check,
    partition_of_unity_residual,
    qqmf_residual,
    separability_measure,
    symmetry_residual,
    synthesize_ensemble,
    vanishing_moment_residual,
)

__version__ = "0.1.0"

__all__ = [
    "Ensemble",
    "FilterBank",
    "OrthonormalityProfile",
    "PlaneVector",
    "Problem",
    "Quaternion",
    "RegularityMatrices",
    "SVBlockMatrix",
    "SVMatrix",
    "SampledFunction",
    "SolverConfig",
    "SolverReport",
    "Spinor",
    "build_problem",
    "build_regularity",
    "cascade",
    "codify",
    "completeness_residual",
    "consistency_residuals",
    "constraint_residuals",
    "decodify",
    "dense_samples",
    "dft_forward",
    "dft_inverse",
    "dft_matrix",
    "dr_step",
    "evaluate_filter",
    "evaluate_sv",
    "extract_filters",
    "from_polar",
    "inner_product_real",
    "integral",
    "is_positive_definite",
    "load_ensemble",
    "max_consistency_residual",
    "modulate",
    "multiply",
    "nearest_unitary",
    "orthonormality_check",
    "partition_of_unity_residual",
    "phase",
    "polar",
    "project_constraints",
    "project_diagonal",
    "project_point_symmetry",
    "project_symmetry_pair",
    "project_unitary",
    "project_unitary_corner",
    "project_unitary_samples",
    "project_unitary_shifted",
    "project_vanishing_moments",
    "qqmf_residual",
    "random_start",
    "save_ensemble",
    "separability_measure",
    "solve",
    "split",
    "sv_eigenvalues",
    "sv_multiply",
    "symmetrize",
    "symmetry_residual",
    "synthesize_ensemble",
    "vanishing_moment_residual",
    "wedge",
]
