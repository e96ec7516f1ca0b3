"""Certified bounds, improvement certificates, and variable fixing for
maximum-entropy sampling over a positive definite covariance matrix."""

from .certificates import (
    ImprovementCertificate,
    adjusted_approx_bounds,
    delta_lb,
    improvement_certificate,
    rank_after_shift,
    strict_over_ddf,
    theta_lb,
)
from .envelope import EnvelopeEval, envelope_value, psi, psi_subgradient
from .instances import MatrixFormatError, generate_instance, load_matrix, save_matrix
from .primal import (
    BoundConsistencyError,
    EnumerationLimitError,
    FixingCertificate,
    SubsetSolution,
    brute_force,
    fix_variables,
    fixing_sets,
    greedy,
    local_search,
)
from .relaxation import (
    BoundKind,
    DesignPoint,
    RelaxationSolution,
    SolveOptions,
    augfact_objective,
    build_M,
    ddf_objective,
    lmo,
    solve_bound,
)
from .spectral import (
    AsymmetricMatrixError,
    CovarianceModel,
    EigensolverError,
    NotPositiveDefiniteError,
    ShiftedFactor,
    ShiftTooLargeError,
    SpectralDecomposition,
    eigh,
    logdet_submatrix,
    shifted_factor,
)
from .sweep import ReportRow, RunConfig, build_model, run_sweep, write_csv

__version__ = "0.1.0"

__all__ = [
    "AsymmetricMatrixError",
    "BoundConsistencyError",
    "BoundKind",
    "CovarianceModel",
    "DesignPoint",
    "EigensolverError",
    "EnumerationLimitError",
    "EnvelopeEval",
    "FixingCertificate",
    "ImprovementCertificate",
    "MatrixFormatError",
    "NotPositiveDefiniteError",
    "RelaxationSolution",
    "ReportRow",
    "RunConfig",
    "ShiftTooLargeError",
    "ShiftedFactor",
    "SolveOptions",
    "SpectralDecomposition",
    "SubsetSolution",
    "adjusted_approx_bounds",
    "augfact_objective",
    "brute_force",
    "build_M",
    "build_model",
    "ddf_objective",
    "delta_lb",
    "eigh",
    "envelope_value",
    "fix_variables",
    "fixing_sets",
    "generate_instance",
    "greedy",
    "improvement_certificate",
    "lmo",
    "load_matrix",
    "local_search",
    "logdet_submatrix",
    "psi",
    "psi_subgradient",
    "rank_after_shift",
    "run_sweep",
    "save_matrix",
    "shifted_factor",
    "solve_bound",
    "strict_over_ddf",
    "theta_lb",
    "write_csv",
]
