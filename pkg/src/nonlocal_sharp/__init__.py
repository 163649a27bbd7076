"""Solver and verification toolkit for semilinear nonlocal Dirichlet problems.

Computes fixed points of u = G[u^p] for Green operators G on the unit
interval, measures the boundary decay exponent of the solution, and checks
it against closed-form regime predictions, including the logarithmic
correction at the critical parameter threshold.
"""

from .grids import Domain, Grid, boundary_distance, graded_mesh
from .kernels import (
    BoundReport,
    DiagonalSingularityError,
    GreenKernel,
    ProblemParams,
    check_kernel_bounds,
    eval_synthetic_k5,
    synthetic_k5,
)
from .operators import (
    GreenOperator,
    apply,
    assemble,
    green_q_norm,
    green_q_norm_profile,
    spectral_mt_operator,
)
from .eigen import (
    BoundaryRatio,
    ConvergenceError,
    EigenPair,
    eigenfunction_boundary_report,
    leading_eigenpairs,
)
from .solver import (
    BracketError,
    HarnackReport,
    SemilinearSolution,
    SolverConfig,
    auto_bracket,
    harnack_report,
    picard_map,
    picard_solve,
    solve_linear,
)
from .exponents import (
    BqClassification,
    CaseLabel,
    EigenvalueProblemSignal,
    ExponentPrediction,
    HlsLadder,
    classify_bq,
    hls_ladder,
    nu_case_machine,
    nu_sequence,
    predict_mu,
)
from .fitting import (
    FitReport,
    FitResult,
    FitWindow,
    InsufficientWindowError,
    fit_log_correction,
    fit_power,
    fit_report,
)

__version__ = "0.1.0"

__all__ = [
    "Domain", "Grid", "boundary_distance", "graded_mesh",
    "BoundReport", "DiagonalSingularityError", "GreenKernel", "ProblemParams",
    "check_kernel_bounds", "eval_synthetic_k5", "synthetic_k5",
    "GreenOperator", "apply", "assemble", "green_q_norm",
    "green_q_norm_profile", "spectral_mt_operator",
    "BoundaryRatio", "ConvergenceError", "EigenPair",
    "eigenfunction_boundary_report", "leading_eigenpairs",
    "BracketError", "HarnackReport", "SemilinearSolution", "SolverConfig",
    "auto_bracket", "harnack_report", "picard_map", "picard_solve",
    "solve_linear",
    "BqClassification", "CaseLabel", "EigenvalueProblemSignal",
    "ExponentPrediction", "HlsLadder", "classify_bq", "hls_ladder",
    "nu_case_machine", "nu_sequence", "predict_mu",
    "FitReport", "FitResult", "FitWindow", "InsufficientWindowError",
    "fit_log_correction", "fit_power", "fit_report",
]
