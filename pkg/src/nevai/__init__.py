"""Rational kernel-weighted approximation of complex functions on the square.

Three operator families built on the orthonormal Chebyshev kernel: a
generalized node-sampling family, a cell-averaging (Kantorovich-type)
family for merely integrable targets, and a Taylor-based (Hermite-type)
family for analytic targets with derivative data.  Plus error metrics,
convergence-rate experiments, and amplitude/phase image reconstruction
through the cell-averaging family.
"""

from .chebyshev import (ChebyshevBasis, cd_kernel, kernel_matrix, kernel_row,
                        make_basis, orthonormal_T, orthonormal_T_deriv)
from .errors import (DegenerateDenominatorError, DomainError,
                     MissingDerivativesError, NevaiError,
                     NonFiniteIntegrandError, PairingError,
                     ShapeMismatchError, UnknownFunctionError)
from .evaluation import (RateReport, distance_rate, distance_sup, error_rows,
                         evaluate_operator_grid, exact_grid, square_grid)
from .imaging import (Channel, ComplexImage, StepField, embed, pixel_centers,
                      pixel_index, reconstruct, reconstruction_quality,
                      synthetic_image, wrap_phase)
from .metrics import (ErrorReport, ImageQuality, RateEstimate, error_report,
                      estimate_modulus, fit_rate, image_quality, psnr, rmse,
                      ssim_global)
from .operators import (ComplexField, Family, KantorovichGrid, NodeGrid2D,
                        OperatorConfig, denominator, evaluate_generalized_grid,
                        evaluate_hermite_grid, evaluate_kantorovich_grid,
                        kantorovich_cell_integrals, make_kantorovich_grid,
                        make_node_grid, nevai_generalized, nevai_hermite,
                        nevai_kantorovich)
from .quadrature import (CellIntegral, cell_edges, cell_integral_matrix,
                         integrate_cell, integrate_cell_step, overlap_lengths,
                         step_cell_matrix)
from .testbed import (FUNCTION_IDS, NamedFunction, lookup,
                      require_taylor_compatible)

__version__ = "0.1.0"

__all__ = [
    "ChebyshevBasis", "cd_kernel", "kernel_matrix", "kernel_row",
    "make_basis", "orthonormal_T", "orthonormal_T_deriv",
    "NevaiError", "DomainError", "DegenerateDenominatorError",
    "MissingDerivativesError", "NonFiniteIntegrandError", "PairingError",
    "ShapeMismatchError", "UnknownFunctionError",
    "RateReport", "distance_rate", "distance_sup", "error_rows",
    "evaluate_operator_grid", "exact_grid", "square_grid",
    "Channel", "ComplexImage", "StepField", "embed", "pixel_centers",
    "pixel_index", "reconstruct", "reconstruction_quality",
    "synthetic_image", "wrap_phase",
    "ErrorReport", "ImageQuality", "RateEstimate", "error_report",
    "estimate_modulus", "fit_rate", "image_quality", "psnr", "rmse",
    "ssim_global",
    "ComplexField", "Family", "KantorovichGrid", "NodeGrid2D",
    "OperatorConfig", "denominator", "evaluate_generalized_grid",
    "evaluate_hermite_grid", "evaluate_kantorovich_grid",
    "kantorovich_cell_integrals", "make_kantorovich_grid", "make_node_grid",
    "nevai_generalized", "nevai_hermite", "nevai_kantorovich",
    "CellIntegral", "cell_edges", "cell_integral_matrix", "integrate_cell",
    "integrate_cell_step", "overlap_lengths", "step_cell_matrix",
    "FUNCTION_IDS", "NamedFunction", "lookup", "require_taylor_compatible",
    "__version__",
]
