"""Quadrature rules and exact worst-case errors for Gaussian-kernel
reproducing kernel Hilbert spaces under Gaussian measures, in arbitrary
precision.
"""

from .bounds import (
    BoundReport,
    decay_base,
    error_constant,
    first_omitted_error,
    gh1d_bounds,
    gh_tensor_bounds,
    kq_bound,
    kq_bound_generic,
    minimal_error_bounds_1d,
    minimal_error_bounds_d,
    minimal_error_constant,
    omitted_error_envelope,
    tensor_lower_term,
)
from .hermite import GaussHermiteRule, gauss_hermite_rule, hermite_pair, hermite_value
from .hpcore import (
    MIN_DIGITS,
    ConvergenceError,
    NumericContext,
    PrecisionError,
    make_context,
)
from .optimal import (
    GramSystem,
    build_gram_system,
    interpolant_coefficients,
    interpolant_integral,
    interpolant_value,
    optimal_product_rule,
    optimal_product_wce,
    optimal_rule,
    optimal_weights,
    power_function,
    wce_optimal,
    wce_optimal_for_points,
)
from .points import (
    BoundConstants,
    PointSet1D,
    fill_distance,
    quasi_uniformity_constant,
    tensor_grid,
    van_der_corput,
    x_k,
    y_set,
)
from .rkhs import (
    WceReport,
    basis_function,
    basis_function_1d,
    basis_integral,
    basis_integral_1d,
    double_gaussian_integral,
    kernel_value,
    representer_norm,
    representer_value,
    wce_closed_form,
    wce_series,
)
from .rules import (
    KernelSpec,
    MeasureSpec,
    QuadratureRule,
    apply_rule,
    effective_scale,
    kernel_spec,
    measure_spec,
    scaled_gh_rule,
    standard_gh_rule,
    tensor_rule,
)

__version__ = "0.1.0"

__all__ = [
    "MIN_DIGITS",
    "BoundConstants",
    "BoundReport",
    "ConvergenceError",
    "GaussHermiteRule",
    "GramSystem",
    "KernelSpec",
    "MeasureSpec",
    "NumericContext",
    "PointSet1D",
    "PrecisionError",
    "QuadratureRule",
    "WceReport",
    "apply_rule",
    "basis_function",
    "basis_function_1d",
    "basis_integral",
    "basis_integral_1d",
    "build_gram_system",
    "decay_base",
    "double_gaussian_integral",
    "effective_scale",
    "error_constant",
    "fill_distance",
    "first_omitted_error",
    "gauss_hermite_rule",
    "gh1d_bounds",
    "gh_tensor_bounds",
    "hermite_pair",
    "hermite_value",
    "interpolant_coefficients",
    "interpolant_integral",
    "interpolant_value",
    "kernel_spec",
    "kernel_value",
    "kq_bound",
    "kq_bound_generic",
    "make_context",
    "measure_spec",
    "minimal_error_bounds_1d",
    "minimal_error_bounds_d",
    "minimal_error_constant",
    "omitted_error_envelope",
    "optimal_product_rule",
    "optimal_product_wce",
    "optimal_rule",
    "optimal_weights",
    "power_function",
    "quasi_uniformity_constant",
    "representer_norm",
    "representer_value",
    "scaled_gh_rule",
    "standard_gh_rule",
    "tensor_grid",
    "tensor_rule",
    "van_der_corput",
    "wce_closed_form",
    "wce_optimal",
    "wce_optimal_for_points",
    "wce_series",
    "x_k",
    "y_set",
]
