"""Worst-case optimal weights on fixed points, interpolation, power function.

Given points X = {x_1..x_N}, the weights minimizing the worst-case error
over the unit ball solve the Gram system

    K_X w = z,     (K_X)_ij = K(x_i, x_j),   z_i = I(K(., x_i)) = h(x_i),

and the minimized error obeys the Pythagorean identity

    e_opt^2 = ||h||^2 - z^T w.

The same factorization answers the interpolation questions: the kernel
interpolant of data f(X) has coefficients c = K_X^{-1} f(X), its integral
is c . z = w . f(X), and the power function

    P(x) = sqrt(K(x,x) - k_X(x)^T K_X^{-1} k_X(x))

is the pointwise worst-case error of interpolation, zero at the points
and never exceeding one (K(x,x) = 1 here).

The Gram matrix is symmetric positive definite but brutally
ill-conditioned as points crowd together, so the solver is a plain
Cholesky factorization at the context's full precision with no jitter and
no regularization: when a pivot degenerates the factorization raises
PrecisionError carrying an estimate of the digits needed, rather than
quietly returning garbage.  Rules of thumb: the estimate adds the decimal
exponent of the smallest pivot to the requested digits.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .hpcore import NumericContext, PrecisionError
from .rkhs import (
    WceReport,
    _sqrt_of_squared_error,
    double_gaussian_integral,
    kernel_value,
    representer_norm,
    representer_value,
)
from .rules import KernelSpec, MeasureSpec, QuadratureRule


@dataclass
class GramSystem:
    """A factorized kernel system on fixed points.

    Holds the points, the lower Cholesky factor of the Gram matrix
    (row lists of context reals), the representer values ``rhs``, and the
    smallest pivot encountered (a cheap conditioning readout).
    """

    measure: MeasureSpec
    kernel: KernelSpec
    points: tuple
    chol: list
    rhs: tuple
    min_pivot: object
    ctx: NumericContext

    @property
    def size(self) -> int:
        return len(self.points)


def _cholesky(a, ctx: NumericContext):
    """In-place lower Cholesky of a (list of row lists).  Returns the
    smallest pivot.  Raises PrecisionError on a nonpositive pivot, with a
    digits estimate built from the smallest healthy pivot seen."""
    n = len(a)
    min_pivot = None
    for j in range(n):
        s = a[j][j] - ctx.fsum(a[j][k] * a[j][k] for k in range(j))
        if not s > 0:
            seen = min_pivot if min_pivot is not None else ctx.real(1)
            needed = ctx.digits + max(
                0, int(math.ceil(float(-ctx.mp.log10(seen))))
            ) + 20
            raise PrecisionError(
                f"Cholesky breakdown at pivot {j} of {n} "
                f"(value {ctx.nstr(s, 6)}); the Gram matrix is not "
                f"resolvable at {ctx.digits} digits",
                suggested_digits=needed,
            )
        piv = ctx.sqrt(s)
        a[j][j] = piv
        if min_pivot is None or piv < min_pivot:
            min_pivot = piv
        for i in range(j + 1, n):
            a[i][j] = (
                a[i][j] - ctx.fsum(a[i][k] * a[j][k] for k in range(j))
            ) / piv
    return min_pivot


def _solve_lower(chol, b, ctx: NumericContext):
    n = len(chol)
    y = list(b)
    for i in range(n):
        y[i] = (y[i] - ctx.fsum(chol[i][k] * y[k] for k in range(i))) / chol[i][i]
    return y


def _solve_upper_transposed(chol, y, ctx: NumericContext):
    n = len(chol)
    x = list(y)
    for i in range(n - 1, -1, -1):
        x[i] = (
            x[i] - ctx.fsum(chol[k][i] * x[k] for k in range(i + 1, n))
        ) / chol[i][i]
    return x


def build_gram_system(measure: MeasureSpec, kernel: KernelSpec, points,
                      ctx: NumericContext) -> GramSystem:
    """Assemble and factorize the Gram system for ``points`` (d-tuples)."""
    points = tuple(tuple(ctx.real(c) for c in p) for p in points)
    if len(points) == 0:
        raise ValueError("need at least one point")
    if len(set(points)) != len(points):
        raise ValueError("points must be distinct")
    n = len(points)
    a = [
        [kernel_value(kernel, points[i], points[j], ctx) for j in range(n)]
        for i in range(n)
    ]
    min_pivot = _cholesky(a, ctx)
    rhs = tuple(representer_value(measure, kernel, p, ctx) for p in points)
    return GramSystem(
        measure=measure, kernel=kernel, points=points,
        chol=a, rhs=rhs, min_pivot=min_pivot, ctx=ctx,
    )


def optimal_weights(system: GramSystem):
    """Solve K_X w = z on an already-factorized system."""
    ctx = system.ctx
    y = _solve_lower(system.chol, list(system.rhs), ctx)
    return tuple(_solve_upper_transposed(system.chol, y, ctx))


def optimal_rule(measure: MeasureSpec, kernel: KernelSpec, points,
                 ctx: NumericContext) -> QuadratureRule:
    """The worst-case optimal rule on ``points``.

    The residual ||K w - z||_inf is checked after the solve; residual
    beyond 10^(-digits/2) means the factorization digested too much
    cancellation and raises PrecisionError.
    """
    system = build_gram_system(measure, kernel, points, ctx)
    w = optimal_weights(system)
    n = system.size
    worst = ctx.real(0)
    for i in range(n):
        row = ctx.fsum(
            kernel_value(kernel, system.points[i], system.points[j], ctx) * w[j]
            for j in range(n)
        )
        worst = max(worst, abs(row - system.rhs[i]))
    if worst > ctx.half_tolerance():
        raise PrecisionError(
            f"optimal-weight residual {ctx.nstr(worst, 6)} exceeds "
            f"10^(-{ctx.digits}/2); increase working precision",
            suggested_digits=2 * ctx.digits,
        )
    return QuadratureRule(
        dim=kernel.dim, points=system.points, weights=w,
        provenance="optimal",
    )


def wce_optimal(system_or_rule, measure: MeasureSpec | None = None,
                kernel: KernelSpec | None = None,
                ctx: NumericContext | None = None) -> WceReport:
    """Worst-case error of the optimal rule via the Pythagorean identity.

    Accepts either a GramSystem (preferred: reuses the factorization) or
    a QuadratureRule whose weights are already optimal for its points.
    """
    if isinstance(system_or_rule, GramSystem):
        system = system_or_rule
        ctx = system.ctx
        w = optimal_weights(system)
        measure, kernel = system.measure, system.kernel
        rhs = system.rhs
        size = system.size
    else:
        rule = system_or_rule
        if measure is None or kernel is None or ctx is None:
            raise ValueError("rule form needs measure, kernel, and ctx")
        w = rule.weights
        rhs = tuple(
            representer_value(measure, kernel, p, ctx) for p in rule.points
        )
        size = rule.size
    e2 = ctx.fsum(
        [double_gaussian_integral(measure, kernel, ctx)]
        + [-wi * zi for wi, zi in zip(w, rhs)]
    )
    return WceReport(
        wce=_sqrt_of_squared_error(e2, ctx, "wce_optimal"),
        method="pythagorean", rule_size=size,
        kernel=kernel, measure=measure,
    )


def wce_optimal_for_points(measure: MeasureSpec, kernel: KernelSpec, points,
                           ctx: NumericContext) -> WceReport:
    """Optimal worst-case error on a point list; empty points give the
    representer norm (no rule at all)."""
    points = tuple(points)
    if len(points) == 0:
        return WceReport(
            wce=representer_norm(measure, kernel, ctx),
            method="pythagorean", rule_size=0,
            kernel=kernel, measure=measure,
        )
    return wce_optimal(build_gram_system(measure, kernel, points, ctx))


def _coordinate_systems(measure: MeasureSpec, kernel: KernelSpec, sets_1d,
                        ctx: NumericContext):
    sets_1d = [tuple(s) for s in sets_1d]
    if len(sets_1d) != kernel.dim:
        raise ValueError("one point set per coordinate required")
    systems = []
    for i, pts in enumerate(sets_1d):
        m1 = MeasureSpec(stddevs=(measure.stddevs[i],))
        k1 = KernelSpec(lengthscales=(kernel.lengthscales[i],))
        systems.append(
            build_gram_system(m1, k1, [(ctx.real(p),) for p in pts], ctx)
        )
    return systems


def optimal_product_wce(measure: MeasureSpec, kernel: KernelSpec, sets_1d,
                        ctx: NumericContext) -> WceReport:
    """Optimal worst-case error on a product grid, without the dense Gram.

    On a grid X_1 x ... x X_d the Gram matrix is the Kronecker product of
    the coordinate Grams and the representer vector the product of
    coordinate ones, so the optimal weights factor as the tensor of the
    coordinate solves and

        e_opt^2 = prod_i ||h_i||^2 - prod_i (w_i . z_i).

    Each coordinate solve carries the usual breakdown diagnostics; the
    grid itself is never materialized.
    """
    systems = _coordinate_systems(measure, kernel, sets_1d, ctx)
    total = ctx.real(1)
    matched = ctx.real(1)
    size = 1
    for system in systems:
        w = optimal_weights(system)
        total *= double_gaussian_integral(system.measure, system.kernel, ctx)
        matched *= ctx.fsum(wi * zi for wi, zi in zip(w, system.rhs))
        size *= system.size
    return WceReport(
        wce=_sqrt_of_squared_error(total - matched, ctx, "optimal_product_wce"),
        method="pythagorean", rule_size=size,
        kernel=kernel, measure=measure,
    )


def optimal_product_rule(measure: MeasureSpec, kernel: KernelSpec, sets_1d,
                         ctx: NumericContext) -> QuadratureRule:
    """Materialize the optimal rule on a product grid from coordinate
    solves (row-major grid order, first coordinate slowest)."""
    systems = _coordinate_systems(measure, kernel, sets_1d, ctx)
    per_dim = [
        (system.points, optimal_weights(system)) for system in systems
    ]
    points = []
    weights = []
    for combo in itertools.product(*(range(len(p)) for p, _ in per_dim)):
        pt = tuple(per_dim[i][0][c][0] for i, c in enumerate(combo))
        w = ctx.real(1)
        for i, c in enumerate(combo):
            w *= per_dim[i][1][c]
        points.append(pt)
        weights.append(w)
    return QuadratureRule(
        dim=kernel.dim, points=tuple(points), weights=tuple(weights),
        provenance="optimal",
    )


def interpolant_coefficients(system: GramSystem, values):
    """Coefficients c = K_X^{-1} f(X) of the kernel interpolant."""
    values = list(values)
    if len(values) != system.size:
        raise ValueError("one value per point required")
    ctx = system.ctx
    y = _solve_lower(system.chol, values, ctx)
    return tuple(_solve_upper_transposed(system.chol, y, ctx))


def interpolant_value(system: GramSystem, coefficients, x):
    """s(x) = sum_i c_i K(x, x_i)."""
    ctx = system.ctx
    return ctx.fsum(
        c * kernel_value(system.kernel, x, p, ctx)
        for c, p in zip(coefficients, system.points)
    )


def interpolant_integral(system: GramSystem, coefficients):
    """I(s) = sum_i c_i h(x_i); equals the optimal rule applied to the
    interpolated data."""
    ctx = system.ctx
    return ctx.fsum(c * z for c, z in zip(coefficients, system.rhs))


def power_function(system_or_points, x, measure: MeasureSpec | None = None,
                   kernel: KernelSpec | None = None,
                   ctx: NumericContext | None = None):
    """P(x) = sqrt(K(x,x) - k_X(x)^T K_X^{-1} k_X(x)), clamped at zero.

    Accepts a GramSystem, or a (possibly empty) point list plus
    measure/kernel/ctx; the empty set has P(x) = 1 identically.
    """
    if isinstance(system_or_points, GramSystem):
        system = system_or_points
    else:
        points = tuple(system_or_points)
        if kernel is None or ctx is None:
            raise ValueError("point-list form needs kernel and ctx")
        if len(points) == 0:
            return ctx.real(1)
        if measure is None:
            measure = MeasureSpec(stddevs=(ctx.real(1),) * kernel.dim)
        system = build_gram_system(measure, kernel, points, ctx)
    ctx = system.ctx
    k_vec = [
        kernel_value(system.kernel, x, p, ctx) for p in system.points
    ]
    y = _solve_lower(system.chol, k_vec, ctx)
    p2 = ctx.fsum([ctx.real(1)] + [-yi * yi for yi in y])
    return _sqrt_of_squared_error(p2, ctx, "power_function")
