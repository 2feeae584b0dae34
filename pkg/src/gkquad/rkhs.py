"""The Gaussian-kernel RKHS: basis, representers, and exact worst-case errors.

The space is the reproducing kernel Hilbert space of the product Gaussian
kernel K(x, y) = prod_i exp(-(x_i - y_i)^2 / (2 ell_i^2)); integration is
against the centered Gaussian measure with per-coordinate standard
deviations alpha_i.  Two structural facts drive everything here.

First, the space has an explicit countable orthonormal basis per
coordinate,

    phi_{ell,m}(x) = x^m / (ell^m sqrt(m!)) * exp(-x^2 / (2 ell^2)),

whose Gaussian integrals are known in closed form: odd m integrate to
zero, and with beta^2 = alpha^2 ell^2/(alpha^2 + ell^2),

    I(phi_{ell,2q}) = (beta/alpha) (beta^2/ell^2)^q sqrt((2q)!) / (2^q q!).

Second, integration is itself represented by a kernel element: the
representer has pointwise values

    h(x) = sqrt(ell^2/(alpha^2 + ell^2)) exp(-x^2 / (2 (alpha^2 + ell^2)))

per coordinate and squared norm prod_i (1 + 2 alpha_i^2/ell_i^2)^(-1/2).

The worst-case error of a rule Q over the unit ball of the space then has
two independent expressions, and this module computes both:

* closed form (kernel arithmetic):
  e^2 = ||h||^2 - 2 sum_i w_i h(x_i) + sum_ij w_i w_j K(x_i, x_j);

* basis expansion (Parseval):
  e^2 = sum_m (I(phi_m) - Q(phi_m))^2 over all multi-indices m,

truncated adaptively with a rigorous tail bound.  The closed form is exact
up to rounding; the expansion is an independent oracle used to validate
it.  Agreement of the two is the strongest internal consistency check the
package has.

All squared-error accumulations are done with a single compensated
summation over every term so cancellation costs one rounding, not one per
term.  A squared error that comes out negative beyond roundoff scale
(10^(-digits/2)) raises PrecisionError rather than silently clamping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .hpcore import NumericContext, PrecisionError, ConvergenceError
from .rules import KernelSpec, MeasureSpec, QuadratureRule

_TAIL_DOUBLING_CAP = 24
_INITIAL_TRUNCATION = 32


@dataclass(frozen=True)
class WceReport:
    """Worst-case error of a rule, with how it was computed.

    ``method`` is "closed-form", "basis-truncation", or "pythagorean"
    (the optimal-weights shortcut).  ``truncation_order`` and
    ``tail_bound`` are set only for basis-truncation reports;
    ``tail_bound`` bounds the amount by which the squared error could
    exceed the truncated sum.
    """

    wce: object
    method: str
    rule_size: int
    kernel: KernelSpec
    measure: MeasureSpec
    truncation_order: int | None = None
    tail_bound: object | None = None


def _as_point(x):
    return x if isinstance(x, (tuple, list)) else (x,)


def kernel_value(kernel: KernelSpec, x, y, ctx: NumericContext):
    """K(x, y) for d-tuples (scalars accepted in one dimension)."""
    x = _as_point(x)
    y = _as_point(y)
    if len(x) != kernel.dim or len(y) != kernel.dim:
        raise ValueError("point dimension does not match kernel")
    s = ctx.real(0)
    for xi, yi, ell in zip(x, y, kernel.lengthscales):
        d = xi - yi
        s += d * d / (2 * ell * ell)
    return ctx.exp(-s)


def weighted_monomial(ell, m: int, x, ctx: NumericContext):
    """psi_{ell,m}(x) = x^m exp(-x^2/(2 ell^2)), the unnormalized basis
    function in one coordinate."""
    if m < 0:
        raise ValueError(f"basis index m={m} < 0")
    ell = ctx.real(ell)
    x = ctx.real(x)
    return x**m * ctx.exp(-(x * x) / (2 * ell * ell))


def basis_function_1d(ell, m: int, x, ctx: NumericContext):
    """phi_{ell,m}(x) = psi_{ell,m}(x) / (ell^m sqrt(m!)), unit norm in
    the one-dimensional space."""
    ell = ctx.real(ell)
    norm = ell**m * ctx.sqrt(ctx.real(math.factorial(m)))
    return weighted_monomial(ell, m, x, ctx) / norm


def basis_function(kernel: KernelSpec, m, x, ctx: NumericContext):
    """Product basis function phi_m(x) = prod_i phi_{ell_i, m_i}(x_i)."""
    m = tuple(m) if isinstance(m, (tuple, list)) else (m,)
    x = _as_point(x)
    if len(m) != kernel.dim or len(x) != kernel.dim:
        raise ValueError("multi-index/point dimension mismatch")
    out = ctx.real(1)
    for ell, mi, xi in zip(kernel.lengthscales, m, x):
        out *= basis_function_1d(ell, mi, xi, ctx)
    return out


def basis_integral_1d(alpha, ell, m: int, ctx: NumericContext):
    """I(phi_{ell,m}) against N(0, alpha^2): zero for odd m, and
    (beta/alpha) (beta^2/ell^2)^q sqrt((2q)!)/(2^q q!) for m = 2q."""
    if m < 0:
        raise ValueError(f"basis index m={m} < 0")
    if m % 2 == 1:
        return ctx.real(0)
    alpha = ctx.real(alpha)
    ell = ctx.real(ell)
    q = m // 2
    beta2 = alpha * alpha * ell * ell / (alpha * alpha + ell * ell)
    ratio = ctx.sqrt(beta2) / alpha
    coeff = ctx.sqrt(ctx.real(math.factorial(2 * q))) / ctx.real(
        2**q * math.factorial(q)
    )
    return ratio * (beta2 / (ell * ell)) ** q * coeff


def basis_integral(measure: MeasureSpec, kernel: KernelSpec, m, ctx: NumericContext):
    """I(phi_m) for a multi-index, the product of coordinate integrals."""
    m = tuple(m) if isinstance(m, (tuple, list)) else (m,)
    if len(m) != kernel.dim or measure.dim != kernel.dim:
        raise ValueError("multi-index/space dimension mismatch")
    out = ctx.real(1)
    for alpha, ell, mi in zip(measure.stddevs, kernel.lengthscales, m):
        out *= basis_integral_1d(alpha, ell, mi, ctx)
    return out


def representer_value_1d(alpha, ell, x, ctx: NumericContext):
    """Pointwise value of the integration representer in one coordinate:
    sqrt(ell^2/(alpha^2+ell^2)) exp(-x^2/(2 (alpha^2+ell^2)))."""
    alpha = ctx.real(alpha)
    ell = ctx.real(ell)
    x = ctx.real(x)
    s2 = alpha * alpha + ell * ell
    return ctx.sqrt(ell * ell / s2) * ctx.exp(-(x * x) / (2 * s2))


def representer_value(measure: MeasureSpec, kernel: KernelSpec, x, ctx: NumericContext):
    """h(x) = I(K(., x)), the kernel embedding of integration, at x."""
    x = _as_point(x)
    if len(x) != kernel.dim:
        raise ValueError("point dimension does not match space")
    out = ctx.real(1)
    for alpha, ell, xi in zip(measure.stddevs, kernel.lengthscales, x):
        out *= representer_value_1d(alpha, ell, xi, ctx)
    return out


def representer_norm_1d(alpha, ell, ctx: NumericContext):
    """||h|| = (1 + 2 alpha^2/ell^2)^(-1/4) in one coordinate."""
    alpha = ctx.real(alpha)
    ell = ctx.real(ell)
    return (1 + 2 * alpha * alpha / (ell * ell)) ** ctx.real("-0.25")


def representer_norm(measure: MeasureSpec, kernel: KernelSpec, ctx: NumericContext):
    """||h||, the worst-case error of the empty rule."""
    out = ctx.real(1)
    for alpha, ell in zip(measure.stddevs, kernel.lengthscales):
        out *= representer_norm_1d(alpha, ell, ctx)
    return out


def double_gaussian_integral(measure: MeasureSpec, kernel: KernelSpec, ctx: NumericContext):
    """||h||^2 = int int K d(measure) d(measure) =
    prod_i (1 + 2 alpha_i^2/ell_i^2)^(-1/2)."""
    out = ctx.real(1)
    for alpha, ell in zip(measure.stddevs, kernel.lengthscales):
        out *= ctx.sqrt(1 / (1 + 2 * alpha * alpha / (ell * ell)))
    return out


def _check_space(measure: MeasureSpec, kernel: KernelSpec, rule: QuadratureRule | None):
    if measure.dim != kernel.dim:
        raise ValueError(
            f"measure dim {measure.dim} != kernel dim {kernel.dim}"
        )
    if rule is not None and rule.dim != kernel.dim:
        raise ValueError(f"rule dim {rule.dim} != space dim {kernel.dim}")


def _sqrt_of_squared_error(e2, ctx: NumericContext, what: str):
    if e2 < 0:
        if e2 > -ctx.half_tolerance():
            return ctx.real(0)
        raise PrecisionError(
            f"{what}: squared error {ctx.nstr(e2, 8)} is negative beyond "
            f"roundoff at {ctx.digits} digits; increase working precision",
            suggested_digits=2 * ctx.digits,
        )
    return ctx.sqrt(e2)


def wce_closed_form(rule: QuadratureRule | None, measure: MeasureSpec,
                    kernel: KernelSpec, ctx: NumericContext) -> WceReport:
    """Exact worst-case error by kernel arithmetic.

    e^2 = ||h||^2 - 2 sum_i w_i h(x_i) + sum_ij w_i w_j K(x_i, x_j),
    accumulated in one compensated sum.  ``rule=None`` means the empty
    rule, whose error is the representer norm itself.
    """
    _check_space(measure, kernel, rule)
    if rule is None:
        return WceReport(
            wce=representer_norm(measure, kernel, ctx),
            method="closed-form", rule_size=0,
            kernel=kernel, measure=measure,
        )
    pts = rule.points
    w = rule.weights
    n = len(pts)
    terms = [double_gaussian_integral(measure, kernel, ctx)]
    for i in range(n):
        terms.append(-2 * w[i] * representer_value(measure, kernel, pts[i], ctx))
    for i in range(n):
        wi = w[i]
        terms.append(wi * wi)  # K(x_i, x_i) = 1
        for j in range(i + 1, n):
            terms.append(2 * wi * w[j] * kernel_value(kernel, pts[i], pts[j], ctx))
    e2 = ctx.fsum(terms)
    return WceReport(
        wce=_sqrt_of_squared_error(e2, ctx, "wce_closed_form"),
        method="closed-form", rule_size=n,
        kernel=kernel, measure=measure,
    )


def _coordinate_basis_table(ell, m_max: int, xs, ctx: NumericContext):
    """Table T[m][p] = phi_{ell,m}(xs[p]) for m = 0..m_max, built by the
    stable forward recurrence phi_{m+1} = phi_m * x / (ell sqrt(m+1))."""
    ell = ctx.real(ell)
    row = [ctx.exp(-(x * x) / (2 * ell * ell)) for x in xs]
    table = [row]
    for m in range(1, m_max + 1):
        scale = ell * ctx.sqrt(ctx.real(m))
        row = [prev * x / scale for prev, x in zip(row, xs)]
        table.append(row)
    return table


def _box_sums(rule, measure, kernel, m_max: int, ctx: NumericContext):
    """Partial Parseval sums over the box of multi-indices with every
    component <= m_max.

    Returns (sum_box (I_m - Q_m)^2, sum_box I_m^2, sum_box Q_m^2).
    """
    d = kernel.dim
    tables = [
        _coordinate_basis_table(
            kernel.lengthscales[i], m_max,
            [p[i] for p in rule.points], ctx,
        )
        for i in range(d)
    ]
    integrals = [
        [basis_integral_1d(measure.stddevs[i], kernel.lengthscales[i], m, ctx)
         for m in range(m_max + 1)]
        for i in range(d)
    ]
    w = rule.weights
    diff_terms = []
    i_terms = []
    q_terms = []

    def recurse(coord, point_prod, integral_prod):
        if coord == d:
            q_m = ctx.fsum(wi * v for wi, v in zip(w, point_prod))
            i_m = integral_prod
            diff = i_m - q_m
            diff_terms.append(diff * diff)
            i_terms.append(i_m * i_m)
            q_terms.append(q_m * q_m)
            return
        table = tables[coord]
        ints = integrals[coord]
        for m in range(m_max + 1):
            recurse(
                coord + 1,
                [a * b for a, b in zip(point_prod, table[m])],
                integral_prod * ints[m],
            )

    recurse(0, [ctx.real(1)] * len(w), ctx.real(1))
    return ctx.fsum(diff_terms), ctx.fsum(i_terms), ctx.fsum(q_terms)


def wce_series(rule: QuadratureRule | None, measure: MeasureSpec,
               kernel: KernelSpec, ctx: NumericContext,
               truncation: int | None = None) -> WceReport:
    """Worst-case error by truncated basis expansion (independent oracle).

    Sums (I(phi_m) - Q(phi_m))^2 over the box of multi-indices with all
    components <= M.  The neglected tail is bounded rigorously through
    Parseval: the full sums of I_m^2 and Q_m^2 have closed forms
    (||h||^2 and sum_ij w_i w_j K(x_i,x_j)), so

        tail <= 2 (||h||^2 - sum_box I_m^2) + 2 (||Q||^2 - sum_box Q_m^2).

    With ``truncation=None`` the box is doubled until the bound drops
    below 10^(-digits/3); a cap on doublings turns a non-converging tail
    into ConvergenceError instead of a silent truncation.
    """
    _check_space(measure, kernel, rule)
    if rule is None:
        return WceReport(
            wce=representer_norm(measure, kernel, ctx),
            method="basis-truncation", rule_size=0,
            kernel=kernel, measure=measure,
            truncation_order=0, tail_bound=ctx.real(0),
        )
    i_total = double_gaussian_integral(measure, kernel, ctx)
    q_total = ctx.fsum(
        rule.weights[i] * rule.weights[j]
        * kernel_value(kernel, rule.points[i], rule.points[j], ctx)
        for i in range(rule.size) for j in range(rule.size)
    )
    target = ctx.mp.mpf(10) ** (-ctx.mp.mpf(ctx.digits) / 3)

    def tail_at(m_max):
        partial, i_box, q_box = _box_sums(rule, measure, kernel, m_max, ctx)
        i_tail = i_total - i_box
        q_tail = q_total - q_box
        zero = ctx.real(0)
        return partial, 2 * max(i_tail, zero) + 2 * max(q_tail, zero)

    if truncation is not None:
        if truncation < 1:
            raise ValueError("truncation must be >= 1")
        partial, bound = tail_at(truncation)
        m_max = truncation
    else:
        m_max = _INITIAL_TRUNCATION
        for _ in range(_TAIL_DOUBLING_CAP):
            partial, bound = tail_at(m_max)
            if bound < target:
                break
            m_max *= 2
        else:
            raise ConvergenceError(
                f"basis-expansion tail bound stuck at {ctx.nstr(bound, 6)} "
                f"after truncation order {m_max}; points may sit too far "
                "out in the kernel envelope for this expansion"
            )
    return WceReport(
        wce=_sqrt_of_squared_error(partial, ctx, "wce_series"),
        method="basis-truncation", rule_size=rule.size,
        kernel=kernel, measure=measure,
        truncation_order=m_max, tail_bound=bound,
    )
