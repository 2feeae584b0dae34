"""Theoretical error bounds for the rules this package builds.

Everything in this module is a direct formula evaluation; no quadrature
happens here.  Conventions shared by all bounds, per coordinate:

    rho   = alpha^2 / (alpha^2 + ell^2)      (geometric decay base)
    shape = ell / sqrt(alpha^2 + ell^2)      (prefactor; equals beta/alpha)
    gamma = alpha / ell
    omega = 2 gamma^2 / (1 + 2 gamma^2 + sqrt(1 + 4 gamma^2))

For the n-point scaled Gauss-Hermite rule in one dimension the error is
sandwiched by

    lower = C_n shape (rho/2)^n n^(1/4)
    upper = pi^(-1/4) shape rho^n n^(-1/4)

with C_n = 2^n n! / sqrt((2n)!) n^(-1/4), a strictly decreasing sequence
with limit pi^(1/4).  The lower value is exact: it is the error committed
on the first basis function the rule fails to integrate (the rule matches
basis indices 0..2n-1 and first misses 2n).  The nominal upper constant
is too small at n = 1 (at alpha = ell = 1 the true error 0.27812 exceeds
0.26557), so an adjusted variant multiplying by (1 - rho^2)^(-1/2) is
reported alongside; the adjusted constant is the l2 norm of the geometric
coefficient sequence that the nominal constant replaces by its sup.

Tensor rules get a sum-over-coordinates upper bound weighted by the
other coordinates' representer norms, and a min-over-coordinates lower
bound.  Minimal-error sandwiches bound the best possible N-point rule.
The optimal-weight (kernel quadrature) bounds on the X_k point sets carry
unknown constants from a sampling inequality and are always flagged
constant-dependent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .hpcore import NumericContext
from .points import BoundConstants
from .rules import KernelSpec, MeasureSpec


@dataclass(frozen=True)
class BoundReport:
    """A bound evaluation at one index.

    ``index`` is n, k, or a multi-index.  ``lower`` may be None for
    bounds that only have an upper form.  ``upper_adjusted`` is set only
    where a corrected constant exists.  ``constant_dependent`` marks
    bounds containing unknown constants; ``constants`` then records the
    placeholder values used, as (name, value) pairs.
    """

    index: object
    upper_nominal: object
    lower: object = None
    upper_adjusted: object = None
    constant_dependent: bool = False
    source: str = ""
    constants: tuple = ()

    def __post_init__(self):
        if self.lower is not None and not self.lower <= self.upper_nominal:
            raise ValueError("bound sandwich is inverted")


def error_constant(n: int, ctx: NumericContext):
    """C_n = 2^n n! / sqrt((2n)!) n^(-1/4); in (pi^(1/4), e (2 pi)^(-1/4)]."""
    if n < 1:
        raise ValueError(f"n={n} < 1")
    num = ctx.real(2**n * math.factorial(n))
    return num / ctx.sqrt(ctx.real(math.factorial(2 * n))) * ctx.real(n) ** ctx.real("-0.25")


def _rho_shape(alpha, ell, ctx: NumericContext):
    alpha = ctx.real(alpha)
    ell = ctx.real(ell)
    if not alpha > 0 or not ell > 0:
        raise ValueError("alpha and ell must be positive")
    s2 = alpha * alpha + ell * ell
    return alpha * alpha / s2, ell / ctx.sqrt(s2)


def first_omitted_error(alpha, ell, n: int, ctx: NumericContext):
    """The exact error of the n-point scaled rule on the first basis
    function it misses: I(phi_{2n}) - Q(phi_{2n}) =
    C_n shape (rho/2)^n n^(1/4).  Coincides with the lower bound."""
    rho, shape = _rho_shape(alpha, ell, ctx)
    return (
        error_constant(n, ctx) * shape * (rho / 2) ** n
        * ctx.real(n) ** ctx.real("0.25")
    )


def omitted_error_envelope(alpha, ell, q: int, ctx: NumericContext):
    """Envelope for the error on higher basis functions: for any rule
    size n <= q, |I(phi_{2q}) - Q(phi_{2q})| <= shape rho^q q^(-1/4) / C_q."""
    rho, shape = _rho_shape(alpha, ell, ctx)
    return (
        shape * rho**q * ctx.real(q) ** ctx.real("-0.25")
        / error_constant(q, ctx)
    )


def gh1d_bounds(alpha, ell, n: int, ctx: NumericContext) -> BoundReport:
    """The one-dimensional scaled Gauss-Hermite sandwich at size n."""
    if n < 1:
        raise ValueError(f"n={n} < 1")
    rho, shape = _rho_shape(alpha, ell, ctx)
    n_r = ctx.real(n)
    lower = first_omitted_error(alpha, ell, n, ctx)
    upper = (
        ctx.pi ** ctx.real("-0.25") * shape * rho**n
        * n_r ** ctx.real("-0.25")
    )
    adjusted = upper / ctx.sqrt(1 - rho * rho)
    return BoundReport(
        index=n, lower=lower, upper_nominal=upper, upper_adjusted=adjusted,
        source="scaled-gh-1d",
    )


def _check_space(measure: MeasureSpec, kernel: KernelSpec, n_multi):
    n_multi = tuple(int(v) for v in n_multi)
    if len(n_multi) != kernel.dim or measure.dim != kernel.dim:
        raise ValueError("multi-index/space dimension mismatch")
    if any(v < 1 for v in n_multi):
        raise ValueError("all rule sizes must be >= 1")
    return n_multi


def tensor_lower_term(measure: MeasureSpec, kernel: KernelSpec, n_multi,
                      i: int, ctx: NumericContext):
    """Exact error of the tensor scaled rule on the product test function
    that is basis index 2 n_i in coordinate i and constant otherwise:
    C_{n_i} [prod_j shape_j] (rho_i/2)^{n_i} n_i^(1/4)."""
    n_multi = _check_space(measure, kernel, n_multi)
    prefactor = ctx.real(1)
    for alpha, ell in zip(measure.stddevs, kernel.lengthscales):
        prefactor *= _rho_shape(alpha, ell, ctx)[1]
    rho_i, _ = _rho_shape(measure.stddevs[i], kernel.lengthscales[i], ctx)
    n_i = n_multi[i]
    return (
        error_constant(n_i, ctx) * prefactor * (rho_i / 2) ** n_i
        * ctx.real(n_i) ** ctx.real("0.25")
    )


def _upper_weight(measure: MeasureSpec, kernel: KernelSpec, i: int,
                  ctx: NumericContext):
    """shape_i discounted by the other coordinates' representer norms."""
    out = _rho_shape(measure.stddevs[i], kernel.lengthscales[i], ctx)[1]
    for j, (alpha, ell) in enumerate(zip(measure.stddevs, kernel.lengthscales)):
        if j != i:
            out *= (1 + 2 * alpha * alpha / (ell * ell)) ** ctx.real("-0.25")
    return out


def gh_tensor_bounds(measure: MeasureSpec, kernel: KernelSpec, n_multi,
                     ctx: NumericContext) -> BoundReport:
    """Sandwich for the tensor product of scaled Gauss-Hermite rules."""
    n_multi = _check_space(measure, kernel, n_multi)
    d = kernel.dim
    upper_terms = []
    for i in range(d):
        rho_i, _ = _rho_shape(measure.stddevs[i], kernel.lengthscales[i], ctx)
        n_i = ctx.real(n_multi[i])
        upper_terms.append(
            _upper_weight(measure, kernel, i, ctx) * rho_i ** n_multi[i]
            * n_i ** ctx.real("-0.25")
        )
    upper = ctx.pi ** ctx.real("-0.25") * ctx.fsum(upper_terms)
    lower = min(
        tensor_lower_term(measure, kernel, n_multi, i, ctx) for i in range(d)
    )
    return BoundReport(
        index=n_multi, lower=lower, upper_nominal=upper,
        source="scaled-gh-tensor",
    )


def decay_base(alpha, ell, ctx: NumericContext):
    """omega = 2 gamma^2 / (1 + 2 gamma^2 + sqrt(1 + 4 gamma^2)) < 1."""
    alpha = ctx.real(alpha)
    ell = ctx.real(ell)
    gamma2 = (alpha / ell) ** 2
    return 2 * gamma2 / (1 + 2 * gamma2 + ctx.sqrt(1 + 4 * gamma2))


def minimal_error_constant(n: int, alpha, ell, ctx: NumericContext):
    """The sequence multiplying the minimal-error lower bound:
    sqrt(2 (1+4 gamma^2)^(1/4) / ((1+2 gamma^2 + sqrt(1+4 gamma^2)) e))
    n!/(2n)! (4n/e)^n.  Decreasing, with a positive limit."""
    if n < 1:
        raise ValueError(f"n={n} < 1")
    alpha = ctx.real(alpha)
    ell = ctx.real(ell)
    gamma2 = (alpha / ell) ** 2
    root = ctx.sqrt(1 + 4 * gamma2)
    front = ctx.sqrt(2 * root ** ctx.real("0.5") / ((1 + 2 * gamma2 + root) * ctx.e))
    ratio = ctx.real(math.factorial(n)) / ctx.real(math.factorial(2 * n))
    return front * ratio * (4 * ctx.real(n) / ctx.e) ** n


def minimal_error_bounds_1d(alpha, ell, n: int, ctx: NumericContext) -> BoundReport:
    """Sandwich on the n-th minimal worst-case error (best possible
    n-point rule): the upper side is the scaled-rule bound, the lower
    side holds for every rule whatsoever."""
    if n < 1:
        raise ValueError(f"n={n} < 1")
    omega = decay_base(alpha, ell, ctx)
    lower = (
        minimal_error_constant(n, alpha, ell, ctx)
        * (omega * ctx.e / (4 * ctx.real(n))) ** n / (n + 1)
    )
    upper = gh1d_bounds(alpha, ell, n, ctx).upper_nominal
    return BoundReport(
        index=n, lower=lower, upper_nominal=upper, source="minimal-1d",
    )


def minimal_error_bounds_d(measure: MeasureSpec, kernel: KernelSpec, n_multi,
                           ctx: NumericContext) -> BoundReport:
    """Sandwich on the N-th minimal error with N + 1 = prod_i (n_i + 1)."""
    n_multi = _check_space(measure, kernel, n_multi)
    d = kernel.dim
    n_plus = 1
    for v in n_multi:
        n_plus *= v + 1
    lower = ctx.real(1)
    for i in range(d):
        alpha = measure.stddevs[i]
        ell = kernel.lengthscales[i]
        omega = decay_base(alpha, ell, ctx)
        n_i = n_multi[i]
        lower *= (
            minimal_error_constant(n_i, alpha, ell, ctx)
            * (omega * ctx.e / (4 * ctx.real(n_i))) ** n_i
        )
    lower /= n_plus
    upper_terms = []
    for i in range(d):
        rho_i, _ = _rho_shape(measure.stddevs[i], kernel.lengthscales[i], ctx)
        upper_terms.append(
            _upper_weight(measure, kernel, i, ctx) * rho_i ** n_multi[i]
            * ctx.real(n_multi[i]) ** ctx.real("-0.25")
        )
    upper = ctx.pi ** ctx.real("-0.25") * ctx.fsum(upper_terms)
    return BoundReport(
        index=n_multi, lower=lower, upper_nominal=upper, source="minimal-d",
    )


def kq_bound_generic(k: int, alpha, constants: BoundConstants,
                     ctx: NumericContext, nbar=None) -> BoundReport:
    """Per-window bound for optimal weights on the tiled set X_k:

        exp(-g(k)^2/(2 alpha^2))
          + C1 sum_{m=k-g(k)+1..k} exp(-[(k-m)^2/(2 alpha^2)
                                         + C2 nbar(m) log nbar(m)])

    with g(k) = floor(k + 1 - c_qu/hbar0), C1 = sqrt(2/pi)/alpha and
    C2 = big_c/(2 c_qu).  Constant-dependent through big_c and h0.
    """
    alpha = ctx.real(alpha)
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    c_qu = ctx.real(constants.c_qu)
    threshold = c_qu / constants.hbar0(ctx)
    if k < threshold:
        raise ValueError(
            f"k={k} below the validity threshold c_qu/hbar0 = "
            f"{ctx.nstr(threshold, 6)}"
        )
    if nbar is None:
        counts = {m: m for m in range(1, k + 1)}
    else:
        counts = {m: int(nbar(m)) for m in range(1, k + 1)}
    g = int(ctx.mp.floor(k + 1 - threshold))
    c1 = ctx.sqrt(ctx.real(2) / ctx.pi) / alpha
    c2 = ctx.real(constants.big_c) / (2 * c_qu)
    two_a2 = 2 * alpha * alpha
    terms = []
    for m in range(k - g + 1, k + 1):
        nb = ctx.real(counts[m])
        terms.append(
            ctx.exp(-((ctx.real(k - m) ** 2) / two_a2 + c2 * nb * ctx.log(nb)))
        )
    value = ctx.exp(-(ctx.real(g) ** 2) / two_a2) + c1 * ctx.fsum(terms)
    return BoundReport(
        index=k, upper_nominal=value, constant_dependent=True,
        source="kq-generic",
        constants=(
            ("big_c", constants.big_c), ("h0", constants.h0),
            ("c_qu", constants.c_qu),
        ),
    )


def kq_bound(n: int, alpha, big_c, d: int, ctx: NumericContext) -> BoundReport:
    """Asymptotic-form bound for optimal weights on tiled sets:
    C exp(-sqrt(n_per_dim)/(2 sqrt(2) alpha^2)) with n_per_dim = n^(1/d).

    ``n`` is the total point count; it must be m^d for m = k(k+1).
    Constant-dependent through C.
    """
    if d < 1:
        raise ValueError(f"dimension d={d} < 1")
    if n < 2:
        raise ValueError(f"point count n={n} < 2")
    per_dim = round(n ** (1 / d))
    for cand in (per_dim - 1, per_dim, per_dim + 1):
        if cand > 0 and cand**d == n:
            per_dim = cand
            break
    else:
        raise ValueError(f"n={n} is not a d={d} power of a per-dim count")
    k = int((math.isqrt(4 * per_dim + 1) - 1) // 2)
    if k * (k + 1) != per_dim:
        raise ValueError(
            f"per-dim count {per_dim} is not of the form k(k+1)"
        )
    alpha = ctx.real(alpha)
    value = ctx.real(big_c) * ctx.exp(
        -ctx.sqrt(ctx.real(per_dim)) / (2 * ctx.sqrt(ctx.real(2)) * alpha * alpha)
    )
    return BoundReport(
        index=k, upper_nominal=value, constant_dependent=True,
        source="kq-tiled", constants=(("big_c", big_c),),
    )
