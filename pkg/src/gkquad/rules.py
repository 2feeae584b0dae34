"""Quadrature rules for Gaussian measures, and the scaled Gauss-Hermite family.

The integration problem is I(f) = E[f(X)] with X ~ N(0, diag(alpha_i^2)).
A plain Gauss-Hermite tensor rule is exact for polynomials, but the
integrands of interest carry the kernel envelope exp(-x^2/(2 ell^2)) per
coordinate.  Absorbing that envelope into the measure gives a narrower
Gaussian with standard deviation

    beta = sqrt(alpha^2 ell^2 / (alpha^2 + ell^2)),        1/beta^2 = 1/alpha^2 + 1/ell^2,

and the scaled rule places Gauss-Hermite nodes at scale beta while
multiplying each weight by (beta/alpha) exp(beta^2 x^2 / (2 ell^2)) so the
envelope is put back explicitly.  The n-point scaled rule integrates the
first 2n basis functions of the unit-norm envelope-weighted monomial basis
exactly; that exactness is what the worst-case error analysis runs on.

Weights of scaled rules are positive but sum to less than one (the
envelope damps mass); they are not a probability rule and are not meant
to be one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .hermite import gauss_hermite_rule
from .hpcore import NumericContext


@dataclass(frozen=True)
class KernelSpec:
    """Per-coordinate lengthscales of a product Gaussian kernel.

    K(x, y) = prod_i exp(-(x_i - y_i)^2 / (2 lengthscales[i]^2)).
    """

    lengthscales: tuple

    def __post_init__(self):
        if len(self.lengthscales) == 0:
            raise ValueError("KernelSpec needs at least one lengthscale")
        if any(not ell > 0 for ell in self.lengthscales):
            raise ValueError("lengthscales must be positive")

    @property
    def dim(self) -> int:
        return len(self.lengthscales)


@dataclass(frozen=True)
class MeasureSpec:
    """Per-coordinate standard deviations of a centered Gaussian measure."""

    stddevs: tuple

    def __post_init__(self):
        if len(self.stddevs) == 0:
            raise ValueError("MeasureSpec needs at least one stddev")
        if any(not a > 0 for a in self.stddevs):
            raise ValueError("stddevs must be positive")

    @property
    def dim(self) -> int:
        return len(self.stddevs)


def kernel_spec(values, ctx: NumericContext, dim: int | None = None) -> KernelSpec:
    """Build a KernelSpec, broadcasting a scalar to ``dim`` coordinates."""
    return KernelSpec(lengthscales=_coerce_tuple(values, ctx, dim))


def measure_spec(values, ctx: NumericContext, dim: int | None = None) -> MeasureSpec:
    """Build a MeasureSpec, broadcasting a scalar to ``dim`` coordinates."""
    return MeasureSpec(stddevs=_coerce_tuple(values, ctx, dim))


def _coerce_tuple(values, ctx: NumericContext, dim: int | None):
    if isinstance(values, (list, tuple)):
        out = tuple(ctx.real(v) for v in values)
        if dim is not None and len(out) != dim:
            raise ValueError(f"expected {dim} entries, got {len(out)}")
        return out
    return (ctx.real(values),) * (1 if dim is None else dim)


@dataclass(frozen=True)
class QuadratureRule:
    """A finite rule Q(f) = sum_i weights[i] f(points[i]).

    ``points`` holds N distinct d-tuples; ``weights`` N finite reals.
    ``provenance`` tags how the rule was built ("scaled-gh", "standard-gh",
    "optimal", or "custom"); the tag is informational and carried through
    to reports and CSV headers.
    """

    dim: int
    points: tuple
    weights: tuple
    provenance: str = "custom"

    def __post_init__(self):
        if len(self.points) < 1:
            raise ValueError("rule must have at least one point")
        if len(self.points) != len(self.weights):
            raise ValueError("points/weights length mismatch")
        for p in self.points:
            if len(p) != self.dim:
                raise ValueError(
                    f"point of length {len(p)} in a dim={self.dim} rule"
                )
        if len(set(self.points)) != len(self.points):
            raise ValueError("rule points must be distinct")

    @property
    def size(self) -> int:
        return len(self.points)


def effective_scale(alpha, ell, ctx: NumericContext):
    """Standard deviation of the product of N(0, alpha^2) with the kernel
    envelope: beta = alpha ell / sqrt(alpha^2 + ell^2)."""
    alpha = ctx.real(alpha)
    ell = ctx.real(ell)
    if not alpha > 0 or not ell > 0:
        raise ValueError("alpha and ell must be positive")
    return alpha * ell / ctx.sqrt(alpha * alpha + ell * ell)


def scaled_gh_rule(alpha, ell, n: int, ctx: NumericContext) -> QuadratureRule:
    """The n-point scaled Gauss-Hermite rule for (alpha, ell) in one
    dimension: nodes beta x_i, weights (beta/alpha) w_i exp(beta^2 x_i^2 /
    (2 ell^2)), where (x_i, w_i) is the unit-scale Gauss-Hermite rule."""
    alpha = ctx.real(alpha)
    ell = ctx.real(ell)
    beta = effective_scale(alpha, ell, ctx)
    base = gauss_hermite_rule(n, 1, ctx)
    ratio = beta / alpha
    two_ell2 = 2 * ell * ell
    points = []
    weights = []
    for x, w in zip(base.nodes, base.weights):
        bx = beta * x
        points.append((bx,))
        weights.append(ratio * w * ctx.exp(bx * bx / two_ell2))
    return QuadratureRule(
        dim=1, points=tuple(points), weights=tuple(weights),
        provenance="scaled-gh",
    )


def standard_gh_rule(alpha, n: int, ctx: NumericContext) -> QuadratureRule:
    """The plain n-point Gauss-Hermite rule for N(0, alpha^2), as a
    1-d QuadratureRule (the comparison baseline for the scaled family)."""
    base = gauss_hermite_rule(n, alpha, ctx)
    return QuadratureRule(
        dim=1,
        points=tuple((x,) for x in base.nodes),
        weights=tuple(base.weights),
        provenance="standard-gh",
    )


def tensor_rule(rules) -> QuadratureRule:
    """Tensor product of one-dimensional rules, row-major (the first
    factor's index varies slowest)."""
    rules = list(rules)
    if not rules:
        raise ValueError("tensor_rule needs at least one factor")
    for r in rules:
        if r.dim != 1:
            raise ValueError("tensor_rule factors must be one-dimensional")
    points = []
    weights = []
    for combo in itertools.product(*(range(r.size) for r in rules)):
        pt = tuple(r.points[i][0] for r, i in zip(rules, combo))
        w = rules[0].weights[combo[0]]
        for r, i in zip(rules[1:], combo[1:]):
            w = w * r.weights[i]
        points.append(pt)
        weights.append(w)
    tags = {r.provenance for r in rules}
    provenance = tags.pop() if len(tags) == 1 else "custom"
    return QuadratureRule(
        dim=len(rules), points=tuple(points), weights=tuple(weights),
        provenance=provenance,
    )


def apply_rule(rule: QuadratureRule, f, ctx: NumericContext):
    """Q(f) = sum_i w_i f(*points[i]); f receives one positional argument
    per coordinate.  The sum is compensated (single rounding)."""
    return ctx.fsum(w * f(*p) for p, w in zip(rule.points, rule.weights))
