"""Probabilists' Hermite polynomials and Gauss-Hermite rules.

Everything here is relative to the standard normal weight: He_0 = 1,
He_1 = x, He_{k+1}(x) = x He_k(x) - k He_{k-1}(x), orthogonal under
N(0,1) with ||He_n||^2 = n!, and He_n'(x) = n He_{n-1}(x).

The n-point rule is exact for polynomials of degree <= 2n-1 against
N(0, alpha^2).  Nodes and weights come from the symmetric tridiagonal
Jacobi matrix (zero diagonal, off-diagonal sqrt(k)): eigenvalues are the
nodes, squared first eigenvector components the weights.  The eigensolver
is an implicit-shift QL iteration that tracks only the first row of the
accumulated rotation product; each node then gets one Newton step on
He_n (error is squared, so a QL residual of 10^-(digits-10) lands below
working precision), and node/weight pairs are symmetrized about zero so
the +-x_i pairing is exact and the middle node of an odd rule is exactly
zero.  Any silent accuracy loss is converted into an exception: the QL
sweep budget is 100 n, and nonpositive weights abort the construction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .hpcore import ConvergenceError, NumericContext

_SWEEP_BUDGET_PER_NODE = 100


@dataclass(frozen=True)
class GaussHermiteRule:
    """An n-point Gauss-Hermite rule for the measure N(0, alpha^2).

    ``nodes`` are strictly increasing and symmetric about zero;
    ``weights`` are positive and sum to one (they are probabilities:
    the zeroth moment of a probability measure).
    """

    n: int
    alpha: object
    nodes: tuple
    weights: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"rule size n={self.n} < 1")
        if len(self.nodes) != self.n or len(self.weights) != self.n:
            raise ValueError("nodes/weights length does not match n")


def hermite_value(n: int, x, ctx: NumericContext):
    """He_n(x) by the three-term recurrence."""
    return hermite_pair(n, x, ctx)[0]


def hermite_pair(n: int, x, ctx: NumericContext):
    """Return (He_n(x), He_{n-1}(x)); He_{-1} is reported as 0."""
    if n < 0:
        raise ValueError(f"Hermite degree n={n} < 0")
    one = ctx.real(1)
    if n == 0:
        return one, ctx.real(0)
    prev, cur = one, x
    for k in range(1, n):
        prev, cur = cur, x * cur - k * prev
    return cur, prev


def _tridiag_eigen_first_row(diag, off, ctx: NumericContext):
    """Eigenvalues and first-row eigenvector components of a symmetric
    tridiagonal matrix, by implicit-shift QL.

    ``diag`` has length n, ``off`` length n-1.  Returns (values, firstrow)
    sorted by ascending eigenvalue; ``firstrow[i]`` is the first component
    of the unit eigenvector for ``values[i]``.  Deflation uses a relative
    off-diagonal threshold of 10^-(digits-10); the total sweep budget is
    100 n.
    """
    mp = ctx.mp
    n = len(diag)
    d = [mp.mpf(v) for v in diag]
    e = [mp.mpf(v) for v in off] + [mp.mpf(0)]
    z = [mp.mpf(0)] * n
    z[0] = mp.mpf(1)
    if n == 1:
        return d, z

    eps = ctx.tolerance(10)
    budget = _SWEEP_BUDGET_PER_NODE * n
    sweeps = 0
    zero = mp.mpf(0)
    one = mp.mpf(1)

    for l in range(n):
        while True:
            m = l
            while m < n - 1:
                if abs(e[m]) <= eps * (abs(d[m]) + abs(d[m + 1])):
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > budget:
                raise ConvergenceError(
                    f"QL iteration exceeded {budget} sweeps at size {n}"
                )
            # Shift from the 2x2 block at the low end of the active window.
            g = (d[l + 1] - d[l]) / (2 * e[l])
            r = ctx.hypot(g, one)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0 else -r))
            s = one
            c = one
            p = zero
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = ctx.hypot(f, g)
                e[i + 1] = r
                if r == zero:
                    d[i + 1] -= p
                    e[m] = zero
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                fz = z[i + 1]
                z[i + 1] = s * z[i] + c * fz
                z[i] = c * z[i] - s * fz
            else:
                d[l] -= p
                e[l] = g
                e[m] = zero

    order = sorted(range(n), key=lambda i: d[i])
    return [d[i] for i in order], [z[i] for i in order]


def gauss_hermite_rule(n: int, alpha, ctx: NumericContext) -> GaussHermiteRule:
    """Construct the n-point Gauss-Hermite rule for N(0, alpha^2)."""
    if n < 1:
        raise ValueError(f"rule size n={n} < 1")
    mp = ctx.mp
    alpha = ctx.real(alpha)
    if not alpha > 0:
        raise ValueError("alpha must be positive")

    if n == 1:
        return GaussHermiteRule(
            n=1, alpha=alpha, nodes=(mp.mpf(0) * alpha,),
            weights=(mp.mpf(1),),
        )

    diag = [mp.mpf(0)] * n
    off = [mp.sqrt(k) for k in range(1, n)]
    vals, first = _tridiag_eigen_first_row(diag, off, ctx)

    # One Newton step per node: x <- x - He_n(x) / (n He_{n-1}(x)).
    nodes = []
    for t in vals:
        hn, hprev = hermite_pair(n, t, ctx)
        nodes.append(t - hn / (n * hprev))
    weights = [zi * zi for zi in first]

    # Symmetrize: average each +-x pair, pin the middle of an odd rule at 0.
    for i in range(n // 2):
        j = n - 1 - i
        v = (nodes[j] - nodes[i]) / 2
        nodes[j] = v
        nodes[i] = -v
        w = (weights[i] + weights[j]) / 2
        weights[i] = w
        weights[j] = w
    if n % 2 == 1:
        nodes[n // 2] = mp.mpf(0)

    for i in range(n - 1):
        if not nodes[i] < nodes[i + 1]:
            raise ConvergenceError(
                f"nodes not strictly increasing at size {n}"
            )
    if any(not w > 0 for w in weights):
        raise ConvergenceError(f"nonpositive weight at size {n}")

    return GaussHermiteRule(
        n=n,
        alpha=alpha,
        nodes=tuple(alpha * x for x in nodes),
        weights=tuple(weights),
    )
