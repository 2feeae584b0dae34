"""Quasi-uniform point sets on growing intervals.

The optimal-weight convergence theory needs point sets that cover a
window (-k, k) whose density per unit interval grows with the distance
the window has to reach: the construction takes a quasi-uniform base
sequence in (0, 1) (van der Corput by default, exact dyadic rationals)
and tiles

    X_k = union over m = 1..k of (Y_{nbar(k-m+1)} + (m-1)) and
                                  (Y_{nbar(k-m+1)} - m),

so the unit block (m-1, m) and its mirror (-m, 1-m) carry nbar(k-m+1)
points each: blocks near the origin are densest, outer blocks thinnest.
With the default nbar(m) = m the set X_k has k(k+1) points.

Fill distance here is the one-dimensional sup-min distance on an
interval, computed exactly from sorted gaps; the quasi-uniformity
constant of the base sequence, c_qu = sup_m m h(Y_m), is estimated by an
exhaustive scan and enters the convergence bounds through
hbar_0 = min(h_0, 1/c_qu).
"""

from __future__ import annotations

import bisect
import itertools
import warnings
from dataclasses import dataclass

from .hpcore import NumericContext


@dataclass(frozen=True)
class PointSet1D:
    """A finite sorted point set on the line.

    ``blocks`` (optional) labels each point with the (shift m, sign) pair
    identifying which tile of the X_k construction it came from; sign is
    +1 for the block (m-1, m), -1 for (-m, 1-m), and None for base sets.
    """

    points: tuple
    blocks: tuple | None = None

    def __post_init__(self):
        for i in range(len(self.points) - 1):
            if not self.points[i] < self.points[i + 1]:
                raise ValueError("points must be strictly increasing")
        if self.blocks is not None and len(self.blocks) != len(self.points):
            raise ValueError("one block label per point required")

    @property
    def size(self) -> int:
        return len(self.points)

    def block(self, m: int, sign: int) -> tuple:
        """All points carrying the label (m, sign)."""
        if self.blocks is None:
            raise ValueError("this point set has no block labels")
        return tuple(
            p for p, b in zip(self.points, self.blocks) if b == (m, sign)
        )


@dataclass(frozen=True)
class BoundConstants:
    """Constants entering the optimal-weight convergence bounds.

    ``big_c`` and ``h0`` come from a sampling inequality whose proof does
    not make them explicit; 1 is a documented placeholder, and every
    bound computed from them is flagged constant-dependent.  ``c_qu`` is
    the quasi-uniformity constant of the base sequence (2 covers the
    van der Corput sequence for every tested size; see
    quasi_uniformity_constant).
    """

    big_c: object = 1
    h0: object = 1
    c_qu: object = 2

    def hbar0(self, ctx: NumericContext):
        """min(h0, 1/c_qu), the fill-distance threshold the bounds use."""
        h0 = ctx.real(self.h0)
        c_qu = ctx.real(self.c_qu)
        if not h0 > 0 or not c_qu > 0:
            raise ValueError("h0 and c_qu must be positive")
        return min(h0, 1 / c_qu)


def van_der_corput(i: int, ctx: NumericContext):
    """The i-th van der Corput point in base 2 (i >= 1): the binary
    digits of i mirrored about the radix point.  Exact dyadic value."""
    if i < 1:
        raise ValueError(f"index i={i} < 1")
    num = 0
    den = 1
    while i:
        num = (num << 1) | (i & 1)
        den <<= 1
        i >>= 1
    return ctx.real(num) / ctx.real(den)


def y_set(m: int, ctx: NumericContext) -> PointSet1D:
    """The first m van der Corput points, sorted: a quasi-uniform set of
    size m in (0, 1)."""
    if m < 1:
        raise ValueError(f"set size m={m} < 1")
    return PointSet1D(
        points=tuple(sorted(van_der_corput(i, ctx) for i in range(1, m + 1)))
    )


def x_k(k: int, ctx: NumericContext, nbar=None) -> PointSet1D:
    """The tiled set X_k on (-k, k).

    ``nbar`` maps the per-block density index to a point count; it must
    be a strictly increasing positive integer sequence - by default
    ``nbar(m) = m``.  Block (m-1, m) and its mirror each receive
    nbar(k-m+1) points.
    """
    if k < 1:
        raise ValueError(f"window index k={k} < 1")
    if nbar is None:
        counts = list(range(1, k + 1))
    else:
        if callable(nbar):
            counts = [int(nbar(m)) for m in range(1, k + 1)]
        else:
            counts = [int(c) for c in nbar]
            if len(counts) < k:
                raise ValueError(f"nbar must provide {k} block counts")
            counts = counts[:k]
        if any(c < 1 for c in counts):
            raise ValueError("nbar must be positive")
        if any(a >= b for a, b in zip(counts, counts[1:])):
            raise ValueError("nbar must be strictly increasing")
    labelled = []
    for m in range(1, k + 1):
        base = y_set(counts[k - m], ctx).points
        for y in base:
            labelled.append((y + (m - 1), (m, 1)))
            labelled.append((y - m, (m, -1)))
    labelled.sort(key=lambda t: t[0])
    return PointSet1D(
        points=tuple(t[0] for t in labelled),
        blocks=tuple(t[1] for t in labelled),
    )


def fill_distance(points, a, b, ctx: NumericContext):
    """sup over x in (a, b) of the distance to the nearest point of
    ``points`` inside (a, b): max of the boundary reaches and half the
    interior gaps.  An empty intersection is the worst case b - a
    (reported with a warning)."""
    if isinstance(points, PointSet1D):
        points = points.points
    a = ctx.real(a)
    b = ctx.real(b)
    if not a < b:
        raise ValueError("need a < b")
    inside = sorted(p for p in points if a < p < b)
    if not inside:
        warnings.warn("no points inside the interval; fill distance is b - a")
        return b - a
    h = max(inside[0] - a, b - inside[-1])
    for p, q in zip(inside, inside[1:]):
        h = max(h, (q - p) / 2)
    return h


def quasi_uniformity_constant(m_max: int, ctx: NumericContext):
    """max over m = 1..m_max of m * h(Y_m, (0,1)): an exhaustive estimate
    of the quasi-uniformity constant of the van der Corput sequence."""
    if m_max < 1:
        raise ValueError(f"m_max={m_max} < 1")
    zero = ctx.real(0)
    one = ctx.real(1)
    pts = []
    best = zero
    for m in range(1, m_max + 1):
        bisect.insort(pts, van_der_corput(m, ctx))
        h = max(pts[0] - zero, one - pts[-1])
        for p, q in zip(pts, pts[1:]):
            h = max(h, (q - p) / 2)
        best = max(best, m * h)
    return best


def tensor_grid(sets) -> tuple:
    """Cartesian product of one-dimensional point sets, row-major (first
    factor slowest), as a tuple of d-tuples."""
    sets = [s.points if isinstance(s, PointSet1D) else tuple(s) for s in sets]
    if not sets:
        raise ValueError("tensor_grid needs at least one factor")
    return tuple(itertools.product(*sets))
