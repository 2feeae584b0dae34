"""Low-discrepancy point sets, tiling, fill distance, quasi-uniformity."""

import math
import warnings
from fractions import Fraction

import pytest

from gkquad import (
    PointSet1D,
    fill_distance,
    make_context,
    quasi_uniformity_constant,
    tensor_grid,
    van_der_corput,
    x_k,
    y_set,
)
from gkquad.points import BoundConstants


def _bit_reversal_oracle(i):
    # radical inverse in base 2 as an exact Fraction
    num, den = 0, 1
    while i:
        num = 2 * num + (i & 1)
        den *= 2
        i >>= 1
    return Fraction(num, den)


def test_van_der_corput_exact_dyadics(ctx50):
    ctx = ctx50
    want = ["0.5", "0.25", "0.75", "0.125", "0.625", "0.375", "0.875"]
    for i, w in enumerate(want, start=1):
        assert van_der_corput(i, ctx) == ctx.real(w)
    for i in range(1, 65):
        frac = _bit_reversal_oracle(i)
        assert van_der_corput(i, ctx) == ctx.real(frac)


def test_y_sets_sorted_and_nested(ctx50):
    ctx = ctx50
    prev = set()
    for m in range(1, 40):
        ps = y_set(m, ctx)
        assert ps.size == m
        pts = list(ps.points)
        assert pts == sorted(pts)
        assert all(0 < p < 1 for p in pts)
        cur = set(pts)
        assert prev <= cur
        prev = cur


def test_x_k_cardinality_and_nesting(ctx50):
    ctx = ctx50
    prev = set()
    for k in range(1, 15):
        ps = x_k(k, ctx)
        assert ps.size == k * (k + 1)
        pts = list(ps.points)
        assert pts == sorted(pts)
        assert len(set(pts)) == len(pts)
        cur = set(pts)
        assert prev <= cur  # nested windows
        prev = cur


def test_x_k_block_structure(ctx50):
    # X_k tiles (m-1, m) with Y sets of decreasing size: block (m, +1)
    # holds y + (m - 1) for y in Y_{k-m+1}'s set, block (m, -1) the
    # mirrored copy in (-m, -m+1).
    ctx = ctx50
    k = 4
    ps = x_k(k, ctx)
    for m in range(1, k + 1):
        size = k - m + 1
        plus = ps.block(m, +1)
        minus = ps.block(m, -1)
        assert len(plus) == len(minus) == size
        base = y_set(size, ctx).points
        assert sorted(plus) == sorted(y + (m - 1) for y in base)
        assert sorted(minus) == sorted(y - m for y in base)
    assert ps.block(k + 1, +1) == ()  # no such tile
    with pytest.raises(ValueError):
        y_set(2, ctx).block(1, +1)  # base sets carry no labels


def test_x_k_custom_counts(ctx50):
    ctx = ctx50
    ps = x_k(3, ctx, nbar=[2, 5, 9])
    assert ps.size == 2 * (2 + 5 + 9)
    with pytest.raises(ValueError):
        x_k(3, ctx, nbar=[2, 2, 3])  # must be strictly increasing
    with pytest.raises(ValueError):
        x_k(3, ctx, nbar=[0, 1, 2])
    with pytest.raises(ValueError):
        x_k(0, ctx)


def test_fill_distance_hand_values(ctx50):
    ctx = ctx50
    one = ctx.real(1)
    # Y_1 = {1/2} on (0,1): farthest points are the boundary, h = 1/2.
    assert fill_distance(y_set(1, ctx).points, 0, one, ctx) == ctx.real("0.5")
    # Y_3 = {1/4, 1/2, 3/4}: h = 1/4.
    assert fill_distance(y_set(3, ctx).points, 0, one, ctx) == ctx.real("0.25")
    # Y_6 adds {1/8, 5/8, 3/8}: sorted {1/8..7/8} step gaps max 1/4 at the
    # right boundary (7/8 -> 1 gives 1/8; interior max gap 1/8*2)
    h6 = fill_distance(y_set(6, ctx).points, 0, one, ctx)
    assert h6 == ctx.real("0.25")


def test_fill_distance_empty_set_warns(ctx50):
    ctx = ctx50
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        h = fill_distance([], 0, ctx.real(1), ctx)
    assert h == 1
    assert any("no points" in str(w.message).lower() for w in caught)


def test_block_fill_distances_shrink(ctx50):
    # Within X_k, the tile over (m-1, m) is filled by k-m+1 points, so its
    # fill distance is at most 2/(k-m+1) (quasi-uniformity with c_qu <= 2).
    ctx = ctx50
    for k in (4, 8, 12):
        ps = x_k(k, ctx)
        for m in range(1, k + 1):
            pts = sorted(ps.block(m, +1))
            h = fill_distance(pts, ctx.real(m - 1), ctx.real(m), ctx)
            assert h <= ctx.real(2) / (k - m + 1)


def test_quasi_uniformity_constant(ctx50):
    ctx = ctx50
    # sup over m <= 6 of m h(Y_m) is reached at m = 6: 6 * 1/4 = 3/2.
    assert quasi_uniformity_constant(6, ctx) == ctx.real("1.5")
    c = quasi_uniformity_constant(512, ctx)
    assert c <= 2


def test_point_set_validation(ctx50):
    ctx = ctx50
    with pytest.raises(ValueError):
        PointSet1D(points=(ctx.real(1), ctx.real(0)))
    with pytest.raises(ValueError):
        PointSet1D(points=(ctx.real(0), ctx.real(0)))
    with pytest.raises(ValueError):
        van_der_corput(0, ctx)


def test_tensor_grid_row_major(ctx50):
    ctx = ctx50
    a = PointSet1D(points=(ctx.real(0), ctx.real(1)))
    b = PointSet1D(points=(ctx.real(5), ctx.real(6), ctx.real(7)))
    grid = tensor_grid([a, b])
    assert len(grid) == 6
    assert grid[0] == (0, 5)
    assert grid[1] == (0, 6)
    assert grid[3] == (1, 5)
    # plain iterables work too
    grid2 = tensor_grid([[ctx.real(0), ctx.real(1)], [ctx.real(5)]])
    assert grid2 == ((0, 5), (1, 5))


def test_tensor_grid_count_matches_square(ctx50):
    ctx = ctx50
    ps = x_k(6, ctx)
    grid = tensor_grid([ps, ps])
    assert len(grid) == 42 * 42 == 1764


def test_bound_constants_validation(ctx50):
    ctx = ctx50
    c = BoundConstants()
    assert c.big_c == 1
    assert ctx.real(c.hbar0(ctx)) == ctx.real("0.5")  # min(1, 1/2)
    tight = BoundConstants(h0="0.25", c_qu="2")
    assert ctx.real(tight.hbar0(ctx)) == ctx.real("0.25")
    with pytest.raises(ValueError):
        BoundConstants(c_qu=0).hbar0(ctx)
