"""Bound evaluators against measured errors and frozen anchor values.

Anchors were derived by hand from the closed forms before implementation:
C_1 = sqrt(2) exactly, C_2 = 8/sqrt(24) 2^(-1/4) ~ 1.3731781,
omega(gamma=1) = 2/(3+sqrt(5)) ~ 0.3819660, and the tiled-set bound at
n = 42, alpha = C = 1 is exp(-sqrt(42)/(2 sqrt 2)) ~ 0.1011361.
"""

import itertools

import pytest

from gkquad import (
    BoundReport,
    apply_rule,
    basis_function,
    basis_function_1d,
    basis_integral,
    basis_integral_1d,
    decay_base,
    error_constant,
    first_omitted_error,
    gh1d_bounds,
    gh_tensor_bounds,
    kernel_spec,
    kq_bound,
    kq_bound_generic,
    make_context,
    measure_spec,
    minimal_error_bounds_1d,
    minimal_error_bounds_d,
    minimal_error_constant,
    omitted_error_envelope,
    scaled_gh_rule,
    tensor_lower_term,
    tensor_rule,
)
from gkquad.points import BoundConstants

GRID = ["0.5", "1", "2"]


def test_error_constant_anchors(ctx50):
    ctx = ctx50
    assert abs(error_constant(1, ctx) - ctx.sqrt(ctx.real(2))) < ctx.tolerance(5)
    c2 = ctx.real(8) / ctx.sqrt(ctx.real(24)) * ctx.real(2) ** ctx.real("-0.25")
    assert abs(error_constant(2, ctx) - c2) < ctx.tolerance(5)
    assert abs(float(error_constant(2, ctx)) - 1.3731781) < 1e-6


def test_error_constant_monotone_and_bounded(ctx50):
    ctx = ctx50
    pi4 = ctx.pi ** ctx.real("0.25")
    cap = ctx.e * (2 * ctx.pi) ** ctx.real("-0.25")
    prev = None
    for n in range(1, 501):
        c = error_constant(n, ctx)
        assert pi4 < c <= cap
        if prev is not None:
            assert c < prev
        prev = c


def test_error_constant_limit(ctx50):
    ctx = ctx50
    pi4 = ctx.pi ** ctx.real("0.25")
    assert abs(error_constant(10**4, ctx) - pi4) < ctx.real("0.01")


@pytest.mark.parametrize("a_s,l_s", list(itertools.product(GRID, GRID)))
def test_first_omitted_error_is_measured_error(a_s, l_s, ctx100):
    # The lower bound is an identity: it equals the actual error of the
    # n-point scaled rule on basis function 2n.
    ctx = ctx100
    alpha, ell = ctx.real(a_s), ctx.real(l_s)
    for n in range(1, 16):
        rule = scaled_gh_rule(alpha, ell, n, ctx)
        q = apply_rule(
            rule, lambda x: basis_function_1d(ell, 2 * n, x, ctx), ctx
        )
        i = basis_integral_1d(alpha, ell, 2 * n, ctx)
        predicted = first_omitted_error(alpha, ell, n, ctx)
        assert abs((i - q) - predicted) < ctx.tolerance(25)
        assert i - q > 0  # the rule undershoots on the first missed one


def test_omitted_error_envelope_covers_all_rules(ctx100):
    # For every rule size n and every q >= n the measured basis error
    # stays under the envelope at q.
    ctx = ctx100
    for a_s, l_s in [("1", "1"), ("0.5", "2"), ("2", "0.5")]:
        alpha, ell = ctx.real(a_s), ctx.real(l_s)
        for n in range(1, 11):
            rule = scaled_gh_rule(alpha, ell, n, ctx)
            for q in range(n, 31):
                qv = apply_rule(
                    rule,
                    lambda x: basis_function_1d(ell, 2 * q, x, ctx), ctx,
                )
                iv = basis_integral_1d(alpha, ell, 2 * q, ctx)
                env = omitted_error_envelope(alpha, ell, q, ctx)
                assert abs(iv - qv) <= env * (1 + ctx.tolerance(25))


def test_gh1d_anchor_values(ctx50):
    ctx = ctx50
    rep = gh1d_bounds(1, 1, 1, ctx)
    assert abs(rep.lower - ctx.real("0.25")) < ctx.tolerance(5)
    assert abs(float(rep.upper_nominal) - 0.2655630) < 1e-4
    assert abs(float(rep.upper_adjusted) - 0.3066457) < 1e-4
    rep2 = gh1d_bounds(1, 1, 2, ctx)
    assert abs(float(rep2.lower) - 0.0721688) < 1e-4
    assert abs(float(rep2.upper_nominal) - 0.1116555) < 1e-4
    assert rep.source == "scaled-gh-1d"


def test_gh1d_nominal_upper_fails_only_at_n1(ctx100):
    # The unadjusted constant is wrong at n = 1 for alpha = ell = 1 (the
    # measured error 0.27812 exceeds 0.26557); the adjusted constant
    # restores the sandwich there.
    from gkquad import wce_closed_form

    ctx = ctx100
    m = measure_spec("1", ctx)
    k = kernel_spec("1", ctx)
    rule = scaled_gh_rule(1, 1, 1, ctx)
    wce = wce_closed_form(rule, m, k, ctx).wce
    rep = gh1d_bounds(1, 1, 1, ctx)
    assert wce > rep.upper_nominal  # the documented violation
    assert wce <= rep.upper_adjusted
    assert float(wce) > 0.27811 and float(rep.upper_nominal) < 0.26557


@pytest.mark.parametrize("a_s,l_s", list(itertools.product(GRID, GRID)))
def test_gh1d_adjusted_always_dominates(a_s, l_s, ctx50):
    ctx = ctx50
    for n in range(1, 31):
        rep = gh1d_bounds(a_s, l_s, n, ctx)
        assert rep.lower <= rep.upper_nominal < rep.upper_adjusted


def test_tensor_anchor_values(ctx50):
    ctx = ctx50
    m = measure_spec("1", ctx, dim=2)
    k = kernel_spec("1", ctx, dim=2)
    rep = gh_tensor_bounds(m, k, (1, 1), ctx)
    assert abs(float(rep.upper_nominal) - 0.40357) < 1e-4
    assert abs(float(rep.lower) - 0.17678) < 1e-4


def test_tensor_reduces_to_1d(ctx50):
    ctx = ctx50
    m = measure_spec("0.5", ctx)
    k = kernel_spec("2", ctx)
    t = gh_tensor_bounds(m, k, (4,), ctx)
    s = gh1d_bounds("0.5", "2", 4, ctx)
    assert abs(t.upper_nominal - s.upper_nominal) < ctx.tolerance(5)
    assert abs(t.lower - s.lower) < ctx.tolerance(5)


def test_tensor_lower_term_is_measured_error(ctx100):
    # The d-dimensional lower bound is the exact tensor-rule error on the
    # product test function carrying basis index 2 n_i in coordinate i.
    ctx = ctx100
    m = measure_spec(["1", "0.5"], ctx)
    k = kernel_spec(["1", "2"], ctx)
    for n_multi in [(1, 1), (2, 3), (4, 2), (6, 6)]:
        rule = tensor_rule([
            scaled_gh_rule("1", "1", n_multi[0], ctx),
            scaled_gh_rule("0.5", "2", n_multi[1], ctx),
        ])
        for i in range(2):
            idx = [0, 0]
            idx[i] = 2 * n_multi[i]
            q = apply_rule(
                rule, lambda *x: basis_function(k, idx, x, ctx), ctx
            )
            iv = basis_integral(m, k, idx, ctx)
            want = tensor_lower_term(m, k, n_multi, i, ctx)
            assert abs((iv - q) - want) < ctx.tolerance(25)


def test_tensor_validation(ctx50):
    ctx = ctx50
    m = measure_spec("1", ctx, dim=2)
    k = kernel_spec("1", ctx, dim=2)
    with pytest.raises(ValueError):
        gh_tensor_bounds(m, k, (1,), ctx)
    with pytest.raises(ValueError):
        gh_tensor_bounds(m, k, (1, 0), ctx)


def test_decay_base_anchor(ctx50):
    ctx = ctx50
    want = 2 / (3 + ctx.sqrt(ctx.real(5)))
    assert abs(decay_base(1, 1, ctx) - want) < ctx.tolerance(5)
    assert abs(float(want) - 0.3819660) < 1e-6
    # omega < rho/... omega is strictly inside (0, 1) and increases with
    # gamma = alpha/ell
    assert decay_base("0.5", "1", ctx) < decay_base("1", "1", ctx) < 1


def test_minimal_error_constant_decreasing_with_positive_limit(ctx50):
    ctx = ctx50
    gamma2 = ctx.real(1)
    root = ctx.sqrt(1 + 4 * gamma2)
    limit = ctx.sqrt(root ** ctx.real("0.5") / ((1 + 2 * gamma2 + root) * ctx.e))
    prev = None
    for n in list(range(1, 201)):
        c = minimal_error_constant(n, 1, 1, ctx)
        assert c > limit
        if prev is not None:
            assert c < prev
        prev = c
    big = minimal_error_constant(2000, 1, 1, ctx)
    assert abs(big - limit) < ctx.real("0.001")


def test_minimal_bounds_1d_structure(ctx50):
    ctx = ctx50
    for a_s, l_s in itertools.product(GRID, GRID):
        for n in (1, 2, 5, 12):
            rep = minimal_error_bounds_1d(a_s, l_s, n, ctx)
            assert 0 < rep.lower < rep.upper_nominal
            assert rep.source == "minimal-1d"
            # the upper side is the scaled-rule bound
            gh = gh1d_bounds(a_s, l_s, n, ctx)
            assert rep.upper_nominal == gh.upper_nominal


def test_minimal_bounds_d_reduces_to_1d(ctx50):
    ctx = ctx50
    m = measure_spec("2", ctx)
    k = kernel_spec("0.5", ctx)
    a = minimal_error_bounds_d(m, k, (5,), ctx)
    b = minimal_error_bounds_1d("2", "0.5", 5, ctx)
    assert abs(a.lower - b.lower) < ctx.tolerance(5)
    assert abs(a.upper_nominal - b.upper_nominal) < ctx.tolerance(5)


def test_minimal_bounds_d_2d_value(ctx100):
    # The lower side must sit below the measured error of the matching
    # tensor rule (it bounds the best possible rule of that size).
    from gkquad import wce_closed_form

    ctx = ctx100
    m = measure_spec("1", ctx, dim=2)
    k = kernel_spec("1", ctx, dim=2)
    for n in ((1, 1), (2, 2), (3, 2)):
        rep = minimal_error_bounds_d(m, k, n, ctx)
        rule = tensor_rule([
            scaled_gh_rule(1, 1, n[0], ctx), scaled_gh_rule(1, 1, n[1], ctx),
        ])
        wce = wce_closed_form(rule, m, k, ctx).wce
        assert rep.lower < wce
        # and below the per-rule count 1-d bound at the same total size
        total = n[0] * n[1]
        assert rep.lower < minimal_error_bounds_1d("1", "1", total, ctx).upper_nominal


def test_kq_generic_anchor_and_structure(ctx50):
    ctx = ctx50
    constants = BoundConstants(big_c=1, h0=1, c_qu=1)
    # c_qu = 1: hbar0 = 1, threshold 1, g(k) = k; recompute the advertised
    # formula from scratch and compare.
    k = 7
    rep = kq_bound_generic(k, 1, constants, ctx)
    c1 = ctx.sqrt(2 / ctx.pi)
    want = ctx.exp(-ctx.real(k * k) / 2) + c1 * ctx.fsum(
        ctx.exp(
            -(ctx.real((k - m) ** 2) / 2 + ctx.real("0.5") * m * ctx.log(ctx.real(m)))
        )
        for m in range(1, k + 1)
    )
    assert abs(rep.upper_nominal - want) < ctx.tolerance(10)
    assert rep.constant_dependent
    assert dict(rep.constants)["big_c"] == 1
    assert abs(float(c1) - 0.7978846) < 1e-6


def test_kq_generic_threshold_and_decay(ctx50):
    ctx = ctx50
    constants = BoundConstants()  # c_qu = 2, h0 = 1 -> threshold 4
    with pytest.raises(ValueError):
        kq_bound_generic(3, 1, constants, ctx)
    prev = None
    for k in range(5, 31):
        v = kq_bound_generic(k, 1, constants, ctx).upper_nominal
        assert v > 0
        if prev is not None:
            assert v < prev
        prev = v


def test_kq_bound_anchor(ctx50):
    ctx = ctx50
    rep = kq_bound(42, 1, 1, 1, ctx)
    want = ctx.exp(-ctx.sqrt(ctx.real(42)) / (2 * ctx.sqrt(ctx.real(2))))
    assert abs(rep.upper_nominal - want) < ctx.tolerance(10)
    assert abs(float(rep.upper_nominal) - 0.1011361) < 1e-6
    assert rep.index == 6  # 42 = 6*7
    # d = 2: total count is the square
    rep2 = kq_bound(36, 1, 1, 2, ctx)
    want2 = ctx.exp(-ctx.sqrt(ctx.real(6)) / (2 * ctx.sqrt(ctx.real(2))))
    assert abs(rep2.upper_nominal - want2) < ctx.tolerance(10)


def test_kq_bound_rejects_malformed_counts(ctx50):
    ctx = ctx50
    with pytest.raises(ValueError):
        kq_bound(43, 1, 1, 1, ctx)  # not k(k+1)
    with pytest.raises(ValueError):
        kq_bound(35, 1, 1, 2, ctx)  # not a square
    with pytest.raises(ValueError):
        kq_bound(42, 1, 1, 0, ctx)


def test_bound_report_rejects_inverted_sandwich():
    with pytest.raises(ValueError):
        BoundReport(index=1, upper_nominal=0.1, lower=0.2)
