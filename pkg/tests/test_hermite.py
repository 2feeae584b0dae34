"""Gauss-Hermite construction against closed forms and a double-precision
cross-check.

Small rules have hand-derivable nodes and weights: the probabilists'
polynomials He_2 = x^2 - 1, He_3 = x^3 - 3x, He_5 = x^5 - 10x^3 + 15x give
node sets {+-1}, {0, +-sqrt(3)}, {0, +-sqrt(5 +- sqrt(10))}, and the weight
at a node x of the n-point rule is n! / (n^2 He_{n-1}(x)^2).
"""

import math

import pytest

from gkquad import ConvergenceError, GaussHermiteRule, gauss_hermite_rule, make_context
from gkquad.hermite import hermite_pair, hermite_value


def _weight_closed_form(n, x, ctx):
    hprev = hermite_value(n - 1, x, ctx)
    return ctx.real(math.factorial(n)) / (n * n * hprev * hprev)


def test_hermite_recurrence_values(ctx50):
    ctx = ctx50
    x = ctx.real("0.7")
    assert hermite_value(0, x, ctx) == 1
    assert hermite_value(1, x, ctx) == x
    assert abs(hermite_value(2, x, ctx) - (x * x - 1)) < ctx.tolerance(2)
    assert abs(hermite_value(3, x, ctx) - (x**3 - 3 * x)) < ctx.tolerance(2)
    assert (
        abs(hermite_value(5, x, ctx) - (x**5 - 10 * x**3 + 15 * x))
        < ctx.tolerance(2)
    )
    hn, hm = hermite_pair(4, x, ctx)
    assert hn == hermite_value(4, x, ctx)
    assert hm == hermite_value(3, x, ctx)
    with pytest.raises(ValueError):
        hermite_pair(-1, x, ctx)


def test_rule_n1_is_midpoint(ctx50):
    rule = gauss_hermite_rule(1, 1, ctx50)
    assert rule.nodes == (0,)
    assert rule.weights == (1,)


def test_rule_n2_closed_form(ctx50):
    ctx = ctx50
    rule = gauss_hermite_rule(2, 1, ctx)
    tol = ctx.tolerance(5)
    assert abs(rule.nodes[0] + 1) < tol
    assert abs(rule.nodes[1] - 1) < tol
    assert abs(rule.weights[0] - ctx.real("0.5")) < tol
    assert abs(rule.weights[1] - ctx.real("0.5")) < tol


def test_rule_n3_closed_form(ctx50):
    ctx = ctx50
    rule = gauss_hermite_rule(3, 1, ctx)
    tol = ctx.tolerance(5)
    s3 = ctx.sqrt(ctx.real(3))
    assert abs(rule.nodes[0] + s3) < tol
    assert rule.nodes[1] == 0
    assert abs(rule.nodes[2] - s3) < tol
    # weights 1/6, 2/3, 1/6
    assert abs(rule.weights[0] - ctx.real(1) / 6) < tol
    assert abs(rule.weights[1] - ctx.real(2) / 3) < tol
    assert abs(rule.weights[2] - ctx.real(1) / 6) < tol


def test_rule_n5_closed_form(ctx100):
    ctx = ctx100
    rule = gauss_hermite_rule(5, 1, ctx)
    tol = ctx.tolerance(10)
    s10 = ctx.sqrt(ctx.real(10))
    expected = sorted(
        [
            -ctx.sqrt(5 + s10), -ctx.sqrt(5 - s10), ctx.real(0),
            ctx.sqrt(5 - s10), ctx.sqrt(5 + s10),
        ]
    )
    for node, want in zip(rule.nodes, expected):
        assert abs(node - want) < tol
    for node, w in zip(rule.nodes, rule.weights):
        assert abs(w - _weight_closed_form(5, node, ctx)) < tol


@pytest.mark.parametrize("n", [2, 3, 5, 8, 13, 20])
def test_weights_match_closed_form(n, ctx100):
    ctx = ctx100
    rule = gauss_hermite_rule(n, 1, ctx)
    tol = ctx.tolerance(12)
    for node, w in zip(rule.nodes, rule.weights):
        assert abs(w - _weight_closed_form(n, node, ctx)) < tol


def test_double_precision_cross_check(ctx50):
    # numpy's hermegauss uses the same normalization up to the weight
    # total: its weights sum to sqrt(2 pi).
    numpy = pytest.importorskip("numpy")
    from numpy.polynomial.hermite_e import hermegauss

    ctx = ctx50
    for n in (4, 9, 16):
        xs, ws = hermegauss(n)
        rule = gauss_hermite_rule(n, 1, ctx)
        total = math.sqrt(2 * math.pi)
        for node, x in zip(rule.nodes, xs):
            assert abs(float(node) - x) < 1e-12
        for weight, w in zip(rule.weights, ws):
            assert abs(float(weight) - w / total) < 1e-12


@pytest.mark.parametrize("n", [1, 2, 3, 7, 12, 25, 40])
def test_moment_exactness(n, ctx100):
    # Q(x^m) must equal the N(0,1) moment (m-1)!! for even m <= 2n-1,
    # zero for odd m; compared at a relative scale since high moments of
    # wide rules are large.
    ctx = ctx100
    rule = gauss_hermite_rule(n, 1, ctx)
    tol = ctx.tolerance(15)
    for m in range(0, 2 * n):
        q = ctx.fsum(w * x**m for x, w in zip(rule.nodes, rule.weights))
        mu = ctx.real(0) if m % 2 else ctx.real(
            math.factorial(m) // (2 ** (m // 2) * math.factorial(m // 2))
        )
        scale = max(ctx.real(1), ctx.fsum(
            w * abs(x) ** m for x, w in zip(rule.nodes, rule.weights)
        ))
        assert abs(q - mu) <= tol * scale


def test_first_missed_moment_error_is_n_factorial(ctx100):
    # I(x^(2n)) - Q(x^(2n)) = n! exactly for the n-point rule: the sharp
    # form of the degree-(2n-1) exactness boundary.
    ctx = ctx100
    for n in range(1, 12):
        rule = gauss_hermite_rule(n, 1, ctx)
        m = 2 * n
        q = ctx.fsum(w * x**m for x, w in zip(rule.nodes, rule.weights))
        mu = ctx.real(math.factorial(m) // (2**n * math.factorial(n)))
        diff = mu - q
        want = ctx.real(math.factorial(n))
        assert abs(diff - want) < ctx.tolerance(20) * want


def test_scaling_by_alpha(ctx50):
    ctx = ctx50
    base = gauss_hermite_rule(6, 1, ctx)
    scaled = gauss_hermite_rule(6, "2.5", ctx)
    a = ctx.real("2.5")
    for x, y in zip(base.nodes, scaled.nodes):
        assert abs(y - a * x) < ctx.tolerance(5)
    assert scaled.weights == base.weights


@pytest.mark.parametrize("n", list(range(1, 61)))
def test_structure_sweep(n, ctx50):
    ctx = ctx50
    rule = gauss_hermite_rule(n, 1, ctx)
    # strictly increasing, symmetric, positive weights summing to one
    for i in range(n - 1):
        assert rule.nodes[i] < rule.nodes[i + 1]
    for i in range(n // 2):
        assert rule.nodes[i] == -rule.nodes[n - 1 - i]
        assert rule.weights[i] == rule.weights[n - 1 - i]
    if n % 2 == 1:
        assert rule.nodes[n // 2] == 0
    assert all(w > 0 for w in rule.weights)
    assert abs(ctx.fsum(rule.weights) - 1) < ctx.tolerance(8)


@pytest.mark.parametrize("n", [100, 150, 200])
def test_large_rules_stay_healthy(n):
    ctx = make_context(40)
    rule = gauss_hermite_rule(n, 1, ctx)
    assert all(w > 0 for w in rule.weights)
    assert abs(ctx.fsum(rule.weights) - 1) < ctx.tolerance(6)


def test_validation_errors(ctx50):
    with pytest.raises(ValueError):
        gauss_hermite_rule(0, 1, ctx50)
    with pytest.raises(ValueError):
        gauss_hermite_rule(3, -1, ctx50)
    with pytest.raises(ValueError):
        GaussHermiteRule(n=2, alpha=1, nodes=(0,), weights=(1,))
    assert issubclass(ConvergenceError, RuntimeError)
