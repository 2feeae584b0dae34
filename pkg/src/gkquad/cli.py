"""Command-line surface: rules, errors, bounds, point sets, decay studies.

Subcommands
-----------
rule      emit one rule (points and weights) as CSV
wce       compute the worst-case error of one configured rule
bounds    evaluate bound columns over an index range
points    emit a point set as CSV
figure1   scaled vs standard Gauss-Hermite decay study (CSV + plot)
figure2   optimal weights on tiled grids vs the decay bound (CSV + plot)
ratefit   fit a geometric decay rate to a column of an earlier CSV

Exit codes: 0 success; 2 configuration errors (including flag parsing);
3 precision exhaustion or iteration failure, with the suggested retry
precision on stderr when one is available.

All numeric output is deterministic for a fixed configuration: numbers
render at min(digits, 50) significant digits and the CSV comment block
records the configuration itself, never timestamps.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from dataclasses import dataclass

from .bounds import (
    gh1d_bounds,
    gh_tensor_bounds,
    kq_bound,
    kq_bound_generic,
    minimal_error_bounds_1d,
    minimal_error_bounds_d,
)
from .hpcore import ConvergenceError, NumericContext, PrecisionError, make_context
from .optimal import optimal_product_rule, optimal_product_wce
from .points import BoundConstants, tensor_grid, x_k, y_set
from .reporting import render_csv, render_decay_plot, write_output
from .rkhs import (
    basis_function_1d,
    basis_integral_1d,
    wce_closed_form,
    wce_series,
)
from .rules import (
    QuadratureRule,
    kernel_spec,
    measure_spec,
    scaled_gh_rule,
    standard_gh_rule,
    tensor_rule,
)

RULE_FAMILIES = ("scaled-gh", "standard-gh", "optimal")


@dataclass(frozen=True)
class RateFit:
    """Least-squares geometric decay fit: value ~ const * r^x."""

    r: object
    window: tuple
    residual: object


def fit_geometric_rate(xs, values, ctx: NumericContext) -> RateFit:
    """Fit log(value) = a + x log(r) by least squares; the residual is
    the RMS deviation of the log values from the fitted line."""
    xs = [ctx.real(x) for x in xs]
    values = list(values)
    if len(xs) != len(values) or len(xs) < 3:
        raise ValueError("rate fitting needs at least 3 aligned samples")
    if any(not v > 0 for v in values):
        raise ValueError("rate fitting needs positive values")
    logs = [ctx.log(v) for v in values]
    n = len(xs)
    x_mean = ctx.fsum(xs) / n
    y_mean = ctx.fsum(logs) / n
    sxx = ctx.fsum((x - x_mean) ** 2 for x in xs)
    if not sxx > 0:
        raise ValueError("rate fitting needs distinct x values")
    sxy = ctx.fsum((x - x_mean) * (y - y_mean) for x, y in zip(xs, logs))
    slope = sxy / sxx
    intercept = y_mean - slope * x_mean
    resid2 = ctx.fsum(
        (y - (intercept + slope * x)) ** 2 for x, y in zip(xs, logs)
    )
    return RateFit(
        r=ctx.exp(slope),
        window=(min(xs), max(xs)),
        residual=ctx.sqrt(resid2 / n),
    )


# -- argument plumbing ----------------------------------------------------


def _parse_range(text: str):
    """'a:b' (inclusive) or a single integer."""
    if ":" in text:
        lo_s, hi_s = text.split(":", 1)
        lo, hi = int(lo_s), int(hi_s)
        if hi < lo:
            raise ValueError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    return [int(text)]


def _parse_scalars(text: str):
    return [part.strip() for part in text.split(",") if part.strip()]


def _broadcast(values, dim: int, name: str):
    if len(values) == 1:
        return values * dim
    if len(values) != dim:
        raise ValueError(
            f"--{name} has {len(values)} entries for dim {dim}"
        )
    return values


def _specs(args, ctx: NumericContext):
    dim = args.dim
    if dim < 1:
        raise ValueError(f"--dim must be >= 1, got {dim}")
    alphas = _broadcast(_parse_scalars(args.alpha), dim, "alpha")
    ells = _broadcast(_parse_scalars(args.ell), dim, "ell")
    return measure_spec(alphas, ctx), kernel_spec(ells, ctx)


def _config_lines(args, extra=()):
    lines = [
        f"alpha: {args.alpha}",
        f"ell: {args.ell}",
        f"dim: {args.dim}",
    ]
    lines.extend(extra)
    return lines


def _single_index(args) -> tuple:
    """The (--n | --k) selector shared by rule and wce."""
    if args.family == "optimal":
        if args.k is None:
            raise ValueError("--family optimal needs --k")
        if args.k < 1:
            raise ValueError("--k must be >= 1")
        return ("k", args.k)
    if args.n is None:
        raise ValueError(f"--family {args.family} needs --n")
    if args.n < 1:
        raise ValueError("--n must be >= 1")
    return ("n", args.n)


def _build_rule(args, measure, kernel, ctx) -> QuadratureRule:
    kind, value = _single_index(args)
    if args.family == "optimal":
        sets = [x_k(value, ctx).points for _ in range(kernel.dim)]
        return optimal_product_rule(measure, kernel, sets, ctx)
    factors = []
    for alpha, ell in zip(measure.stddevs, kernel.lengthscales):
        if args.family == "scaled-gh":
            factors.append(scaled_gh_rule(alpha, ell, value, ctx))
        else:
            factors.append(standard_gh_rule(alpha, value, ctx))
    return factors[0] if len(factors) == 1 else tensor_rule(factors)


# -- subcommand handlers --------------------------------------------------


def _cmd_rule(args) -> int:
    ctx = make_context(args.digits)
    measure, kernel = _specs(args, ctx)
    kind, value = _single_index(args)
    rule = _build_rule(args, measure, kernel, ctx)
    header = [f"x{i + 1}" for i in range(rule.dim)] + ["weight"]
    rows = [list(p) + [w] for p, w in zip(rule.points, rule.weights)]
    text = render_csv(
        "rule",
        _config_lines(args, [f"family: {args.family}", f"{kind}: {value}",
                             f"points: {rule.size}"]),
        header, rows, ctx,
    )
    write_output(text, args.out)
    return 0


def _spot_check_lines(args, rule, report, measure, kernel, ctx):
    """Sample random unit-norm finite basis combinations and compare
    |I(f) - Q(f)| against the worst-case error (one dimension only)."""
    if kernel.dim != 1:
        raise ValueError("--spot-check supports dim 1 only")
    alpha = measure.stddevs[0]
    ell = kernel.lengthscales[0]
    m_top = 40
    rng = random.Random(args.seed)
    slack = ctx.real(10) ** -30
    worst = None
    for _ in range(args.spot_check):
        coeffs = [
            ctx.real(rng.getrandbits(53) - 2**52) / ctx.real(2**52)
            for _ in range(m_top + 1)
        ]
        norm = ctx.sqrt(ctx.fsum(c * c for c in coeffs))
        coeffs = [c / norm for c in coeffs]
        i_f = ctx.fsum(
            c * basis_integral_1d(alpha, ell, m, ctx)
            for m, c in enumerate(coeffs)
        )
        q_f = ctx.fsum(
            w * ctx.fsum(
                c * basis_function_1d(ell, m, p[0], ctx)
                for m, c in enumerate(coeffs)
            )
            for p, w in zip(rule.points, rule.weights)
        )
        margin = abs(i_f - q_f) - report.wce
        if worst is None or margin > worst:
            worst = margin
    if worst > slack:
        raise PrecisionError(
            f"spot check violated the worst-case error by {ctx.nstr(worst, 6)}"
        )
    return [
        f"spot-check: {args.spot_check} samples, seed {args.seed}, "
        f"max |I(f)-Q(f)| - wce = {ctx.nstr(worst, 6)}"
    ]


def _cmd_wce(args) -> int:
    ctx = make_context(args.digits)
    measure, kernel = _specs(args, ctx)
    kind, value = _single_index(args)
    extra = [f"family: {args.family}", f"{kind}: {value}"]
    rows = []
    if args.family == "optimal":
        sets = [x_k(value, ctx).points for _ in range(kernel.dim)]
        report = optimal_product_wce(measure, kernel, sets, ctx)
        rule = None
    else:
        rule = _build_rule(args, measure, kernel, ctx)
        report = wce_closed_form(rule, measure, kernel, ctx)
    rows.append([args.family, value, report.rule_size, report.method,
                 report.wce])
    if args.series:
        if rule is None:
            rule = _build_rule(args, measure, kernel, ctx)
        series = wce_series(rule, measure, kernel, ctx)
        rows.append([args.family, value, series.rule_size, series.method,
                     series.wce])
        extra.append(f"series truncation order: {series.truncation_order}")
    if args.spot_check:
        if rule is None:
            rule = _build_rule(args, measure, kernel, ctx)
        extra.extend(
            _spot_check_lines(args, rule, report, measure, kernel, ctx)
        )
    text = render_csv(
        "wce", _config_lines(args, extra),
        ["family", "index", "size", "method", "wce"], rows, ctx,
    )
    write_output(text, args.out)
    return 0


def _cmd_bounds(args) -> int:
    ctx = make_context(args.digits)
    measure, kernel = _specs(args, ctx)
    extra = [f"family: {args.family}"]
    if args.family in ("scaled-gh", "minimal"):
        if args.n is None:
            raise ValueError(f"--family {args.family} needs --n")
        indices = _parse_range(args.n)
        extra.append(f"n: {args.n}")
        rows = []
        if kernel.dim == 1:
            alpha = measure.stddevs[0]
            ell = kernel.lengthscales[0]
            if args.family == "scaled-gh":
                header = ["n", "lower", "upper_nominal", "upper_adjusted"]
                for n in indices:
                    rep = gh1d_bounds(alpha, ell, n, ctx)
                    rows.append([n, rep.lower, rep.upper_nominal,
                                 rep.upper_adjusted])
            else:
                header = ["n", "lower", "upper_nominal"]
                for n in indices:
                    rep = minimal_error_bounds_1d(alpha, ell, n, ctx)
                    rows.append([n, rep.lower, rep.upper_nominal])
        else:
            header = ["n_per_dim", "lower", "upper_nominal"]
            for n in indices:
                multi = (n,) * kernel.dim
                rep = (
                    gh_tensor_bounds(measure, kernel, multi, ctx)
                    if args.family == "scaled-gh"
                    else minimal_error_bounds_d(measure, kernel, multi, ctx)
                )
                rows.append([n, rep.lower, rep.upper_nominal])
    elif args.family == "kq":
        if kernel.dim != 1:
            raise ValueError("--family kq bounds are per coordinate; use dim 1")
        if args.k is None:
            raise ValueError("--family kq needs --k")
        indices = _parse_range(args.k)
        constants = BoundConstants(big_c=args.big_c, h0=args.h0,
                                   c_qu=args.c_qu)
        extra.append(f"k: {args.k}")
        extra.append(
            "constant-dependent columns: generic_bound, tiled_bound "
            f"(big_c={args.big_c}, h0={args.h0}, c_qu={args.c_qu})"
        )
        header = ["k", "points", "generic_bound", "tiled_bound"]
        alpha = measure.stddevs[0]
        rows = []
        for k in indices:
            n_pts = k * (k + 1)
            generic = kq_bound_generic(k, alpha, constants, ctx)
            tiled = kq_bound(n_pts, alpha, args.big_c, 1, ctx)
            rows.append([k, n_pts, generic.upper_nominal,
                         tiled.upper_nominal])
    else:
        raise ValueError(f"unknown bounds family {args.family!r}")
    text = render_csv("bounds", _config_lines(args, extra), header, rows, ctx)
    write_output(text, args.out)
    return 0


def _cmd_points(args) -> int:
    ctx = make_context(args.digits)
    if (args.m is None) == (args.k is None):
        raise ValueError("exactly one of --m (base set) or --k (tiled set) is required")
    if args.m is not None:
        ps = y_set(args.m, ctx)
        extra = [f"set: y({args.m})", f"points: {ps.size}"]
        grid = [(p,) for p in ps.points] if args.dim == 1 else None
        if args.dim > 1:
            grid = tensor_grid([ps] * args.dim)
            extra[-1] = f"points: {len(grid)}"
    else:
        ps = x_k(args.k, ctx)
        extra = [f"set: x({args.k})", f"points: {ps.size}"]
        grid = [(p,) for p in ps.points]
        if args.dim > 1:
            grid = tensor_grid([ps] * args.dim)
            extra[-1] = f"points: {len(grid)}"
    header = [f"x{i + 1}" for i in range(args.dim)]
    rows = [list(p) for p in grid]
    text = render_csv(
        "points",
        [f"dim: {args.dim}"] + extra,
        header, rows, ctx,
    )
    write_output(text, args.out)
    return 0


def _plot_target(args):
    if args.no_plot:
        return None
    if args.plot is not None:
        return args.plot
    if args.out is not None:
        return os.path.splitext(args.out)[0] + ".png"
    return None


def _cmd_figure1(args) -> int:
    ctx = make_context(args.digits)
    if args.dim != 1:
        raise ValueError("figure1 is a one-dimensional study")
    measure, kernel = _specs(args, ctx)
    alpha = measure.stddevs[0]
    ell = kernel.lengthscales[0]
    indices = _parse_range(args.n)
    header = ["n", "wce_scaled", "wce_standard", "lower", "upper_nominal",
              "upper_adjusted"]
    rows = []
    for n in indices:
        scaled = scaled_gh_rule(alpha, ell, n, ctx)
        standard = standard_gh_rule(alpha, n, ctx)
        rep_s = wce_closed_form(scaled, measure, kernel, ctx)
        rep_g = wce_closed_form(standard, measure, kernel, ctx)
        bound = gh1d_bounds(alpha, ell, n, ctx)
        rows.append([n, rep_s.wce, rep_g.wce, bound.lower,
                     bound.upper_nominal, bound.upper_adjusted])
    text = render_csv(
        "figure1", _config_lines(args, [f"n: {args.n}"]), header, rows, ctx,
    )
    write_output(text, args.out)
    plot_path = _plot_target(args)
    if plot_path is not None:
        render_decay_plot(
            plot_path, [r[0] for r in rows],
            {
                "wce_scaled": [r[1] for r in rows],
                "wce_standard": [r[2] for r in rows],
                "lower": [r[3] for r in rows],
                "upper_nominal": [r[4] for r in rows],
                "upper_adjusted": [r[5] for r in rows],
            },
            "rule size n", "Gauss-Hermite rules: scaled vs standard",
        )
    return 0


def _cmd_figure2(args) -> int:
    ctx = make_context(args.digits)
    measure, kernel = _specs(args, ctx)
    for v in measure.stddevs[1:]:
        if v != measure.stddevs[0]:
            raise ValueError("figure2 is isotropic; give one --alpha")
    for v in kernel.lengthscales[1:]:
        if v != kernel.lengthscales[0]:
            raise ValueError("figure2 is isotropic; give one --ell")
    indices = _parse_range(args.k)
    header = ["k", "n_total", "wce_optimal", "decay_bound"]
    extra = [
        f"k: {args.k}",
        f"constant-dependent columns: decay_bound (big_c={args.big_c})",
    ]
    rows = []
    for k in indices:
        base = x_k(k, ctx).points
        n_total = len(base) ** kernel.dim
        report = optimal_product_wce(
            measure, kernel, [base] * kernel.dim, ctx
        )
        bound = kq_bound(n_total, measure.stddevs[0], args.big_c,
                         kernel.dim, ctx)
        rows.append([k, n_total, report.wce, bound.upper_nominal])
    text = render_csv("figure2", _config_lines(args, extra), header, rows, ctx)
    write_output(text, args.out)
    plot_path = _plot_target(args)
    if plot_path is not None:
        render_decay_plot(
            plot_path, [r[0] for r in rows],
            {
                "wce_optimal": [r[2] for r in rows],
                "decay_bound": [r[3] for r in rows],
            },
            "window index k", "Optimal weights on tiled point sets",
        )
    return 0


def _cmd_ratefit(args) -> int:
    ctx = make_context(args.digits)
    lo, hi = (int(v) for v in args.window.split(":", 1))
    xs = []
    ys = []
    x_col = None
    with open(args.csv, "r", encoding="ascii") as fh:
        header = None
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            cells = line.split(",")
            if header is None:
                header = cells
                x_col = args.x_column or header[0]
                if x_col not in header or args.column not in header:
                    raise ValueError(
                        f"columns {x_col!r}/{args.column!r} not in {args.csv}"
                    )
                xi = header.index(x_col)
                yi = header.index(args.column)
                continue
            x = int(cells[xi])
            if lo <= x <= hi:
                xs.append(x)
                ys.append(ctx.real(cells[yi]))
    fit = fit_geometric_rate(xs, ys, ctx)
    text = render_csv(
        "ratefit",
        [f"csv: {args.csv}", f"column: {args.column}",
         f"x-column: {x_col}", f"window: {args.window}"],
        ["column", "window_lo", "window_hi", "r", "residual"],
        [[args.column, lo, hi, fit.r, fit.residual]], ctx,
    )
    write_output(text, args.out)
    return 0


# -- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gkquad",
        description="Quadrature rules and worst-case errors for "
                    "Gaussian-kernel spaces under Gaussian measures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, digits=50, dim=1):
        sp.add_argument("--digits", type=int, default=digits,
                        help=f"working precision in decimal digits (default {digits})")
        sp.add_argument("--alpha", default="1",
                        help="measure stddev(s), comma-separated per dim")
        sp.add_argument("--ell", default="1",
                        help="kernel lengthscale(s), comma-separated per dim")
        sp.add_argument("--dim", type=int, default=dim,
                        help=f"dimension (default {dim})")
        sp.add_argument("--out", default=None,
                        help="output CSV path (default stdout)")

    sp = sub.add_parser("rule", help="emit one rule as CSV")
    common(sp)
    sp.add_argument("--family", choices=RULE_FAMILIES, required=True)
    sp.add_argument("--n", type=int, default=None, help="rule size per dim")
    sp.add_argument("--k", type=int, default=None,
                    help="window index (optimal family)")
    sp.set_defaults(handler=_cmd_rule)

    sp = sub.add_parser("wce", help="worst-case error of one rule")
    common(sp)
    sp.add_argument("--family", choices=RULE_FAMILIES, required=True)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--series", action="store_true",
                    help="also compute the basis-expansion value")
    sp.add_argument("--spot-check", type=int, default=0, metavar="COUNT",
                    help="verify |I(f)-Q(f)| <= wce on random test functions")
    sp.add_argument("--seed", type=int, default=0,
                    help="seed for --spot-check sampling")
    sp.set_defaults(handler=_cmd_wce)

    sp = sub.add_parser("bounds", help="evaluate bound columns")
    common(sp)
    sp.add_argument("--family", choices=("scaled-gh", "minimal", "kq"),
                    required=True)
    sp.add_argument("--n", default=None, help="size range 'a:b' or single")
    sp.add_argument("--k", default=None, help="window range 'a:b' or single")
    sp.add_argument("--c-qu", dest="c_qu", default="2",
                    help="quasi-uniformity constant (default 2)")
    sp.add_argument("--h0", default="1",
                    help="fill-distance threshold placeholder (default 1)")
    sp.add_argument("--big-c", dest="big_c", default="1",
                    help="sampling-inequality constant placeholder (default 1)")
    sp.set_defaults(handler=_cmd_bounds)

    sp = sub.add_parser("points", help="emit a point set as CSV")
    common(sp)
    sp.add_argument("--m", type=int, default=None,
                    help="base set size (first m low-discrepancy points)")
    sp.add_argument("--k", type=int, default=None, help="tiled window index")
    sp.set_defaults(handler=_cmd_points)

    sp = sub.add_parser("figure1",
                        help="scaled vs standard rule decay study")
    common(sp, digits=100)
    sp.add_argument("--n", default="1:30", help="size range (default 1:30)")
    sp.add_argument("--plot", default=None, help="plot path (PNG)")
    sp.add_argument("--no-plot", action="store_true")
    sp.set_defaults(handler=_cmd_figure1)

    sp = sub.add_parser("figure2",
                        help="optimal-weight decay study on tiled grids")
    common(sp, digits=400, dim=2)
    sp.add_argument("--k", default="1:8", help="window range (default 1:8)")
    sp.add_argument("--big-c", dest="big_c", default="1",
                    help="bound constant (default 1)")
    sp.add_argument("--plot", default=None, help="plot path (PNG)")
    sp.add_argument("--no-plot", action="store_true")
    sp.set_defaults(handler=_cmd_figure2)

    sp = sub.add_parser("ratefit", help="fit a geometric decay rate")
    sp.add_argument("--csv", required=True, help="input CSV path")
    sp.add_argument("--column", required=True, help="value column name")
    sp.add_argument("--x-column", default=None,
                    help="index column (default: first column)")
    sp.add_argument("--window", required=True, help="inclusive range 'a:b'")
    sp.add_argument("--digits", type=int, default=50)
    sp.add_argument("--out", default=None)
    sp.set_defaults(handler=_cmd_ratefit)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.handler(args)
    except ValueError as exc:
        print(f"gkquad: configuration error: {exc}", file=sys.stderr)
        return 2
    except PrecisionError as exc:
        print(f"gkquad: precision exhausted: {exc}", file=sys.stderr)
        if exc.suggested_digits is not None:
            print(
                f"gkquad: retry with --digits {exc.suggested_digits} or more",
                file=sys.stderr,
            )
        return 3
    except ConvergenceError as exc:
        print(f"gkquad: iteration failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
