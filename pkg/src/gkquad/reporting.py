"""Delimited output and decay plots for the command-line reports.

CSV files open with a ``#``-prefixed comment block recording the full
configuration (tool version, digits, parameters, any placeholder
constants), then a header row, then data rows.  Numbers are printed as
shortest round-trip decimals at min(digits, 50) significant digits, so
identical configurations produce byte-identical files.

The figure commands also render a log-scale decay plot next to the CSV;
the CSV stays the canonical output and the plot is a convenience view of
the same rows.
"""

from __future__ import annotations

import io

from .hpcore import NumericContext

VERSION = "0.1.0"


def format_number(x, ctx: NumericContext) -> str:
    """Shortest round-trip decimal at min(digits, 50) displayed digits."""
    if isinstance(x, int):
        return str(x)
    return ctx.nstr(x, min(ctx.digits, 50))


def render_csv(command: str, config_lines, header, rows,
               ctx: NumericContext) -> str:
    """Assemble the full CSV text: comment block, header row, data rows."""
    buf = io.StringIO()
    buf.write(f"# gkquad {command}\n")
    buf.write(f"# version: {VERSION}\n")
    buf.write(f"# digits: {ctx.digits}\n")
    for line in config_lines:
        buf.write(f"# {line}\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(
            cell if isinstance(cell, str) else format_number(cell, ctx)
            for cell in row
        ) + "\n")
    return buf.getvalue()


def write_output(text: str, out_path):
    """Write to a file, or stdout when no path is given."""
    if out_path is None:
        import sys

        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)


def _plot_value(x):
    """Convert to a plottable float, clipping magnitudes that underflow
    double precision so log-scale axes stay finite."""
    v = float(x)
    return v if v > 1e-300 else 1e-300


def render_decay_plot(path, x_values, series, xlabel: str, title: str):
    """Semilog-y decay plot: one line per (label, values) entry of
    ``series``, sharing ``x_values``.  Written to ``path`` (format from
    the suffix)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    xs = [float(v) for v in x_values]
    for label, values in series.items():
        style = "-o" if label.startswith("wce") else "--"
        ax.semilogy(xs, [_plot_value(v) for v in values], style,
                    label=label, markersize=3.5)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("worst-case error")
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.savefig(path, bbox_inches="tight", dpi=150)
    plt.close(fig)
