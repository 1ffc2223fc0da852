"""Command-line surface: tree listing, cycle/value computation, branch scans,
bound verification and SVG plots.

Output is deterministic for a fixed configuration: floats are rounded to 15
significant digits, JSON keys keep insertion order, CSV columns are fixed.
MARKOV_CYCLES_THREADS caps scan parallelism (default 1).
"""

from __future__ import annotations

import csv
import io
import json
import sys

import click

from .analysis import (
    branch_scan,
    check_convergence,
    check_interlacing,
    check_growth_bound,
    check_step_bound,
)
from .contfrac import format_cf, parse_cf, value_of
from .cycleint import QuadratureRule, normalized_value
from .exact import format_surd
from .geodesic import CycleNotClosedError, tv_cycle
from .markov import enumerate_nodes, parse_branch, theta_from_triple
from .modfun import builtin_function

DEPTH_CAP = 12


def _f15(x: float) -> float:
    """Round to 15 significant digits for stable text output."""
    return float(f"{x:.15g}")


def _round_floats(obj):
    if isinstance(obj, float):
        return _f15(obj)
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _dump_json(payload, out: str | None):
    _emit(json.dumps(_round_floats(payload), indent=2) + "\n", out)


def _check_depth(depth: int):
    if depth > DEPTH_CAP:
        raise click.UsageError(f"depth cap exceeded ({DEPTH_CAP})")
    if depth < 0:
        raise click.UsageError("depth must be >= 0")


def _parse_cf_arg(text: str):
    try:
        return parse_cf(text)
    except ValueError as exc:
        raise click.UsageError(str(exc))


def _parse_branch_arg(text: str):
    try:
        return parse_branch(text)
    except ValueError as exc:
        raise click.UsageError(str(exc))


def _function_arg(name: str, q_tol: float):
    try:
        return builtin_function(name, q_tol)
    except ValueError as exc:
        raise click.UsageError(str(exc))


@click.group()
@click.version_option(package_name="markov-cycles")
def main():
    """Values of modular functions at Markov quadratics via cycle integrals."""


@main.command()
@click.option("--depth", default=2, show_default=True, help="Tree depth to enumerate.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
              show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def tree(depth, fmt, out):
    """List tree vertices: address, triple, Markov number, theta, both CFs."""
    _check_depth(depth)
    rows = []
    for node in enumerate_nodes(depth):
        theta = theta_from_triple(node.triple)
        rows.append(
            {
                "address": node.address or "e",
                "triple": list(node.triple.as_tuple()),
                "markov_number": node.markov_number,
                "theta": format_surd(theta),
                "plus_cf": format_cf(node.plus_cf()),
                "minus_cf": format_cf(node.minus_cf()),
            }
        )
    if fmt == "json":
        _dump_json(rows, out)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["address", "a", "b", "m", "theta", "plus_cf", "minus_cf"])
        for row in rows:
            writer.writerow(
                [row["address"], *row["triple"], row["theta"], row["plus_cf"], row["minus_cf"]]
            )
        _emit(buf.getvalue(), out)


@main.command()
@click.option("--cf", "cf_text", required=True, help="Continued fraction, e.g. \"3;(2,3,4)\".")
@click.option("--function", "func", default="j", show_default=True)
@click.option("--nodes", default=64, show_default=True)
@click.option("--digits", default=30, show_default=True)
@click.option("--q-tol", default=1e-18, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def value(cf_text, func, nodes, digits, q_tol, out):
    """Cycle-integral value of a modular function at a quadratic."""
    if nodes < 16:
        raise click.UsageError("need at least 16 quadrature nodes")
    if digits < 15:
        raise click.UsageError("need at least 15 conversion digits")
    f = _function_arg(func, q_tol)
    cf = _parse_cf_arg(cf_text)
    try:
        result = normalized_value(
            f, cf, rule=QuadratureRule.gauss_legendre(nodes), digits=digits
        )
    except CycleNotClosedError as exc:
        raise click.ClickException(f"cycle does not close: {exc}")
    _dump_json(result.to_dict(), out)


@main.command()
@click.option("--cf", "cf_text", required=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def cycle(cf_text, out):
    """T/V cycle of a quadratic: word, length, trace, unit."""
    cf = _parse_cf_arg(cf_text)
    try:
        data = tv_cycle(value_of(cf), allow_transient=True)
    except (CycleNotClosedError, ValueError) as exc:
        raise click.ClickException(str(exc))
    payload = {
        "word": data.word,
        "ell": len(data),
        "trace": data.trace,
        "epsilon": data.epsilon,
        "log_epsilon": data.log_epsilon,
        "length": data.length,
    }
    _dump_json(payload, out)


def _scan_for(branch_text, func, depth, nodes, q_tol):
    _check_depth(depth)
    if depth < 1:
        raise click.UsageError("scan depth must be >= 1")
    branch = _parse_branch_arg(branch_text)
    f = _function_arg(func, q_tol)
    return branch_scan(f, branch, depth, rule=QuadratureRule.gauss_legendre(nodes))


@main.command()
@click.option("--branch", "branch_text", required=True,
              help="Branch descriptor <path>:<L|R>, e.g. e:L or R:L.")
@click.option("--function", "func", default="j", show_default=True)
@click.option("--depth", default=7, show_default=True)
@click.option("--nodes", default=64, show_default=True)
@click.option("--q-tol", default=1e-18, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
              show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def scan(branch_text, func, depth, nodes, q_tol, fmt, out):
    """Values of f along a branch, as a table."""
    result = _scan_for(branch_text, func, depth, nodes, q_tol)
    if fmt == "json":
        _dump_json(result.to_dict(), out)
        return
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(
        ["n", "markov_number", "length", "f_re", "f_im", "fnor_re", "fnor_im", "delta_to_w0"]
    )
    for rec in result.records:
        writer.writerow(
            [
                rec.n,
                rec.markov_number,
                _f15(rec.length),
                _f15(rec.raw.real),
                _f15(rec.raw.imag),
                _f15(rec.normalized.real),
                _f15(rec.normalized.imag),
                _f15(rec.delta_to_base),
            ]
        )
    _emit(buf.getvalue(), out)


@main.command()
@click.option("--branch", "branch_text", required=True)
@click.option("--function", "func", default="j", show_default=True)
@click.option("--depth", default=6, show_default=True)
@click.option("--nodes", default=64, show_default=True)
@click.option("--q-tol", default=1e-18, show_default=True)
@click.option("--bound-n", "bound_n", default=2, show_default=True,
              help="N parameter of the first explicit bound.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def verify(branch_text, func, depth, nodes, q_tol, bound_n, out):
    """Run convergence, interlacing and explicit-bound checks on a branch.

    Exit status is nonzero when any applicable check fails.
    """
    if depth < 4:
        raise click.UsageError("verification needs depth >= 4")
    result = _scan_for(branch_text, func, depth, nodes, q_tol)
    convergence = check_convergence(result)
    interlacing = check_interlacing(result)
    reports = {
        "branch": result.branch,
        "function": result.function,
        "depth": depth,
        "convergence": convergence.to_dict(),
        "interlacing": interlacing.to_dict(),
    }
    verdicts = [convergence.passed, interlacing.passed]
    if result.bounds_applicable and bound_n < depth:
        bound1 = check_growth_bound(result, bound_n)
        bound2 = check_step_bound(result)
        reports["bound_delta1"] = bound1.to_dict()
        reports["bound_delta2"] = bound2.to_dict()
        verdicts += [bound1.passed, bound1.log_unit_passed,
                     bound2.passed, bound2.log_unit_passed]
    reports["passed"] = all(verdicts)
    _dump_json(reports, out)
    if not reports["passed"]:
        sys.exit(1)


def _svg_scatter(scan_result) -> str:
    width, height, pad = 640, 480, 56
    pts = [(rec.normalized.real, rec.normalized.imag, rec.n) for rec in scan_result.records]
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    dx = (x1 - x0) or 1.0
    dy = (y1 - y0) or 1.0
    x0, x1 = x0 - 0.08 * dx, x1 + 0.08 * dx
    y0, y1 = y0 - 0.08 * dy, y1 + 0.08 * dy

    def sx(x):
        return pad + (x - x0) / (x1 - x0) * (width - 2 * pad)

    def sy(y):
        return height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" '
        'stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
        f'<text x="{width // 2}" y="{height - 12}" font-size="13" text-anchor="middle">'
        f"Re f_nor along branch {scan_result.branch} (f = {scan_result.function})</text>",
        f'<text x="16" y="{height // 2}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 16 {height // 2})">Im f_nor</text>',
        f'<text x="{pad}" y="{height - pad + 16}" font-size="11">{x0:.6g}</text>',
        f'<text x="{width - pad}" y="{height - pad + 16}" font-size="11" '
        f'text-anchor="end">{x1:.6g}</text>',
        f'<text x="{pad - 4}" y="{height - pad}" font-size="11" text-anchor="end">{y0:.6g}</text>',
        f'<text x="{pad - 4}" y="{pad + 4}" font-size="11" text-anchor="end">{y1:.6g}</text>',
    ]
    for x, y, n in pts[1:]:
        parts.append(
            f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="4" fill="steelblue"/>'
        )
        parts.append(
            f'<text x="{sx(x) + 6:.2f}" y="{sy(y) - 6:.2f}" font-size="11">{n}</text>'
        )
    bx, by, _ = pts[0]
    parts.append(
        f'<path d="M {sx(bx):.2f} {sy(by) - 7:.2f} l 6 12 l -12 0 z" fill="crimson"/>'
    )
    parts.append(
        f'<text x="{sx(bx) + 8:.2f}" y="{sy(by) + 14:.2f}" font-size="11" '
        'fill="crimson">w0</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


@main.command()
@click.option("--branch", "branch_text", required=True)
@click.option("--function", "func", default="j", show_default=True)
@click.option("--depth", default=7, show_default=True)
@click.option("--nodes", default=64, show_default=True)
@click.option("--q-tol", default=1e-18, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default="plot.svg",
              show_default=True)
def plot(branch_text, func, depth, nodes, q_tol, out):
    """Static SVG scatter of the normalised values, with w0 marked."""
    result = _scan_for(branch_text, func, depth, nodes, q_tol)
    _emit(_svg_scatter(result), out)
    click.echo(f"wrote {out}")


if __name__ == "__main__":
    main()
