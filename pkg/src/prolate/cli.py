"""Command-line experiments: ``prolate {spectrum,count,compare,riccati,curves}``.

Exit status is 0 on success, 2 on invalid usage (including arguments outside
a mathematical domain) and 1 when a computation fails.  Numeric output is
written with 17 significant digits.
"""

from __future__ import annotations

import csv
import functools
import io
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import click
import numpy as np

from . import darboux, geometry, semiclassical, zeta_compare
from .eigensolve import (
    DEFAULT_CONFIG, ProlateProblem, inner_spectrum, oracle_matrix_spectrum, outer_positive_spectrum,
    outer_spectrum,
)
from .errors import DomainError, ProlateError


@dataclass(frozen=True)
class RunConfig:
    """Validated parameters of one command; ``tol`` scales every tolerance."""

    command: str
    tol: float = 1.0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (math.isfinite(self.tol) and self.tol > 0):
            raise DomainError(f"--tol must be a positive factor, got {self.tol}")

    @property
    def shooting(self):
        return DEFAULT_CONFIG if self.tol == 1.0 else DEFAULT_CONFIG.scaled(self.tol)


def _g(v):
    return "" if v is None else format(float(v), ".17g")


def _emit(rows, header, out):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    if out is None:
        click.echo(buf.getvalue(), nl=False)
    else:
        Path(out).write_text(buf.getvalue())


def _guard(fn):
    """Map package exceptions to exit codes 2 (domain) and 1 (numeric)."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except DomainError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
        except (ProlateError, ArithmeticError, OSError) as exc:
            click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
            sys.exit(1)

    return wrapper


def _positive_int(ctx, param, value):
    if value is not None and value < 1:
        raise click.BadParameter("must be a positive integer")
    return value


def _complex(ctx, param, values):
    try:
        return [complex(v.replace(" ", "")) for v in values]
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--tol", type=float, default=1.0, show_default=True,
              help="Factor applied uniformly to all solver tolerances.")
@click.pass_context
def main(ctx, tol):
    """Spectral laboratory for the prolate operator and its Dirac square root."""
    ctx.obj = {"tol": tol}


@main.command()
@click.option("--lambda", "lam", type=float, required=True)
@click.option("--parity", type=click.Choice(["even", "odd"]), default="even", show_default=True)
@click.option("--region", type=click.Choice(["inner", "outer"]), default="outer", show_default=True)
@click.option("--count", type=int, default=10, show_default=True, callback=_positive_int)
@click.option("--positive-max", type=float, default=None,
              help="Outer region: also list positive eigenvalues up to this value.")
@click.option("--oracle", is_flag=True, help="Add a column with the finite-difference oracle value.")
@click.option("--grid-size", type=int, default=800, show_default=True, help="Oracle grid size.")
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None)
@click.pass_context
@_guard
def spectrum(ctx, lam, parity, region, count, positive_max, oracle, grid_size, out):
    """Eigenvalues of one (region, parity) piece.

    Outer rows are the COUNT negative eigenvalues nearest zero; positive
    ones are labelled 'replica' when they coincide with an inner eigenvalue.
    Inner rows carry the second difference of consecutive eigenvalues.
    """
    cfg = RunConfig("spectrum", ctx.obj["tol"], {"lambda": lam})
    problem = ProlateProblem(lam, parity, region)
    if region == "inner":
        recs = inner_spectrum(lam, parity, count + 1, cfg.shooting)[:count]
    else:
        recs = outer_spectrum(lam, parity, count, cfg=cfg.shooting)
        if positive_max is not None:
            recs = recs + outer_positive_spectrum(lam, parity, positive_max, cfg.shooting)
    header = ["index", "mu", "residual", "method", "label"]
    columns = [[r.index, _g(r.mu), _g(r.residual), r.method, r.label] for r in recs]
    if region == "inner":
        mus = [r.mu for r in recs]
        header.append("second_difference")
        for i, row in enumerate(columns):
            ok = 0 < i < len(mus) - 1
            row.append(_g(mus[i + 1] - 2 * mus[i] + mus[i - 1]) if ok else "")
    if oracle:
        ref = oracle_matrix_spectrum(problem, grid_size, count)
        header.append("oracle_mu")
        for row, r in zip(columns, recs):
            near = min(ref, key=lambda o: abs(o.mu - r.mu))
            row.append(_g(near.mu) if abs(near.mu - r.mu) <= 1e-3 * max(1.0, abs(r.mu)) else "")
    _emit(columns, header, out)


@main.command()
@click.option("--lambda", "lam", type=float, default=math.sqrt(2.0), show_default="sqrt 2")
@click.option("--e-min", type=float, default=10.0, show_default=True)
@click.option("--e-max", type=float, default=100.0, show_default=True)
@click.option("--steps", type=int, default=10, show_default=True, callback=_positive_int)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None)
@click.pass_context
@_guard
def count(ctx, lam, e_min, e_max, steps, out):
    """Semiclassical quantities on a uniform E grid."""
    RunConfig("count", ctx.obj["tol"])
    if not 0 < e_min <= e_max:
        raise DomainError("need 0 < e-min <= e-max")
    table = semiclassical.count_table(np.linspace(e_min, e_max, steps), lam)
    rows = [[_g(c.E), _g(c.a), _g(c.I_value), _g(c.sigma_asymptotic), _g(c.predicted_count)] for c in table]
    _emit(rows, ["E", "a", "I_exact", "sigma_asymptotic", "predicted_dirac_count"], out)


def _dirac_for(lam, parity, E_max, cfg):
    parities = ["even", "odd"] if parity == "union" else [parity]
    recs = []
    for p in parities:
        # eigenvalues alpha with 2 sqrt|alpha| <= E_max: count grows until the ceiling is passed
        n = max(8, int(semiclassical.sigma(E_max / 2, lam).exact * 2 + 6))
        while True:
            part = outer_spectrum(lam, p, n, cfg=cfg)
            if 2 * math.sqrt(-part[-1].mu) > E_max:
                break
            n = int(1.5 * n)
        recs += part
    return darboux.dirac_eigenvalues(lam, recs)


@main.command()
@click.option("--lambda", "lam", type=float, default=math.sqrt(2.0), show_default="sqrt 2")
@click.option("--parity", type=click.Choice(["even", "odd", "union"]), default="even", show_default=True,
              help="Parity of the outer spectrum; 'union' pools both.")
@click.option("--e-min", type=float, default=15.0, show_default=True)
@click.option("--e-max", type=float, default=60.0, show_default=True)
@click.option("--step", type=float, default=0.5, show_default=True)
@click.option("--zeros", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Zeros file (default: $PROLATE_ZEROS or the bundled table).")
@click.option("--csv", "csv_out", type=click.Path(dir_okay=False, writable=True), default=None)
@click.option("--json", "json_out", type=click.Path(dir_okay=False, writable=True), default=None)
@click.pass_context
@_guard
def compare(ctx, lam, parity, e_min, e_max, step, zeros, csv_out, json_out):
    """Dirac counting function against zeta zeros and the semiclassical prediction."""
    cfg = RunConfig("compare", ctx.obj["tol"])
    if not (0 < e_min <= e_max and step > 0):
        raise DomainError("need 0 < e-min <= e-max and step > 0")
    table = zeta_compare.load_zeros(zeros)
    dirac = _dirac_for(lam, parity, e_max, cfg.shooting)
    grid = np.arange(e_min, e_max + 0.5 * step, step)
    report = zeta_compare.compare_counts(dirac, table, grid)
    if csv_out:
        zeta_compare.export_report(report, "csv", csv_out)
    if json_out:
        zeta_compare.export_report(report, "json", json_out)
    for key, value in report.summary().items():
        click.echo(f"{key}: {value}")


@main.command()
@click.option("--lambda", "lam", type=float, default=math.sqrt(2.0), show_default="sqrt 2")
@click.option("--z", "zs", multiple=True, default=("1j", "-1j", "1+1j", "3j"), show_default=True,
              callback=_complex, help="Complex parameter (repeatable), e.g. 1+1j.")
@click.option("--x-max", type=float, default=10.0, show_default=True)
@click.option("--points", type=int, default=200, show_default=True, callback=_positive_int)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None)
@click.pass_context
@_guard
def riccati(ctx, lam, zs, x_max, points, out):
    """Riccati residuals on [lambda + 0.05, x-max] and factorization residuals on three bumps."""
    RunConfig("riccati", ctx.obj["tol"])
    grid = np.linspace(lam + 0.05, x_max, points)
    width = (x_max - lam) / 8
    bumps = [darboux.Bump(lam + k * width, 0.9 * width) for k in (2, 4, 6)]
    rows = []
    for z in zs:
        rows.append([str(z), _g(darboux.riccati_residual(lam, z, grid)),
                     _g(darboux.factorization_residual(lam, z, bumps, 1)),
                     _g(darboux.factorization_residual(lam, z, bumps, 2))])
    _emit(rows, ["z", "riccati_residual", "factorization_first", "factorization_second"], out)


@main.command()
@click.option("--c", "c", type=float, default=0.0, show_default=True)
@click.option("--x-min", type=float, default=1.5, show_default=True)
@click.option("--x-max", type=float, default=6.0, show_default=True)
@click.option("--samples", type=int, default=200, show_default=True, callback=_positive_int)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None)
@click.pass_context
@_guard
def curves(ctx, c, x_min, x_max, samples, out):
    """Null curves t(x) and v(x) of the two-dimensional geometry (columns x, t, v)."""
    RunConfig("curves", ctx.obj["tol"])
    t, v = geometry.null_curves(c, (x_min, x_max), samples)
    if out:
        geometry.write_curves_csv((t, v), out)
    else:
        _emit([[_g(a), _g(b), _g(d)] for a, b, d in zip(t.x, t.values, v.values)], ["x", "t", "v"], None)


if __name__ == "__main__":  # pragma: no cover
    main()
