"""Command-line interface.

Subcommands: ``classify``, ``count``, ``constant``, ``fit``, ``report``.
Global flags select the surface and the numerical budgets; results go to
stdout or, with ``--out``, to a file.

Exit codes: 0 success; 2 surface outside the supported families (or CLI
usage error); 3 a numerical budget or tolerance could not be met.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path

import click

from .counting import CountSeries, count_series, fast_count
from .localdens import StabilizationError
from .pipeline import (
    DEFAULT_PRIME_CUTOFF,
    DEFAULT_QUAD_TOL,
    ToleranceNotMetError,
    UnsupportedFamilyError,
    breakdown_row,
    compute_constant,
    report,
)
from .residues import MissingFieldInvariants
from .surfaces import classify as classify_surface
from .surfaces import new_surface

EXIT_UNSUPPORTED = 2
EXIT_BUDGET = 3


def _parse_surface(spec):
    if spec is None:
        raise click.UsageError("--surface a,b,c,d is required for this command")
    parts = spec.split(",")
    if len(parts) != 4:
        raise click.UsageError(
            "--surface expects four comma-separated integers, got %r" % spec
        )
    try:
        coeffs = [int(p) for p in parts]
    except ValueError:
        raise click.UsageError(
            "--surface expects four comma-separated integers, got %r" % spec
        )
    try:
        return new_surface(*coeffs)
    except ValueError as exc:
        raise click.UsageError(str(exc))


def _emit(opts, text: str):
    out = opts.get("out")
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        click.echo(text)


def _fail(code: int, exc: BaseException):
    click.echo("error: %s" % exc, err=True)
    sys.exit(code)


@click.group()
@click.option(
    "--surface",
    "surface",
    metavar="a,b,c,d",
    default=None,
    help="Coefficients of aX^3+bY^3+cZ^3+dT^3 = 0 (positive integers).",
)
@click.option(
    "--prime-cutoff",
    type=int,
    default=DEFAULT_PRIME_CUTOFF,
    show_default=True,
    help="Truncation bound for the Euler products.",
)
@click.option(
    "--quad-tol",
    type=float,
    default=DEFAULT_QUAD_TOL,
    show_default=True,
    help="Relative tolerance for the real-density quadrature.",
)
@click.option(
    "--field-invariants",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="CSV of cubic-field invariants (m,disc,h,R) overriding the shipped table.",
)
@click.option(
    "--threads",
    type=int,
    default=1,
    show_default=True,
    help="Worker threads for counting and for the constant's independent stages.",
)
@click.option(
    "--out",
    type=click.Path(dir_okay=False, writable=True),
    default=None,
    help="Write the result here instead of stdout.",
)
@click.pass_context
def main(ctx, **opts):
    """Rational points of bounded height on diagonal cubic surfaces and the
    conjectural leading constant of their asymptotic."""
    ctx.obj = opts


@main.command("classify")
@click.pass_obj
def classify_cmd(opts):
    """Family, Picard rank, coefficient-ratio classes and bad primes."""
    surface = _parse_surface(opts["surface"])
    cls = classify_surface(surface)
    _emit(
        opts,
        json.dumps(
            {
                "surface": list(surface.coeffs),
                "family": cls.family.name,
                "supported": cls.is_supported,
                "rank": cls.rank,
                "ratios": [
                    {"ratio": str(r.ratio), "is_cube": r.is_cube, "m": r.m}
                    for r in cls.ratios
                ],
                "bad_primes": list(cls.bad_primes),
            },
            indent=2,
        ),
    )


@main.command("count")
@click.option("--height", "-B", type=int, required=True, help="Height bound B.")
@click.option(
    "--series/--single",
    default=False,
    help="Emit the doubling ladder up to B instead of the single bound.",
)
@click.pass_obj
def count_cmd(opts, height, series):
    """Count rational points of height at most B (lines excluded); CSV B,N."""
    surface = _parse_surface(opts["surface"])
    threads = opts["threads"]
    try:
        if series:
            data = count_series(surface, height, threads=threads)
            entries = data.entries
        else:
            entries = ((height, fast_count(surface, height, threads=threads)),)
    except (OverflowError, ValueError) as exc:
        _fail(EXIT_BUDGET, exc)
    lines = ["B,N"] + ["%d,%d" % e for e in entries]
    _emit(opts, "\n".join(lines))


@main.command("constant")
@click.pass_obj
def constant_cmd(opts):
    """All factors of the predicted constant, assembled; JSON."""
    surface = _parse_surface(opts["surface"])
    try:
        breakdown = compute_constant(
            surface,
            prime_cutoff=opts["prime_cutoff"],
            quad_tol=opts["quad_tol"],
            field_invariants=opts["field_invariants"],
            threads=opts["threads"],
        )
    except UnsupportedFamilyError as exc:
        _fail(EXIT_UNSUPPORTED, exc)
    except (ToleranceNotMetError, StabilizationError) as exc:
        _fail(EXIT_BUDGET, exc)
    except MissingFieldInvariants as exc:
        _fail(1, exc)
    _emit(opts, json.dumps(breakdown_row(breakdown), indent=2))


def _read_series(path) -> CountSeries:
    text = Path(path).read_text() if path else sys.stdin.read()
    entries = []
    for row in csv.reader(io.StringIO(text)):
        if not row or row[0].strip().lower() in ("", "b", "#"):
            continue
        entries.append((int(row[0]), int(row[1])))
    return CountSeries(tuple(entries))


@main.command("fit")
@click.option(
    "--data",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="CSV of B,N rows (as produced by count); default reads stdin.",
)
@click.option(
    "--rank",
    type=click.IntRange(2, 4),
    default=None,
    help="Power of log B in the fit; default: the surface's Picard rank.",
)
@click.pass_obj
def fit_cmd(opts, data, rank):
    """Least-squares estimate of the leading constant from a count series."""
    from .fitting import theta_stat

    if rank is None:
        surface = _parse_surface(opts["surface"])
        rank = classify_surface(surface).rank
        if rank not in (2, 3, 4):
            _fail(
                EXIT_UNSUPPORTED,
                ValueError("surface has rank %d; pass --rank explicitly" % rank),
            )
    try:
        series = _read_series(data)
        estimate = theta_stat(series, rank)
    except ValueError as exc:
        _fail(1, exc)
    _emit(
        opts,
        json.dumps(
            {"rank": rank, "points": len(series.entries), "theta_stat": estimate},
            indent=2,
        ),
    )


@main.command("report")
@click.option("--height", "-B", type=int, required=True, help="Height bound B.")
@click.option(
    "--curve",
    type=click.Path(dir_okay=False, writable=True),
    default=None,
    help="Write the plot-ready TSV curve here (default: derived from --out).",
)
@click.pass_obj
def report_cmd(opts, height, curve):
    """Count up to B, compute the constant, and emit the comparison row
    (JSON) plus normalized-count curve data (TSV)."""
    surface = _parse_surface(opts["surface"])
    try:
        breakdown = compute_constant(
            surface,
            prime_cutoff=opts["prime_cutoff"],
            quad_tol=opts["quad_tol"],
            field_invariants=opts["field_invariants"],
            threads=opts["threads"],
        )
        series = count_series(surface, height, threads=opts["threads"])
        row, curve_text = report(breakdown, series)
    except UnsupportedFamilyError as exc:
        _fail(EXIT_UNSUPPORTED, exc)
    except (ToleranceNotMetError, StabilizationError, OverflowError) as exc:
        _fail(EXIT_BUDGET, exc)
    except MissingFieldInvariants as exc:
        _fail(1, exc)
    _emit(opts, json.dumps(row, indent=2))
    if curve is None and opts.get("out"):
        curve = str(Path(opts["out"]).with_suffix(".curve.tsv"))
    if curve:
        Path(curve).write_text(curve_text)
    elif not opts.get("out"):
        click.echo(curve_text, nl=False)


if __name__ == "__main__":
    main()
