"""Tests for constant assembly, reporting, and the command-line interface."""

import json
import math
from fractions import Fraction

import pytest
from click.testing import CliRunner

from diagcubic.cli import main
from diagcubic.counting import CountSeries, count_series, fast_count
from diagcubic.pipeline import (
    ToleranceNotMetError,
    UnsupportedFamilyError,
    breakdown_row,
    compute_constant,
    normalized_count,
    report,
)
from diagcubic.surfaces import new_surface

# Converged real densities (independent oracle frozen in the quadrature
# tests) and the previously tabulated reference values they correct.
TRUE_OMEGA = {
    (1, 1, 2, 4): 3.2602189372,
    (1, 1, 5, 25): 1.3610317743,
    (1, 1, 1, 1): 6.0441510658,
}
TABULATED_OMEGA = {
    (1, 1, 2, 4): 3.255161,
    (1, 1, 5, 25): 1.360417,
    (1, 1, 1, 1): 6.121864,
}
TABULATED_THETA = {
    (1, 1, 2, 4): 0.3413500,
    (1, 1, 5, 25): 0.2290769,
    (1, 1, 1, 1): 0.04904057,
}

FAST = dict(prime_cutoff=100_000, quad_tol=1e-3)


@pytest.fixture(scope="module")
def s1_breakdown():
    return compute_constant(new_surface(1, 1, 2, 4), **FAST)


def test_recompose_identity(s1_breakdown):
    b = s1_breakdown
    assert b.recompose() == pytest.approx(b.theta, rel=1e-12)
    direct = float(b.alpha) * b.beta * b.zeta_limit * b.omega_infinity.value
    for factor in b.local_factors:
        direct *= float(factor.value)
    direct *= b.euler.c0 * b.euler.c1 * b.euler.c2 * b.euler.c3
    assert direct == pytest.approx(b.theta, rel=1e-12)


def test_unsupported_family_refused():
    with pytest.raises(UnsupportedFamilyError):
        compute_constant(new_surface(1, 2, 3, 5), **FAST)


def _stub_unconverged(surface, tol, **kwargs):
    from diagcubic.archimedean import QuadratureResult

    return QuadratureResult(
        value=3.26, error_estimate=1.0, subdivisions=200, converged=False
    )


def test_budget_exhaustion_raises(monkeypatch):
    monkeypatch.setattr("diagcubic.pipeline.leray_density", _stub_unconverged)
    with pytest.raises(ToleranceNotMetError):
        compute_constant(new_surface(1, 1, 2, 4), **FAST)


@pytest.mark.parametrize("coeffs", [(1, 1, 2, 4), (1, 1, 5, 25), (1, 1, 1, 1)])
def test_theta_consistent_with_tabulated_factors(coeffs):
    """Convention drift guard.

    The tabulated real densities are truncated/imprecise (the quadrature
    test suite pins the converged values), and the tabulated theta was
    assembled from them; so the honest cross-check substitutes the
    tabulated density back in: theta * (omega_tab / omega_true) must then
    reproduce the tabulated theta to ~1e-4 (residual: Euler truncation in
    the reference values and their 7-digit rounding).  A wrong convention
    in any single factor (regions, normalisations, cube roots) would show
    up at the percent level or worse.
    """
    b = compute_constant(new_surface(*coeffs), prime_cutoff=500_000, quad_tol=1e-4)
    swapped = b.theta * TABULATED_OMEGA[coeffs] / b.omega_infinity.value
    assert swapped == pytest.approx(TABULATED_THETA[coeffs], rel=2e-4)
    # and the direct value is already within the density's known deviation
    assert b.theta == pytest.approx(TABULATED_THETA[coeffs], rel=2e-2)


def test_permutation_stability():
    """The whole pipeline is invariant under the coefficient-pair
    permutations that preserve the surface up to coordinate relabelling."""
    base = compute_constant(new_surface(1, 1, 2, 4), **FAST)
    for coeffs in [(2, 4, 1, 1), (1, 1, 4, 2), (4, 2, 1, 1)]:
        other = compute_constant(new_surface(*coeffs), **FAST)
        assert other.alpha == base.alpha
        assert other.rank == base.rank
        assert other.beta == base.beta
        assert other.zeta_limit == pytest.approx(base.zeta_limit, rel=1e-9)
        assert other.bad_factors == base.bad_factors
        assert other.omega_infinity.value == pytest.approx(
            base.omega_infinity.value, rel=2e-3
        )
        assert other.theta == pytest.approx(base.theta, rel=2e-3)


def test_threads_do_not_change_result(s1_breakdown):
    threaded = compute_constant(new_surface(1, 1, 2, 4), threads=2, **FAST)
    assert threaded.theta == pytest.approx(s1_breakdown.theta, rel=1e-12)


def test_breakdown_row_schema(s1_breakdown):
    row = breakdown_row(s1_breakdown)
    required = {
        "alpha",
        "beta",
        "zeta_limit",
        "omega_inf",
        "omega_inf_err",
        "bad_factors",
        "C0",
        "C1",
        "C2",
        "C3",
        "prime_cutoff",
        "tail_bound",
        "theta",
    }
    assert required <= set(row)
    json.dumps(row)  # JSON-serialisable throughout
    assert Fraction(row["alpha"]) == s1_breakdown.alpha
    assert row["alpha_float"] == float(s1_breakdown.alpha)
    assert row["bad_factors"] == {"2": "3/8", "3": "4/9"}
    assert Fraction(row["bad_factors"]["2"]) == Fraction(3, 8)
    assert row["beta"] == 1
    assert row["prime_cutoff"] == 100_000
    assert 0 < row["tail_bound"] < 1e-3
    assert row["theta"] == s1_breakdown.theta


def test_report_row_and_curve(s1_breakdown):
    series = count_series(new_surface(1, 1, 2, 4), 512)
    row, curve = report(s1_breakdown, series)
    b_last, n_last = series.entries[-1]
    expected_ratio = n_last / (
        s1_breakdown.theta * b_last * math.log(b_last) ** (s1_breakdown.rank - 1)
    )
    assert row["B"] == b_last and row["N"] == n_last
    assert row["ratio"] == pytest.approx(expected_ratio, rel=1e-12)
    assert row["theta_stat_over_theta"] == pytest.approx(
        row["theta_stat"] / row["theta"], rel=1e-12
    )
    lines = curve.strip().split("\n")
    assert lines[0].split("\t") == ["log_height", "normalized_count", "theta"]
    assert len(lines) == 1 + len(series.entries)
    for (height, count), line in zip(series.entries, lines[1:]):
        x, norm, theta_ref = map(float, line.split("\t"))
        assert x == pytest.approx(math.log(height), rel=1e-10)
        assert norm == pytest.approx(
            normalized_count(count, height, s1_breakdown.theta, s1_breakdown.rank),
            rel=1e-9,
        )
        assert theta_ref == pytest.approx(s1_breakdown.theta, rel=1e-9)


def test_report_empty_series_rejected(s1_breakdown):
    with pytest.raises(ValueError):
        report(s1_breakdown, CountSeries(()))


def test_normalized_count_guards_small_heights():
    with pytest.raises(ValueError):
        normalized_count(10, 1, 0.3, 2)


# ---------------------------------------------------------------------------
# command-line interface


@pytest.fixture()
def runner():
    return CliRunner()


def test_cli_classify(runner):
    res = runner.invoke(main, ["--surface", "1,1,2,4", "classify"])
    assert res.exit_code == 0
    data = json.loads(res.output)
    assert data["family"] == "RANK_TWO_TOWER"
    assert data["rank"] == 2
    assert data["bad_primes"] == [2, 3]
    assert [r["m"] for r in data["ratios"]] == [2, 1, 2]


def test_cli_count_single_and_series(runner):
    res = runner.invoke(main, ["--surface", "1,1,2,4", "count", "-B", "50"])
    assert res.exit_code == 0
    assert res.output.splitlines() == ["B,N", "50,96"]
    res = runner.invoke(
        main, ["--surface", "1,1,2,4", "count", "-B", "300", "--series"]
    )
    assert res.exit_code == 0
    lines = res.output.splitlines()
    assert lines[0] == "B,N"
    heights = [int(l.split(",")[0]) for l in lines[1:]]
    assert heights == [128, 256, 300]
    for l in lines[1:]:
        b, n = map(int, l.split(","))
        assert n == fast_count(new_surface(1, 1, 2, 4), b)


def test_cli_constant_schema_and_out(runner, tmp_path):
    out = tmp_path / "row.json"
    res = runner.invoke(
        main,
        [
            "--surface",
            "1,1,2,4",
            "--prime-cutoff",
            "100000",
            "--quad-tol",
            "1e-3",
            "--out",
            str(out),
            "constant",
        ],
    )
    assert res.exit_code == 0
    data = json.loads(out.read_text())
    assert data["prime_cutoff"] == 100000
    assert data["bad_factors"] == {"2": "3/8", "3": "4/9"}
    assert data["theta"] == pytest.approx(0.34187, rel=1e-3)


def test_cli_exit_code_unsupported(runner):
    res = runner.invoke(main, ["--surface", "1,2,3,5", "constant"])
    assert res.exit_code == 2


def test_cli_exit_code_budget(runner, monkeypatch):
    res = runner.invoke(
        main, ["--surface", "1,1,2,4", "count", "-B", "2000000"]
    )
    assert res.exit_code == 3
    monkeypatch.setattr("diagcubic.pipeline.leray_density", _stub_unconverged)
    res = runner.invoke(
        main,
        ["--surface", "1,1,2,4", "--prime-cutoff", "100000", "constant"],
    )
    assert res.exit_code == 3


def test_cli_missing_invariants_exit(runner, tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("# m,disc,h,R\n")
    res = runner.invoke(
        main,
        ["--surface", "1,1,2,4", "--field-invariants", str(empty), "constant"],
    )
    assert res.exit_code == 1


def test_cli_bad_surface_spec(runner):
    for spec in ["1,1,2", "1,1,2,x", "0,1,2,4"]:
        res = runner.invoke(main, ["--surface", spec, "classify"])
        assert res.exit_code == 2


def test_cli_fit_from_stdin(runner):
    rows = ["B,N"] + [
        "%d,%d" % (b, round(0.34 * b * math.log(b)))
        for b in [128, 256, 512, 1024, 2048, 4096]
    ]
    res = runner.invoke(
        main, ["--surface", "1,1,2,4", "fit"], input="\n".join(rows)
    )
    assert res.exit_code == 0
    data = json.loads(res.output)
    assert data["rank"] == 2
    assert data["theta_stat"] == pytest.approx(0.34, rel=5e-3)
    res = runner.invoke(main, ["fit", "--rank", "3"], input="\n".join(rows))
    assert res.exit_code == 0
    assert json.loads(res.output)["rank"] == 3


def test_cli_report_files(runner, tmp_path):
    out = tmp_path / "report.json"
    curve = tmp_path / "curve.tsv"
    res = runner.invoke(
        main,
        [
            "--surface",
            "1,1,2,4",
            "--prime-cutoff",
            "100000",
            "--quad-tol",
            "1e-3",
            "--out",
            str(out),
            "report",
            "-B",
            "300",
            "--curve",
            str(curve),
        ],
    )
    assert res.exit_code == 0, res.output
    row = json.loads(out.read_text())
    assert {"theta", "theta_stat", "ratio", "B", "N"} <= set(row)
    assert row["B"] == 300
    lines = curve.read_text().strip().split("\n")
    assert len(lines) == 4  # header + 128, 256, 300
