"""Tests for the least-squares leading-coefficient estimator.

The two routes (closed-form mean-value expressions vs. normal equations) are
algebraically identical; their float64 agreement is checked on a large seeded
family of geometric height ladders, the design the estimator is meant for.
Clustered or extremely offset abscissae make the underlying least-squares
problem itself ill-conditioned beyond 1e-10 in double precision, so the
generator draws well-spread ladders (>= 10 rungs, ratio >= 2).
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diagcubic.counting import CountSeries
from diagcubic.fitting import (
    DegenerateDesignError,
    FitInput,
    leading_coeff_closed,
    leading_coeff_ls,
    theta_stat,
)

BOTH_ROUTES = pytest.mark.parametrize(
    "route", [leading_coeff_closed, leading_coeff_ls], ids=["closed", "ls"]
)


@BOTH_ROUTES
def test_line_slope(route):
    pts = tuple((float(x), 2.0 * x + 5.0) for x in range(1, 5))
    assert route(FitInput(pts, 2)) == pytest.approx(2.0, abs=1e-9)


@BOTH_ROUTES
def test_quadratic_leading(route):
    pts = tuple((float(x), 3.0 * x * x + x + 1.0) for x in range(5))
    assert route(FitInput(pts, 3)) == pytest.approx(3.0, abs=1e-9)


@BOTH_ROUTES
def test_cubic_leading(route):
    pts = tuple((float(x), float(x) ** 3) for x in range(1, 9))
    assert route(FitInput(pts, 4)) == pytest.approx(1.0, abs=1e-9)


@BOTH_ROUTES
@pytest.mark.parametrize("rank_t", [2, 3, 4])
def test_random_polynomial_recovery(route, rank_t):
    """Exact polynomial data of the fitted degree is reproduced exactly."""
    rng = np.random.default_rng(91)
    x = np.log(128.0 * 2 ** np.arange(11, dtype=np.float64))
    for _ in range(50):
        coeffs = rng.uniform(-10.0, 10.0, rank_t)
        y = sum(c * x**k for k, c in enumerate(coeffs))
        fit = FitInput(tuple(zip(x.tolist(), y.tolist())), rank_t)
        assert route(fit) == pytest.approx(coeffs[-1], rel=1e-8, abs=1e-8)


def test_closed_form_matches_normal_equations():
    """The two routes agree to 1e-10 across 1000 random ladder datasets."""
    rng = np.random.default_rng(20240815)
    checked = 0
    for _ in range(1000):
        rank_t = int(rng.integers(2, 5))
        rungs = int(rng.integers(10, 17))
        base = rng.uniform(2.0, 200.0)
        ratio = rng.uniform(2.0, 4.0)
        heights = base * ratio ** np.arange(rungs)
        if rng.random() < 0.5:
            heights = np.append(heights, heights[-1] * rng.uniform(1.05, ratio))
        x = np.log(heights)
        y = rng.uniform(0.0, 50.0, len(heights))
        fit = FitInput(tuple(zip(x.tolist(), y.tolist())), rank_t)
        closed = leading_coeff_closed(fit)
        ls = leading_coeff_ls(fit)
        assert abs(closed - ls) <= 1e-10 * max(1.0, abs(closed), abs(ls))
        checked += 1
    assert checked == 1000


@pytest.mark.parametrize("rank_t", [2, 3, 4])
def test_all_abscissae_equal_is_degenerate(rank_t):
    pts = tuple((3.0, float(y)) for y in range(6))
    with pytest.raises(DegenerateDesignError):
        FitInput(pts, rank_t)


def test_too_few_distinct_abscissae_is_degenerate():
    pts = ((1.0, 0.0), (2.0, 1.0), (1.0, 2.0), (2.0, 3.0))
    FitInput(pts, 2)  # two distinct abscissae suffice for a line
    with pytest.raises(DegenerateDesignError):
        FitInput(pts, 3)


@pytest.mark.parametrize("rank_t", [0, 1, 5, -2])
def test_rank_validation(rank_t):
    pts = tuple((float(x), float(x)) for x in range(8))
    with pytest.raises(ValueError):
        FitInput(pts, rank_t)


@pytest.mark.parametrize(
    "rank_t,theta,rel_tol",
    [(2, 0.3414, 1e-3), (3, 0.1896, 5e-3), (4, 0.04904, 1e-2)],
)
def test_theta_stat_recovers_planted_constant(rank_t, theta, rel_tol):
    """A series built from N(B) = round(theta * B * (log B)^(t-1)) returns
    theta up to the integer-rounding perturbation (natural log convention:
    with any other log base the result would be off by a power of log 10)."""
    heights = [128 * 2**k for k in range(12)]
    entries = tuple(
        (b, int(round(theta * b * math.log(b) ** (rank_t - 1)))) for b in heights
    )
    est = theta_stat(CountSeries(entries), rank_t)
    assert est == pytest.approx(theta, rel=rel_tol)


def test_theta_stat_uses_count_over_height():
    """Doubling every count doubles the estimate (y_i = N_i / B_i is linear)."""
    entries = tuple((128 * 2**k, 1000 * (k + 1) ** 2) for k in range(8))
    doubled = tuple((b, 2 * n) for b, n in entries)
    a = theta_stat(CountSeries(entries), 3)
    b = theta_stat(CountSeries(doubled), 3)
    assert b == pytest.approx(2.0 * a, rel=1e-12)


@given(
    rank_t=st.integers(min_value=2, max_value=4),
    lead=st.floats(min_value=-5.0, max_value=5.0),
    lower=st.lists(
        st.floats(min_value=-10.0, max_value=10.0), min_size=3, max_size=3
    ),
    rungs=st.integers(min_value=8, max_value=13),
)
@settings(max_examples=150, deadline=None)
def test_lower_degree_terms_do_not_move_leading_coeff(rank_t, lead, lower, rungs):
    """Adding any polynomial of lower degree to the data leaves the fitted
    leading coefficient unchanged (linearity of least squares)."""
    x = np.log(128.0 * 2 ** np.arange(rungs, dtype=np.float64))
    y = lead * x ** (rank_t - 1)
    for k, c in enumerate(lower[: rank_t - 1]):
        y = y + c * x**k
    fit = FitInput(tuple(zip(x.tolist(), y.tolist())), rank_t)
    assert leading_coeff_closed(fit) == pytest.approx(lead, abs=1e-8, rel=1e-8)


@given(
    rank_t=st.integers(min_value=2, max_value=4),
    seed=st.integers(min_value=0, max_value=2**31 - 1),
)
@settings(max_examples=100, deadline=None)
def test_routes_agree_on_random_ladders(rank_t, seed):
    rng = np.random.default_rng(seed)
    rungs = int(rng.integers(10, 15))
    x = np.log(rng.uniform(2.0, 200.0) * rng.uniform(2.0, 4.0) ** np.arange(rungs))
    y = rng.uniform(0.0, 50.0, rungs)
    fit = FitInput(tuple(zip(x.tolist(), y.tolist())), rank_t)
    closed = leading_coeff_closed(fit)
    ls = leading_coeff_ls(fit)
    assert abs(closed - ls) <= 1e-10 * max(1.0, abs(closed), abs(ls))
