"""Tests for the point-counting engines."""

import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from diagcubic.counting import (
    CountSeries,
    RationalPoint,
    brute_count,
    count_series,
    enumerate_points,
    fast_count,
    is_on_line,
)
from diagcubic.surfaces import new_surface

SURFACES = {
    "S1": (1, 1, 2, 4),
    "S2": (1, 1, 5, 25),
    "S3": (1, 1, 3, 9),
    "S4": (1, 1, 2, 2),
    "S5": (1, 1, 5, 5),
    "S6": (1, 1, 7, 7),
    "S7": (2, 2, 3, 3),
    "S8": (1, 1, 1, 1),
}


def surf(name):
    return new_surface(*SURFACES[name])


# ---------------------------------------------------------------- line test


def test_is_on_line_examples():
    assert is_on_line(surf("S8"), (1, -1, 0, 0))
    assert not is_on_line(surf("S1"), (1, 1, -1, 0))
    # the taxicab point 3^3 + 4^3 + 5^3 = 6^3
    assert not is_on_line(surf("S8"), (3, 4, 5, -6))


def test_is_on_line_rejects_off_surface_points():
    with pytest.raises(ValueError):
        is_on_line(surf("S1"), (1, 0, 0, 0))


def test_pairing_criterion_matches_symbolic_lines():
    """Each of the 27 lines annihilates exactly one coefficient pairing.

    The lines come in three families of nine; parametrising each family
    explicitly with exact cube roots and a primitive cube root of unity and
    substituting shows the family's pairing sums vanish identically while the
    other two pairings are nonzero polynomials — so the pairing test used by
    ``is_on_line`` detects exactly the points on lines.
    """
    s_, w_ = sympy.symbols("s w")
    omega = sympy.Rational(-1, 2) + sympy.sqrt(3) * sympy.I / 2
    for coeffs in ((1, 1, 2, 4), (1, 1, 1, 1)):
        a, b, c, d = (sympy.Integer(k) for k in coeffs)
        # each family pairs X with one other coordinate (and the remaining
        # two with each other); r1, r2 are the exact cube-root slopes
        families = []
        for tag, (m1, m2), (m3, m4), build in (
            ("xy", (a, b), (c, d), lambda r1, r2: (-r1 * s_, s_, -r2 * w_, w_)),
            ("xz", (a, c), (b, d), lambda r1, r2: (-r1 * s_, -r2 * w_, s_, w_)),
            ("xt", (a, d), (b, c), lambda r1, r2: (-r1 * s_, -r2 * w_, w_, s_)),
        ):
            for i in range(3):
                for j in range(3):
                    r1 = sympy.root(m2 / m1, 3) * omega**i
                    r2 = sympy.root(m4 / m3, 3) * omega**j
                    families.append((tag, build(r1, r2)))
        assert len(families) == 27
        for tag, (X, Y, Z, T) in families:
            ax, by, cz, dt = a * X**3, b * Y**3, c * Z**3, d * T**3
            # the surface equation and the family pairing vanish identically
            assert sympy.expand(ax + by + cz + dt) == 0
            pairings = {
                "xy": (ax + by, [ax + cz, ax + dt]),
                "xz": (ax + cz, [ax + by, ax + dt]),
                "xt": (ax + dt, [ax + by, ax + cz]),
            }
            van, oth = pairings[tag]
            assert sympy.expand(van) == 0
            for o in oth:
                assert sympy.expand(o) != 0


# ---------------------------------------------------------- brute examples


def test_brute_count_examples():
    assert brute_count(surf("S1"), 1) == 2
    assert brute_count(surf("S8"), 1) == 0
    assert brute_count(surf("S1"), 0) == 0
    pts = {p.coords for p in enumerate_points(surf("S1"), 1)}
    assert pts == {(1, 1, -1, 0), (1, 1, 1, -1)}


def test_brute_count_height_cap():
    with pytest.raises(ValueError):
        brute_count(surf("S1"), 1001)


# ------------------------------------------------------------ cross-engine


@pytest.mark.parametrize("name", sorted(SURFACES))
def test_fast_equals_brute_small(name):
    s = surf(name)
    for B in (1, 2, 5, 10, 50, 100):
        assert fast_count(s, B) == brute_count(s, B)


def test_emitted_points_verification_pass():
    """Every counted point satisfies the full contract: surface equation,
    primitivity, canonical sign, height bound, not on a line."""
    B = 200
    for name in ("S1", "S4", "S8"):
        s = surf(name)
        a, b, c, d = SURFACES[name]
        pts = enumerate_points(s, B)
        assert len(pts) == brute_count(s, B) == fast_count(s, B)
        assert len(set(pts)) == len(pts)
        for p in pts:
            x, y, z, t = p.coords
            assert a * x**3 + b * y**3 + c * z**3 + d * t**3 == 0
            assert math.gcd(math.gcd(abs(x), abs(y)), math.gcd(abs(z), abs(t))) == 1
            lead = next(v for v in p.coords if v)
            assert lead > 0
            assert 0 < p.height <= B
            assert not is_on_line(s, p)


def test_symmetry_under_pair_permutations():
    """Counts are invariant under swapping within a cubic pair and under
    swapping the two pairs (coordinate relabellings of the same surface)."""
    B = 200
    for coeffs in ((1, 1, 2, 4), (1, 1, 5, 25)):
        a, b, c, d = coeffs
        base = fast_count(new_surface(a, b, c, d), B)
        assert fast_count(new_surface(b, a, c, d), B) == base
        assert fast_count(new_surface(a, b, d, c), B) == base
        assert fast_count(new_surface(c, d, a, b), B) == base


def test_monotonicity():
    s = surf("S4")
    counts = [fast_count(s, B) for B in (10, 40, 90, 160, 250)]
    assert counts == sorted(counts)


@settings(max_examples=25, deadline=None)
@given(
    coeffs=st.tuples(*[st.integers(min_value=1, max_value=6)] * 4),
    B=st.integers(min_value=1, max_value=25),
)
def test_fast_equals_brute_random_surfaces(coeffs, B):
    s = new_surface(*coeffs)
    assert fast_count(s, B) == brute_count(s, B)


# ------------------------------------------------------------------ series


def test_count_series_ladder_and_self_consistency():
    s = surf("S1")
    series = count_series(s, 1000)
    assert series.heights == (128, 256, 512, 1000)
    for B, n in series.entries:
        assert n == fast_count(s, B)


def test_count_series_power_of_two_endpoint():
    series = count_series(surf("S4"), 256)
    assert series.heights == (128, 256)


def test_count_series_minimum_height():
    assert count_series(surf("S1"), 128).heights == (128,)
    with pytest.raises(ValueError):
        count_series(surf("S1"), 127)


def test_count_series_invariants_enforced():
    with pytest.raises(ValueError):
        CountSeries(((128, 5), (128, 6)))
    with pytest.raises(ValueError):
        CountSeries(((128, 5), (256, 4)))


# ------------------------------------------------------------------ guards


def test_overflow_guard_rejects_before_work():
    with pytest.raises(ValueError):
        fast_count(surf("S1"), 2**20 + 1)
    with pytest.raises(OverflowError):
        fast_count(new_surface(1, 1, 2, 4), 2**20)


def test_threads_do_not_change_the_count():
    s = surf("S7")
    assert fast_count(s, 150, threads=3) == fast_count(s, 150)


# ------------------------------------------------------------------ points


def test_rational_point_canonicalisation():
    p = RationalPoint.canonical(-2, 2, 2, -2)
    assert p.coords == (1, -1, -1, 1)
    assert p.height == 1
    with pytest.raises(ValueError):
        RationalPoint.canonical(0, 0, 0, 0)
