"""Exact polytope volumes and the α invariant."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from diagcubic.alpha import (
    alpha_invariant,
    alpha_volume,
    assert_bounded,
    polytope_vertices,
    volume_by_divergence,
    volume_by_fan,
)
from diagcubic.surfaces import classify, new_surface


def surf(a, b, c, d):
    return classify(new_surface(a, b, c, d))


# --- polytope machinery ------------------------------------------------------

def box(d):
    """H-representation of the unit cube [0,1]^d."""
    a, b = [], []
    for j in range(d):
        row = [0] * d
        row[j] = 1
        a.append(list(row))
        b.append(1)
        a.append([-x for x in row])
        b.append(0)
    return a, b


def test_unit_cube_and_simplex_volumes():
    for d in (1, 2, 3):
        a, b = box(d)
        verts = polytope_vertices(a, b)
        assert len(verts) == 2 ** d
        assert volume_by_divergence(a, b, verts) == 1
        assert volume_by_fan(a, b, verts) == 1

    a = [[-1, 0, 0], [0, -1, 0], [0, 0, -1], [1, 1, 1]]
    b = [0, 0, 0, 1]
    verts = polytope_vertices(a, b)
    assert len(verts) == 4
    assert volume_by_divergence(a, b, verts) == Fraction(1, 6)
    assert volume_by_fan(a, b, verts) == Fraction(1, 6)


def test_shifted_polytope_volume_is_translation_invariant():
    # the divergence formula must not depend on the origin's position
    a = [[1, 0], [0, 1], [-1, 0], [0, -1], [1, 1]]
    b = [4, 5, -2, -3, 8]  # square [2,4]×[3,5] cut by x+y ≤ 8
    verts = polytope_vertices(a, b)
    v1 = volume_by_divergence(a, b, verts)
    v2 = volume_by_fan(a, b, verts)
    assert v1 == v2 == Fraction(7, 2)


def test_unbounded_region_is_rejected():
    with pytest.raises(ValueError):
        assert_bounded([[1, 0], [0, 1]], [1, 1])  # quadrant-like, open below


@given(
    st.lists(
        st.tuples(
            st.integers(-3, 3), st.integers(-3, 3), st.integers(0, 6)
        ),
        max_size=5,
    )
)
def test_volume_methods_agree_on_random_cut_boxes(cuts):
    a, b = box(2)
    a = [list(r) for r in a]
    a += [[x, y] for x, y, _ in cuts]
    b += [rhs for _, _, rhs in cuts]
    verts = polytope_vertices(a, b)
    if len(verts) < 3:
        return
    assert volume_by_divergence(a, b, verts) == volume_by_fan(a, b, verts)


# --- α ------------------------------------------------------------------------

RANK2_GENS = ((1, -1), (1, 1))
RANK2_OMEGA = (1, 0)

RANK3_GENS = ((0, 1, 0), (0, 0, 1), (1, 1, -1), (2, -1, -1), (1, -2, 1))
RANK3_OMEGA = (1, 0, 0)

RANK4_GENS = (
    (0, 1, 0, 0), (0, 0, 1, 0), (3, 0, -2, -1), (1, 0, 0, -1),
    (2, -1, -1, -1), (4, -2, -2, -1), (2, 0, -1, 0), (1, -1, 0, 0),
    (2, -2, 0, -1),
)
RANK4_OMEGA = (3, -1, -1, -1)


def test_alpha_volume_in_reference_coordinates():
    assert alpha_volume(RANK2_GENS, RANK2_OMEGA) == 2
    assert alpha_volume(RANK3_GENS, RANK3_OMEGA) == 1
    assert alpha_volume(RANK4_GENS, RANK4_OMEGA) == Fraction(7, 18)


@pytest.mark.parametrize(
    "coeffs,value",
    [
        ((1, 1, 2, 4), Fraction(2)),
        ((1, 1, 5, 25), Fraction(2)),
        ((1, 1, 3, 9), Fraction(2)),
        ((1, 1, 2, 2), Fraction(1)),
        ((1, 1, 5, 5), Fraction(1)),
        ((1, 1, 7, 7), Fraction(1)),
        ((2, 2, 3, 3), Fraction(1)),
        ((1, 1, 1, 1), Fraction(7, 18)),
    ],
)
def test_alpha_of_the_worked_surfaces(coeffs, value):
    assert alpha_invariant(surf(*coeffs)) == value


def test_alpha_is_exactly_rational():
    out = alpha_invariant(surf(1, 1, 1, 1))
    assert isinstance(out, Fraction)
