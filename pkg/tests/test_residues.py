"""Component residues ζ*_{E_i}(1) and the (s−1)^{t+2} limit."""

import math

import pytest
from hypothesis import given, strategies as st

from diagcubic.residues import (
    CubicFieldInvariants,
    MissingFieldInvariants,
    component_residue,
    discriminant_from_m,
    load_invariants,
    residue_pure_cubic,
    residue_theta_component,
    zeta_limit,
)
from diagcubic.surfaces import classify, cube_free_part, new_surface

# seven-digit reference values of ζ*_{E_i}(1) per canonical m
ZETA_STAR = {
    1: 0.6045998,  # cube ratio: π/(3√3)
    2: 0.8146241,
    3: 1.017615,
    5: 1.163730,
    7: 1.265025,
    12: 1.028996,
}

SURFACE_COLUMNS = {
    (1, 1, 2, 4): (2, 1, 2),
    (1, 1, 5, 25): (5, 1, 5),
    (1, 1, 3, 9): (3, 1, 3),
    (1, 1, 2, 2): (1, 2, 1),
    (1, 1, 5, 5): (1, 5, 1),
    (1, 1, 7, 7): (1, 7, 1),
    (2, 2, 3, 3): (1, 12, 1),
    (1, 1, 1, 1): (1, 1, 1),
}


def test_theta_component_closed_form():
    assert residue_theta_component() == pytest.approx(math.pi / (3 * math.sqrt(3)), rel=1e-15)
    assert residue_theta_component() == pytest.approx(0.6045998, abs=1e-6)


def test_discriminants():
    expected = {2: -108, 3: -243, 5: -675, 6: -972, 7: -1323, 10: -300,
                11: -3267, 12: -972, 13: -4563, 17: -867, 19: -1083, 20: -2700}
    for m, d in expected.items():
        assert discriminant_from_m(m) == d


@given(st.integers(2, 500))
def test_discriminant_shape(n):
    m = cube_free_part(n)
    if m == 1:
        return
    d = discriminant_from_m(m)
    assert d < 0
    if m % 9 in (1, 8):
        assert d % 3 == 0 and d % 27 != 0
    else:
        assert d % 27 == 0


def test_invariants_table_covers_required_fields():
    table = load_invariants()
    for m in (2, 3, 5, 6, 7, 10, 11, 12, 13):
        assert m in table
        assert table[m].disc == discriminant_from_m(m)


def test_pure_cubic_residues_match_reference_values():
    table = load_invariants()
    for m, want in ZETA_STAR.items():
        if m == 1:
            continue
        assert residue_pure_cubic(table[m]) == pytest.approx(want, abs=1.5e-6)


def test_known_regulators():
    table = load_invariants()
    assert table[2].h == 1
    assert table[2].regulator == pytest.approx(math.log(1 + 2 ** (1 / 3) + 4 ** (1 / 3)), rel=1e-12)
    assert table[7].h == 3
    r7 = math.log(4 + 2 * 7 ** (1 / 3) + 7 ** (2 / 3))
    assert table[7].regulator == pytest.approx(r7, rel=1e-12)
    assert table[11].h == 2


def test_tampered_discriminant_is_rejected():
    with pytest.raises(ValueError):
        CubicFieldInvariants(m=2, disc=-107, h=1, regulator=1.0)


def test_missing_field_raises_actionable_error():
    table = load_invariants()
    cls = classify(new_surface(1, 1, 2, 4))
    ratio = cls.ratios[0]
    assert ratio.m == 2
    with pytest.raises(MissingFieldInvariants, match="field-invariants"):
        component_residue(ratio, {k: v for k, v in table.items() if k != 2})


def test_zeta_limit_reproduces_the_column_products():
    table = load_invariants()
    for coeffs, columns in SURFACE_COLUMNS.items():
        cls = classify(new_surface(*coeffs))
        want = 1.0
        for m in columns:
            want *= ZETA_STAR[m]
        assert zeta_limit(cls, table) == pytest.approx(want, rel=1e-5)


def test_zeta_limit_of_split_surface_is_cube_of_theta_component():
    cls = classify(new_surface(1, 1, 1, 1))
    assert zeta_limit(cls) == pytest.approx(residue_theta_component() ** 3, rel=1e-12)
