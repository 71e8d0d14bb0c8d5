"""Residues at s=1 of the zeta function of the splitting étale algebra.

The algebra E = E₁×E₂×E₃ attached to a surface has one component per
coefficient ratio: a cube ratio contributes E_i = Q(θ)×Q (θ a primitive cube
root of unity, two field factors), a non-cube ratio with canonical cube-free
generator m contributes the pure cubic field E_i = Q(m^{1/3}).  With
t_i = number of field factors of E_i one has Σ t_i = t + 2, and

    lim_{s→1} (s−1)^{t+2} ζ_E(s)  =  ∏_i ζ*_{E_i}(1),

where each ζ*_{E_i}(1) is the classical leading value: π/(3√3) in the cube
case (residue of ζ_{Q(√−3)}), 2π·h·R/√|d| in the pure cubic case.  Class
numbers and regulators ship in data/field_invariants.csv, produced by
scripts/make_field_invariants.py.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources
from math import pi, sqrt

from .surfaces import Classification, RatioClass, _factorize


class MissingFieldInvariants(LookupError):
    """No (disc, h, R) record for a required pure cubic field."""

    def __init__(self, m):
        super().__init__(
            "no field-invariants record for m=%d; extend the invariants file "
            "with scripts/make_field_invariants.py --max-m %d or pass "
            "--field-invariants PATH" % (m, max(50, m))
        )
        self.m = m


def discriminant_from_m(m: int) -> int:
    """Field discriminant of Q(m^{1/3}) for canonical cube-free m > 1.

    For m = a·b² (a, b coprime squarefree): −3(ab)² if m ≡ ±1 (mod 9),
    otherwise −27(ab)².

    >>> discriminant_from_m(2), discriminant_from_m(10), discriminant_from_m(12)
    (-108, -300, -972)
    """
    a = b = 1
    for p, e in _factorize(m).items():
        if e == 1:
            a *= p
        elif e == 2:
            b *= p
        else:
            raise ValueError("m must be cube-free")
    return -3 * (a * b) ** 2 if m % 9 in (1, 8) else -27 * (a * b) ** 2


@dataclass(frozen=True)
class CubicFieldInvariants:
    m: int
    disc: int
    h: int
    regulator: float

    def __post_init__(self):
        if self.disc != discriminant_from_m(self.m):
            raise ValueError(
                "discriminant %d for m=%d contradicts the ±1 mod 9 rule (%d)"
                % (self.disc, self.m, discriminant_from_m(self.m))
            )
        if self.h < 1 or not self.regulator > 0:
            raise ValueError("need h ≥ 1 and R > 0")


def load_invariants(path=None) -> dict:
    """Parse "m,disc,h,R" records into {m: CubicFieldInvariants}."""
    if path is None:
        source = resources.files("diagcubic").joinpath("data/field_invariants.csv")
        text = source.read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    table = {}
    for row in csv.reader(text.splitlines()):
        if not row or row[0].lstrip().startswith("#"):
            continue
        m, disc, h, reg = int(row[0]), int(row[1]), int(row[2]), float(row[3])
        table[m] = CubicFieldInvariants(m=m, disc=disc, h=h, regulator=reg)
    return table


def residue_theta_component() -> float:
    """lim (s−1)² ζ_{Q(θ)×Q}(s) = Res_{s=1} ζ_{Q(√−3)}(s) = π/(3√3)."""
    return pi / (3 * sqrt(3))


def residue_pure_cubic(inv: CubicFieldInvariants) -> float:
    """Res_{s=1} ζ_K(s) = 2π·h·R/√|d| for the complex cubic K = Q(m^{1/3})."""
    return 2 * pi * inv.h * inv.regulator / sqrt(-inv.disc)


def component_residue(ratio: RatioClass, table: dict) -> float:
    if ratio.is_cube:
        return residue_theta_component()
    if ratio.m not in table:
        raise MissingFieldInvariants(ratio.m)
    return residue_pure_cubic(table[ratio.m])


def zeta_limit(cls: Classification, table: dict = None) -> float:
    """lim_{s→1} (s−1)^{t+2} ζ_E(s) as the product of component residues."""
    if table is None:
        table = load_invariants()
    pole_order = sum(r.components for r in cls.ratios)
    assert pole_order == cls.rank + 2, "étale algebra pole-order bookkeeping"
    out = 1.0
    for ratio in cls.ratios:
        out *= component_residue(ratio, table)
    return out
