"""Diagonal cubic surfaces a·X³ + b·Y³ + c·Z³ + d·T³ = 0 and their basic invariants.

Everything downstream (Galois orbits on the 27 lines, local densities, the
archimedean density, the leading constant) is controlled by a small amount of
arithmetic of the coefficient vector: the three pairwise ratios

    ad/bc,  ab/cd,  ac/bd,

each taken up to rational cubes.  A ratio that is a cube contributes a split
quadratic étale piece Q(ζ₃) × Q; a non-cube ratio r contributes the pure cubic
field Q(r^{1/3}).  The Picard rank of the surface over Q is 1 + #cube ratios.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


class Family(enum.Enum):
    """Coefficient patterns with known rationality/closed-form support.

    The three supported patterns (after dividing out the gcd) are
    (1,1,q,q²) with q prime, (e,e,f,f) with f/e a non-cube, and (1,1,1,1).
    Everything else still classifies, but the leading-constant pipeline
    refuses it.
    """

    RANK_TWO_TOWER = "rank2-tower"
    RANK_THREE_PAIRS = "rank3-pairs"
    RANK_FOUR_SPLIT = "rank4-split"
    GENERIC_RANK_ONE = "rank1-generic"
    UNSUPPORTED = "unsupported"


def _factorize(n):
    """Factor a positive integer by trial division; {prime: exponent}.

    Coefficients here are small (table rows never exceed a few hundred), so
    trial division is plenty and avoids dragging sympy into the import path.
    """
    if n <= 0:
        raise ValueError("positive integer expected, got %r" % (n,))
    out = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def cube_free_part(n: int) -> int:
    """Largest cube-free divisor with the same cube class: n = cf·(cube)."""
    out = 1
    for p, e in _factorize(n).items():
        out *= p ** (e % 3)
    return out


def is_rational_cube(r: Fraction) -> bool:
    if r == 0:
        raise ValueError("zero has no cube class here")
    if r < 0:
        r = -r  # -1 is a cube
    return cube_free_part(r.numerator) == 1 and cube_free_part(r.denominator) == 1


@dataclass(frozen=True)
class RatioClass:
    """A coefficient ratio up to cubes, and the étale piece it generates.

    `m` is the canonical cube-free integer with Q(ratio^{1/3}) = Q(m^{1/3}):
    of the two cube-free integers num·den² and num²·den generating the same
    field we keep the smaller.  m = 1 exactly when the ratio is a cube, in
    which case the étale piece is the split algebra Q(ζ₃) × Q (two
    components); otherwise it is the pure cubic field Q(m^{1/3}) (one
    component).
    """

    ratio: Fraction
    is_cube: bool
    m: int

    @property
    def components(self) -> int:
        return 2 if self.is_cube else 1


def cube_free_ratio(num: int, den: int) -> RatioClass:
    """Classify num/den up to cubes.

    >>> cube_free_ratio(8, 2).m     # 4/1 -> Q(cbrt4) = Q(cbrt2)
    2
    >>> cube_free_ratio(4, 9).m     # 4/9 ~ 324 -> cube-free 12 (partner 18)
    12
    >>> cube_free_ratio(1, 8).is_cube
    True
    """
    if num <= 0 or den <= 0:
        raise ValueError("ratios of positive coefficients expected")
    r = Fraction(num, den)
    m1 = cube_free_part(r.numerator * r.denominator**2)
    if m1 == 1:
        return RatioClass(r, True, 1)
    m2 = cube_free_part(m1 * m1)  # the other generator of the same field
    return RatioClass(r, False, min(m1, m2))


@dataclass(frozen=True)
class DiagonalSurface:
    """The surface aX³+bY³+cZ³+dT³ = 0 with a,b,c,d positive coprime integers."""

    a: int
    b: int
    c: int
    d: int

    @property
    def coeffs(self):
        return (self.a, self.b, self.c, self.d)

    def __str__(self):
        return "(%d,%d,%d,%d)" % self.coeffs


def new_surface(a: int, b: int, c: int, d: int) -> DiagonalSurface:
    """Validate and normalise coefficients (divide out gcd, require > 0)."""
    coeffs = (a, b, c, d)
    if any(not isinstance(v, int) for v in coeffs):
        raise TypeError("integer coefficients expected, got %r" % (coeffs,))
    if any(v <= 0 for v in coeffs):
        raise ValueError(
            "coefficients must be positive (the real locus is handled in the "
            "all-positive normalisation), got %r" % (coeffs,)
        )
    g = math.gcd(math.gcd(a, b), math.gcd(c, d))
    return DiagonalSurface(a // g, b // g, c // g, d // g)


@dataclass(frozen=True)
class Classification:
    surface: DiagonalSurface
    ratios: tuple  # (RatioClass, RatioClass, RatioClass) for ad/bc, ab/cd, ac/bd
    rank: int  # Picard rank over Q: 1 + number of cube ratios
    family: Family
    bad_primes: tuple  # 3 together with every prime dividing abcd, ascending

    @property
    def is_supported(self) -> bool:
        return self.family in (
            Family.RANK_TWO_TOWER,
            Family.RANK_THREE_PAIRS,
            Family.RANK_FOUR_SPLIT,
        )


def _detect_family(s: DiagonalSurface, rank: int) -> Family:
    """Pattern-match the (gcd-normalised) coefficient multiset.

    The tower pattern {1,1,q,q²} always survives gcd normalisation because a
    common factor e in (e,e,eq,eq²) is the gcd.  Shapes equivalent to a
    supported one only after a coordinate rescaling (e.g. (1,1,1,8)) are
    deliberately left unsupported: the rescaling changes the height, hence
    the count and the constant.
    """
    pattern = sorted(s.coeffs)
    if rank == 4:
        return Family.RANK_FOUR_SPLIT if pattern == [1, 1, 1, 1] else Family.UNSUPPORTED
    if rank == 3:
        e, e2, f, f2 = pattern
        if e == e2 and f == f2:
            return Family.RANK_THREE_PAIRS
        return Family.UNSUPPORTED
    if rank == 2:
        u, v, q, q2 = pattern
        if u == 1 and v == 1 and q > 1 and q2 == q * q and _is_prime(q):
            return Family.RANK_TWO_TOWER
        return Family.UNSUPPORTED
    return Family.GENERIC_RANK_ONE


def _is_prime(n: int) -> bool:
    return n > 1 and _factorize(n) == {n: 1}


@lru_cache(maxsize=None)
def classify(surface: DiagonalSurface) -> Classification:
    """Full arithmetic classification of a surface.

    The ratio order (ad/bc, ab/cd, ac/bd) is fixed once and for all; the
    étale algebra downstream is the product of the three pieces in this
    order.
    """
    a, b, c, d = surface.coeffs
    ratios = (
        cube_free_ratio(a * d, b * c),
        cube_free_ratio(a * b, c * d),
        cube_free_ratio(a * c, b * d),
    )
    rank = 1 + sum(1 for r in ratios if r.is_cube)
    bad = {3}
    for v in surface.coeffs:
        bad.update(_factorize(v))
    return Classification(
        surface=surface,
        ratios=ratios,
        rank=rank,
        family=_detect_family(surface, rank),
        bad_primes=tuple(sorted(bad)),
    )
