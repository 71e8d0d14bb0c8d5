"""Local densities of a diagonal cubic surface: good Euler factors and bad places.

For a prime p not dividing 3abcd the reduction of V: aX³+bY³+cZ³+dT³ = 0
is a smooth cubic surface over F_p and Weil's formula for its point count
reads

    #V(F_p) = p² + (ν_E(p) − 2)·p + 1,

where ν_E(p) is the number of degree-one primes above p in the étale
algebra E attached to the three coefficient ratios (ad/bc, ab/cd, ac/bd)
taken up to cubes.  Each ratio contributes

    p ≡ 2 mod 3:  1  (the cube map is a bijection on F_p*),
    p ≡ 1 mod 3:  3 if the ratio is a cubic residue mod p, else 0.

The convergent part of the leading constant multiplies, over good p, the
normalised densities

    λ_p⁻¹ · #V(F_p)/p²,   λ_p = ζ_{E,p}(1)/ζ_{Q,p}(1)²,

which split into four rapidly convergent products C₀ (p ≡ 2), C₁, C₂, C₃
(p ≡ 1 with ν = 9, 6, and {0,3} respectively); see `euler_products`.

At a bad prime the local factor is λ_p⁻¹·ω_p where the p-adic density

    ω_p = (1 − 1/p)⁻¹ · N*(p^r) / p^{3r}

stabilises for large enough r, N*(p^r) being the number of solutions of
the equation in (Z/p^r)⁴ outside (pZ/p^r)⁴.  Two independent routes are
provided: exact closed forms for the supported coefficient families
(`closed_form_bad_factor`) and a generic route that counts N*(p^r) until
the density stabilises (`bad_density`).  They are cross-checked in the
test suite, never merged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .surfaces import Classification, DiagonalSurface, Family, RatioClass, _is_prime

GOOD_CLOSED_FORM = "good-closed-form"
BAD_CLOSED_FORM = "bad-closed-form"
BAD_GENERIC = "bad-generic"

# The generic bad-place route convolves residue tables of length p^r, an
# O(p^{2r}) computation; capping the modulus at 2·10⁴ keeps a single count
# below ~4·10⁸ int64 operations (and all intermediate sums below 2⁶³).
_NSTAR_MODULUS_CAP = 20000

# p-adic densities of the supported families stabilise at r = 2 or 3; the
# generic route needs one extra exponent to witness the stabilisation.
_STABILIZATION_CAP = 6


class StabilizationError(RuntimeError):
    """The p-adic density kept changing up to the exponent cap."""


def _require_good(cls: Classification, p: int) -> None:
    if p in cls.bad_primes:
        raise ValueError(
            "p = %d is a bad prime of %s (divides 3abcd); use the bad-place "
            "routines" % (p, cls.surface)
        )


def nu_E(cls: Classification, p: int) -> int:
    """Number of degree-one primes above the good prime p in E.

    >>> from diagcubic.surfaces import classify, new_surface
    >>> nu_E(classify(new_surface(1, 1, 2, 4)), 7)
    3
    >>> nu_E(classify(new_surface(1, 1, 2, 4)), 5)
    3
    >>> nu_E(classify(new_surface(1, 1, 1, 1)), 7)
    9
    """
    _require_good(cls, p)
    if p % 3 == 2:
        return 3
    nu = 0
    for ratio in cls.ratios:
        if ratio.is_cube or pow(ratio.m, (p - 1) // 3, p) == 1:
            nu += 3
    return nu


def count_points_mod_p(surface: DiagonalSurface, p: int) -> int:
    """#V(F_p) counted by brute force, with no smoothness assumption.

    Affine solutions are enumerated by tabulating the value distribution of
    each monomial; projective points are (N_affine − 1)/(p − 1).
    """
    a, b, c, d = surface.coeffs
    cubes = np.arange(p, dtype=np.int64) ** 3 % p
    va = (a % p) * cubes % p
    vb = (b % p) * cubes % p
    vc = (c % p) * cubes % p
    d_count = np.bincount((d % p) * cubes % p, minlength=p)
    syz = (vb[:, None] + vc[None, :]) % p
    total = 0
    for x in range(p):
        total += int(d_count[(-(va[x] + syz)) % p].sum())
    assert (total - 1) % (p - 1) == 0
    return (total - 1) // (p - 1)


def good_prime_factor(cls: Classification, p: int) -> Fraction:
    """The exact Euler factor λ_p⁻¹·#V(F_p)/p² at a good prime.

    The five-way case split below evaluates both ingredients in closed
    form; the ν = 0 and ν = 3 cases both simplify to (1 − p⁻³)³, which is
    why they share one convergent product downstream.
    """
    _require_good(cls, p)
    one = Fraction(1)
    q = Fraction(1, p)
    if p % 3 == 2:
        return (one - q) * (one - q**2) ** 3 * (one + q + q**2)
    nu = nu_E(cls, p)
    if nu == 9:
        return (one - q) ** 7 * (one + 7 * q + q**2)
    if nu == 6:
        return (one - q) ** 4 * (one - q**3) * (one + 4 * q + q**2)
    if nu == 3:
        return (one - q) * (one - q**3) ** 2 * (one + q + q**2)
    return (one - q) ** (-2) * (one - q**3) ** 3 * (one - 2 * q + q**2)


# --------------------------------------------------------------------------
# local zeta factors


def local_zeta_factor(ratio: RatioClass, p: int) -> Fraction:
    """ζ_{E_i,p}(1) for the étale piece attached to one coefficient ratio.

    A cube ratio gives the split piece Q(ζ₃) × Q; a non-cube ratio the pure
    cubic field Q(m^{1/3}).  The value is ∏ (1 − p^{-f})⁻¹ over the primes
    of the piece above p, with residue degrees f read off from how X³ − m
    factors over Q_p:

      * p = 3: totally ramified unless m ≡ ±1 mod 9, in which case
        3 = p₁·p₂² with two degree-one primes;
      * p | m (p ≠ 3): totally ramified (the valuation of m is 1 or 2);
      * p ∤ 3m, p ≡ 1 mod 3: split into three degree-one primes when m is
        a cubic residue, inert (f = 3) otherwise;
      * p ∤ 3m, p ≡ 2 mod 3: one linear and one quadratic factor.
    """
    one = Fraction(1)
    q = Fraction(1, p)
    if ratio.is_cube:
        if p == 3:
            quad = one / (one - q)  # Q(ζ₃) ramified at 3
        elif p % 3 == 1:
            quad = (one / (one - q)) ** 2  # split
        else:
            quad = one / (one - q**2)  # inert
        return quad / (one - q)
    m = ratio.m
    if p == 3:
        if m % 3 != 0 and m % 9 in (1, 8):
            return (one / (one - q)) ** 2
        return one / (one - q)
    if m % p == 0:
        return one / (one - q)
    if p % 3 == 2:
        return one / ((one - q) * (one - q**2))
    if pow(m, (p - 1) // 3, p) == 1:
        return (one / (one - q)) ** 3
    return one / (one - q**3)


def zeta_E_local(cls: Classification, p: int) -> Fraction:
    """ζ_{E,p}(1) = product of the three component factors."""
    out = Fraction(1)
    for ratio in cls.ratios:
        out *= local_zeta_factor(ratio, p)
    return out


def lambda_inverse(cls: Classification, p: int) -> Fraction:
    """λ_p⁻¹ = ζ_{Q,p}(1)² / ζ_{E,p}(1), the convergence factor at p."""
    q = Fraction(1, p)
    return (1 / (1 - q)) ** 2 / zeta_E_local(cls, p)


# --------------------------------------------------------------------------
# convergent Euler products over the good primes


@lru_cache(maxsize=4)
def _prime_table(limit: int):
    """All primes ≤ limit, as an int64 array (sieve of Eratosthenes)."""
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def _power_mod(base, exponent, modulus):
    """Vectorised pow(base, exponent, modulus) for int64 arrays.

    Requires modulus² to fit in int64, true for any prime cutoff below
    3·10⁹; square-and-multiply with per-element exponents.
    """
    result = np.ones_like(modulus)
    b = base % modulus
    e = exponent.copy()
    while True:
        odd = (e & 1).astype(bool)
        if odd.any():
            result[odd] = result[odd] * b[odd] % modulus[odd]
        e >>= 1
        live = e > 0
        if not live.any():
            return result
        b[live] = b[live] * b[live] % modulus[live]


@dataclass(frozen=True)
class EulerProducts:
    """The four convergent products over good primes, truncated at `cutoff`.

    `tail_bound` bounds |log| of the omitted tail of any of the four
    products, so each true value lies within a relative e^{±tail_bound} of
    the reported one.
    """

    c0: float
    c1: float
    c2: float
    c3: float
    cutoff: int
    tail_bound: float

    @property
    def product(self) -> float:
        return self.c0 * self.c1 * self.c2 * self.c3


def _tail_bound(cutoff: int) -> float:
    """Bound for |Σ_{p > cutoff} log(factor)| valid for every factor class.

    Each per-prime log factor is at most 30/p² in absolute value for
    p ≥ 11 (the leading terms are −27/p², −9/p², −3/p² and −3/p³ for the
    four classes, and the 10% headroom swallows every higher-order term at
    this size).  Summing over primes with the Chebyshev-type bound
    π(t) ≤ 1.25506·t/log t gives Σ_{p>P} p⁻² ≤ 2·1.25506/(P·log P).
    """
    return 30.0 * 2 * 1.25506 / (cutoff * math.log(cutoff))


def euler_products(cls: Classification, cutoff: int = 10_000_000) -> EulerProducts:
    """Evaluate C₀–C₃ by direct multiplication over primes ≤ cutoff.

    The cubic-residue symbol m^{(p−1)/3} mod p is evaluated for all primes
    at once with vectorised modular exponentiation; logarithms of the
    factors are accumulated with exact (fsum) summation so the only error
    sources are the tail truncation (reported) and the final exp.
    """
    if cutoff < 100:
        raise ValueError("cutoff too small to be meaningful: %d" % cutoff)
    a, b, c, d = cls.surface.coeffs
    primes = _prime_table(cutoff)
    good = primes[(3 * a * b * c * d) % primes != 0]

    p2 = good[good % 3 == 2].astype(np.float64)
    u = 1.0 / p2
    log_c0 = math.fsum(np.log1p(-(u**3)) + 3 * np.log1p(-(u**2)))

    p1 = good[good % 3 == 1]
    nu = np.zeros(len(p1), dtype=np.int64)
    exps = (p1 - 1) // 3
    residue_cache = {}
    for ratio in cls.ratios:
        if ratio.is_cube:
            nu += 3
            continue
        if ratio.m not in residue_cache:
            base = np.remainder(ratio.m, p1)
            residue_cache[ratio.m] = _power_mod(base, exps, p1) == 1
        nu += 3 * residue_cache[ratio.m]

    def log_sum(mask, log_factor):
        f = 1.0 / p1[mask].astype(np.float64)
        return math.fsum(log_factor(f)) if len(f) else 0.0

    log_c1 = log_sum(nu == 9, lambda f: 7 * np.log1p(-f) + np.log1p(7 * f + f**2))
    log_c2 = log_sum(
        nu == 6,
        lambda f: 4 * np.log1p(-f) + np.log1p(-(f**3)) + np.log1p(4 * f + f**2),
    )
    log_c3 = log_sum(nu < 6, lambda f: 3 * np.log1p(-(f**3)))

    return EulerProducts(
        c0=math.exp(log_c0),
        c1=math.exp(log_c1),
        c2=math.exp(log_c2),
        c3=math.exp(log_c3),
        cutoff=cutoff,
        tail_bound=_tail_bound(cutoff),
    )


# --------------------------------------------------------------------------
# bad places, generic route: exact solution counts modulo p^r


def _cube_value_table(coeff: int, modulus: int):
    """Value distribution of c·x³ on Z/modulus: table[v] = #{x : c·x³ ≡ v}."""
    x = np.arange(modulus, dtype=np.int64)
    vals = (coeff % modulus) * (x**3 % modulus) % modulus
    return np.bincount(vals, minlength=modulus)


def _circular_convolve(f, g):
    """Distribution of u + v mod n given the distributions of u and v."""
    n = len(f)
    lin = np.convolve(f, g)
    out = lin[:n].copy()
    out[: n - 1] += lin[n:]
    return out


def _count_all_solutions(surface: DiagonalSurface, p: int, r: int) -> int:
    """#{(x,y,z,t) ∈ (Z/p^r)⁴ : aX³+bY³+cZ³+dT³ ≡ 0}, imprimitives included."""
    if r == 0:
        return 1
    n = p**r
    if n > _NSTAR_MODULUS_CAP:
        raise ValueError(
            "modulus %d^%d exceeds the exact-enumeration budget; for the "
            "supported coefficient families use the closed-form bad factor"
            % (p, r)
        )
    a, b, c, d = surface.coeffs
    t_ab = _circular_convolve(_cube_value_table(a, n), _cube_value_table(b, n))
    t_cd = _circular_convolve(_cube_value_table(c, n), _cube_value_table(d, n))
    return int(t_ab @ t_cd[(-np.arange(n)) % n])


def count_Nstar(surface: DiagonalSurface, p: int, r: int) -> int:
    """Primitive solution count N*(p^r) of the surface equation mod p^r.

    A solution is primitive if not all four coordinates are divisible by p.
    Imprimitive solutions are p·(x',y',z',t') with F(p·x') = p³·F(x'), so
    they biject with points x' mod p^{r−1} satisfying F(x') ≡ 0 mod p^{r−3};
    with m = max(r − 3, 0) there are p^{4(r−1)−4m}·N(p^m) of them, where
    N counts all solutions and N(p⁰) = 1.

    >>> from diagcubic.surfaces import new_surface
    >>> count_Nstar(new_surface(1, 1, 2, 4), 3, 2)
    486
    >>> count_Nstar(new_surface(1, 1, 1, 1), 3, 2)
    1458
    """
    if r < 1:
        raise ValueError("exponent r must be >= 1")
    m = max(r - 3, 0)
    n_all = _count_all_solutions(surface, p, r)
    n_small = _count_all_solutions(surface, p, m)
    return n_all - p ** (4 * (r - 1) - 4 * m) * n_small


@dataclass(frozen=True)
class BadDensity:
    """Stabilised p-adic density data at a bad prime.

    `exponent` is the smallest r whose density N*(p^r)/p^{3r} is witnessed
    unchanged at r+1; `omega` = density/(1 − 1/p) is the local measure.
    """

    prime: int
    exponent: int
    nstar: int
    density: Fraction
    omega: Fraction
    stabilized: bool


def bad_density(surface: DiagonalSurface, p: int) -> BadDensity:
    """Compute ω_p by raising the exponent until the density stabilises."""
    prev: Fraction | None = None
    prev_nstar = 0
    for r in range(1, _STABILIZATION_CAP + 1):
        nstar = count_Nstar(surface, p, r)
        density = Fraction(nstar, p ** (3 * r))
        if density == prev:
            return BadDensity(
                prime=p,
                exponent=r - 1,
                nstar=prev_nstar,
                density=density,
                omega=density / (1 - Fraction(1, p)),
                stabilized=True,
            )
        prev, prev_nstar = density, nstar
    raise StabilizationError(
        "density at p = %d did not stabilise for r <= %d on %s"
        % (p, _STABILIZATION_CAP, surface)
    )


# --------------------------------------------------------------------------
# bad places, closed-form route


def closed_form_bad_factor(cls: Classification, p: int):
    """Exact bad-place factor λ_p⁻¹·ω_p where a closed form is known, else None.

    Two sources:

      * the special prime q of the supported families: for (1,1,q,q²) and
        r ≥ 3 every primitive solution has x, y prime to q and each
        admissible (y,z,t) determines x up to cube roots of unity in
        Z/q^r, giving the stabilised values

            (1 − 1/q²)(1 − 1/q)   q ≡ 2 mod 3,
            3(1 − 1/q)³           q ≡ 1 mod 3,
            4/9                   q = 3,

        and for (e,e,q,q) at a prime pair value q ∤ e the same analysis on
        the two halves of the equation gives

            (1 − 1/q²)³           q ≡ 2 mod 3,
            3(1 − 1/q)⁴(1 − 1/q²) q ≡ 1 mod 3,
            16/27                 q = 3;

      * p = 3 when 3 ∤ abcd: the density is decided in (Z/9)⁴, and as long
        as every cubic piece of E is totally ramified at 3 (no ratio
        representative ≡ ±1 mod 9) the factor collapses to the same 4/9
        (tower) or 16/27 (pairs) as above.  When a piece is only partially
        ramified the closed value does not apply and we return None so the
        caller falls back to the generic count.
    """
    one = Fraction(1)
    q = Fraction(1, p)
    pattern = sorted(cls.surface.coeffs)
    if cls.family is Family.RANK_TWO_TOWER:
        special = pattern[2]
        if p == special:
            if p == 3:
                return Fraction(4, 9)
            if p % 3 == 2:
                return (one - q**2) * (one - q)
            return 3 * (one - q) ** 3
        if p == 3 and special % 9 not in (1, 8):
            return Fraction(4, 9)
    elif cls.family in (Family.RANK_THREE_PAIRS, Family.RANK_FOUR_SPLIT):
        low, high = pattern[0], pattern[2]
        if p != 3 and p in (low, high) and _is_prime(p):
            if p % 3 == 2:
                return (one - q**2) ** 3
            return 3 * (one - q) ** 4 * (one - q**2)
        if p == 3:
            if 3 in (low, high):
                return Fraction(16, 27)
            if (low * high) % 3 != 0:
                m = cls.ratios[1].m
                if m == 1 or m % 9 not in (1, 8):
                    return Fraction(16, 27)
    return None


@dataclass(frozen=True)
class LocalFactor:
    """One local factor of the constant: λ_p⁻¹·ω_p as an exact rational."""

    prime: int
    value: Fraction
    kind: str
    detail: BadDensity | None = None


def bad_place_factor(cls: Classification, p: int, route: str = "auto") -> LocalFactor:
    """Full local factor λ_p⁻¹·ω_p at a bad prime.

    route = "closed" insists on the closed form (error when unavailable),
    "generic" forces the stabilised N*-count, and "auto" prefers the closed
    form, falling back to the generic route.  The two routes are distinct
    computations and the tests check them against each other.
    """
    if p not in cls.bad_primes:
        raise ValueError(
            "p = %d is a good prime of %s; use good_prime_factor" % (p, cls.surface)
        )
    closed = closed_form_bad_factor(cls, p)
    if route == "closed":
        if closed is None:
            raise ValueError(
                "no closed form at p = %d for %s" % (p, cls.surface)
            )
        return LocalFactor(p, closed, BAD_CLOSED_FORM)
    if route == "generic" or closed is None:
        if route not in ("generic", "auto"):
            raise ValueError("unknown route %r" % (route,))
        detail = bad_density(cls.surface, p)
        return LocalFactor(p, lambda_inverse(cls, p) * detail.omega, BAD_GENERIC, detail)
    if route != "auto":
        raise ValueError("unknown route %r" % (route,))
    return LocalFactor(p, closed, BAD_CLOSED_FORM)


def local_factor(cls: Classification, p: int, route: str = "auto") -> LocalFactor:
    """Uniform entry point: dispatch good/bad primes to the right routine."""
    if p in cls.bad_primes:
        return bad_place_factor(cls, p, route)
    return LocalFactor(p, good_prime_factor(cls, p), GOOD_CLOSED_FORM)
