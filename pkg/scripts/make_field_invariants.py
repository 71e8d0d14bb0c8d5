#!/usr/bin/env python3
"""Generate data/field_invariants.csv: (m, disc, h, R) for pure cubic fields.

For K = Q(m^{1/3}) (m cube-free, canonical) the residue of ζ_K at s=1 equals
2π·h·R/√|d|, so h·R = L(1)·√|d|/(2π) where L = ζ_K/ζ is entire.  L(1) is
evaluated with a smoothed approximate functional equation and the product
h·R is then split by finding the fundamental unit:

  *  Λ(s) = C^s Γ(s) L(s) with C = √|d|/(2π) satisfies Λ(s) = Λ(1−s), whence
     L(1) = Σ_n b_n [ e^{−n/C}/n + E₁(n/C)/C ]   (b = μ ⊛ ideal counts),
     a rapidly convergent sum (terms decay like e^{−n/C}).
  *  Artin's inequality |d| < 4ε₀³ + 24 bounds the fundamental unit ε₀ from
     below, hence the class number h = (h·R)/log ε₀ from above.  For each
     candidate h from that bound downwards, a unit of height exp(hR/h) is
     searched in a small coefficient box around its archimedean projections;
     the first hit certifies both h and R (any unit's logarithm is a
     multiple of the fundamental regulator, and candidates run smallest
     logarithm first).

Validation: the recomputed residues 2πhR/√|d| are compared against seven-digit
reference values for m = 2, 3, 5, 7, 12, and the split (h, R) against known
class numbers for small m.  The script aborts on any mismatch.

Usage: python3 scripts/make_field_invariants.py [--max-m 50] [--out PATH]
"""

import argparse
import csv
import sys
from math import gcd
from pathlib import Path

from mpmath import mp, mpf, e1, exp, log, pi, sqrt

mp.dps = 50

# printed seven-digit residues 2πhR/√|d| used as hard validation anchors
REFERENCE_RESIDUES = {
    2: mpf("0.8146241"),
    3: mpf("1.017615"),
    5: mpf("1.163730"),
    7: mpf("1.265025"),
    12: mpf("1.028996"),
}

# classically known class numbers for small pure cubic fields
KNOWN_CLASS_NUMBERS = {2: 1, 3: 1, 5: 1, 6: 1, 7: 3, 10: 1, 11: 2, 12: 1, 13: 3}


def factorize(n):
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


def cube_free_part(n):
    out = 1
    for p, e in factorize(n).items():
        out *= p ** (e % 3)
    return out


def squarefree_split(m):
    """m = a·b² with a, b coprime squarefree (m cube-free)."""
    a = b = 1
    for p, e in factorize(m).items():
        if e == 1:
            a *= p
        elif e == 2:
            b *= p
        else:
            raise ValueError("m must be cube-free")
    return a, b


def discriminant(m):
    a, b = squarefree_split(m)
    return -3 * (a * b) ** 2 if m % 9 in (1, 8) else -27 * (a * b) ** 2


def canonical_m_values(limit):
    out = []
    for m in range(2, limit + 1):
        if cube_free_part(m) != m:
            continue
        if m > cube_free_part(m * m):
            continue  # the partner generator a²b is smaller; skip duplicates
        out.append(m)
    return out


# ---------------------------------------------------------------------------
# Dirichlet coefficients of L = ζ_K / ζ.
# ---------------------------------------------------------------------------

def prime_sieve(n):
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, int(n ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [p for p in range(2, n + 1) if sieve[p]]


def local_b(p, m):
    """b_{p^k} for k = 0, 1, 2, …: one period's worth of the pattern."""
    if m % p == 0 and p != 3:
        return "ramified"  # b_{p^k} = 0 for k ≥ 1
    if p == 3:
        if m % 9 in (1, 8):
            return "partially_ramified"  # 3 = p₁²p₂, b_{3^k} = 1
        return "ramified"
    if p % 3 == 2:
        return "mixed"  # p = p₁p₂ (degrees 1, 2): b_{p^k} = 1 iff k even
    if pow(m, (p - 1) // 3, p) == 1:
        return "split"  # b_{p^k} = k + 1
    return "inert"  # b_{p^k} cycles 1, −1, 0


def b_coefficient(pk_type, k):
    if k == 0:
        return 1
    if pk_type == "ramified":
        return 0
    if pk_type == "partially_ramified":
        return 1
    if pk_type == "mixed":
        return 1 if k % 2 == 0 else 0
    if pk_type == "split":
        return k + 1
    return (1, -1, 0)[k % 3]  # inert


def dirichlet_b(m, nmax):
    """b_1 … b_nmax via multiplicativity over prime powers."""
    b = [0] * (nmax + 1)
    b[1] = 1
    spf = list(range(nmax + 1))  # smallest prime factor
    for p in prime_sieve(nmax):
        for q in range(p, nmax + 1, p):
            if spf[q] == q:
                spf[q] = p
    types = {}
    for n in range(2, nmax + 1):
        p = spf[n]
        q, k = n, 0
        while q % p == 0:
            q //= p
            k += 1
        if p not in types:
            types[p] = local_b(p, m)
        b[n] = b[q] * b_coefficient(types[p], k)
    return b


def residue_product(m):
    """h·R = L(1)·√|d|/(2π) by the smoothed functional equation."""
    d = abs(discriminant(m))
    c = sqrt(mpf(d)) / (2 * pi)
    # the unit search needs h·R to absolute precision ≈ e^{−hR}, so the tail
    # e^{−nmax/C} must be pushed well below that for regulators up to ~60
    nmax = max(60, int(64 * c) + 1)
    b = dirichlet_b(m, nmax)
    total = mpf(0)
    for n in range(1, nmax + 1):
        if b[n] == 0:
            continue
        x = mpf(n) / c
        total += b[n] * (exp(-x) / n + e1(x) / c)
    return total * c  # = L(1)·√|d|/(2π)


# ---------------------------------------------------------------------------
# Splitting h·R: fundamental unit search with the Artin bound.
# ---------------------------------------------------------------------------

def find_unit(m, r_cand):
    """A unit of O_K with log = r_cand, as exact coefficients, or None.

    Searches u = x + yθ + z·θ²/b and (for m ≡ ±1 mod 9, where the ring of
    integers has index 3 over that order) u = (x + yθ + z·θ²/b)/3, with the
    coefficient box centred on the archimedean projections tr(u·θ^{-i}).
    """
    a, bb = squarefree_split(m)
    theta = mpf(m) ** (mpf(1) / 3)
    u0 = exp(r_cand)
    forms = [1]
    if m % 9 in (1, 8):
        forms.append(3)
    for denom in forms:
        cx = u0 * denom / 3
        cy = u0 * denom / (3 * theta)
        cz = u0 * denom * bb / (3 * theta * theta)
        box = 5
        for x in range(int(cx) - box, int(cx) + box + 2):
            for y in range(int(cy) - box, int(cy) + box + 2):
                for z in range(int(cz) - box, int(cz) + box + 2):
                    if y == 0 and z == 0:
                        continue
                    norm = (
                        x ** 3 + a * bb ** 2 * y ** 3 + a ** 2 * bb * z ** 3
                        - 3 * a * bb * x * y * z
                    )
                    if abs(norm) != denom ** 3:
                        continue
                    if denom == 3 and (x * x - a * bb * y * z) % 3 != 0:
                        continue  # not an algebraic integer
                    value = (x + y * theta + z * theta * theta / bb) / denom
                    if value <= 1:
                        continue
                    if abs(log(value) - r_cand) < mpf("1e-6") * max(1, r_cand):
                        return (x, y, z, denom)
    return None


def split_h_r(m, hr):
    d = abs(discriminant(m))
    r_min = log(mpf(d - 24) / 4) / 3  # Artin: |d| < 4ε₀³ + 24
    h_max = int(hr / r_min) + 1
    for h in range(h_max, 0, -1):
        r = hr / h
        if r < r_min - mpf("1e-9"):
            continue
        unit = find_unit(m, r)
        if unit is not None:
            return h, r, unit
    raise RuntimeError("no unit found for m=%d (h·R=%s)" % (m, hr))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-m", type=int, default=50)
    ap.add_argument(
        "--out",
        type=Path,
        default=Path(__file__).resolve().parent.parent
        / "src" / "diagcubic" / "data" / "field_invariants.csv",
    )
    args = ap.parse_args()

    rows = []
    for m in canonical_m_values(args.max_m):
        hr = residue_product(m)
        h, r, unit = split_h_r(m, hr)
        d = discriminant(m)
        residue = 2 * pi * h * r / sqrt(mpf(abs(d)))
        x, y, z, denom = unit
        print(
            "m=%3d  disc=%7d  h=%2d  R=%-18s unit=(%d,%d,%d)/%d  2πhR/√|d|=%s"
            % (m, d, h, mp.nstr(r, 15), x, y, z, denom, mp.nstr(residue, 10))
        )
        if m in KNOWN_CLASS_NUMBERS and h != KNOWN_CLASS_NUMBERS[m]:
            sys.exit("class number mismatch for m=%d: got %d" % (m, h))
        if m in REFERENCE_RESIDUES:
            ref = REFERENCE_RESIDUES[m]
            if abs(residue - ref) > mpf("2e-6") * ref:
                sys.exit("residue mismatch for m=%d: %s vs %s" % (m, residue, ref))
        rows.append((m, d, h, mp.nstr(r, 15)))

    args.out.parent.mkdir(parents=True, exist_ok=True)
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in rows:
            writer.writerow(row)
    print("wrote %d records to %s" % (len(rows), args.out))


if __name__ == "__main__":
    main()
