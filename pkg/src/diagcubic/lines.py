"""The 27 lines, the Galois action on them, and the invariant Picard lattice.

Over Q̄ the surface aX³+bY³+cZ³+dT³=0 contains 27 lines, organised in nine
triples indexed by a family letter and a decoration:

    L, L', L''   pair X with Y (and Z with T),
    M, M', M''   pair X with Z (and Y with T),
    N, N', N''   pair X with T (and Y with Z),

each triple carrying an index in Z/3 (a power of a primitive cube root of
unity θ in the defining equations).  All field embeddings act through the
group (Z/3)³ ⋊ Z/2: three commuting 3-cycles (multiply the cube roots
(b/a)^{1/3}, (c/a)^{1/3}, (d/a)^{1/3} by θ) and the conjugation θ ↦ θ²,

Blowing down the skew sextet (L(0),L(1),L(2),M(0),M(1),M(2)) identifies
Pic over Q̄ with Z⁷ = Z·Λ ⊕ Z·E₁ ⊕ … ⊕ Z·E₆, the basis used for all vectors
here; the anticanonical class is ω = (3,−1,−1,−1,−1,−1,−1).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

FAMILIES = ("L", "M", "N")
_DECOR = ("", "'", "''")

OMEGA = (3, -1, -1, -1, -1, -1, -1)


@dataclass(frozen=True, order=True)
class LineLabel:
    """One of the 27 lines: family letter, decoration (0, 1, 2 primes), index."""

    family: str  # 'L', 'M' or 'N'
    decoration: int  # 0 = plain, 1 = single prime, 2 = double prime
    index: int  # exponent of θ in the line's equations, in Z/3

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError("family must be one of %s" % (FAMILIES,))
        if self.decoration not in (0, 1, 2) or self.index not in (0, 1, 2):
            raise ValueError("decoration and index live in {0,1,2}")

    def __str__(self):
        return "%s%s(%d)" % (self.family, _DECOR[self.decoration], self.index)


_LABEL_RE = re.compile(r"^([LMN])('{0,2})\((\d)\)$")


def parse_label(text: str) -> LineLabel:
    m = _LABEL_RE.match(text.strip())
    if not m:
        raise ValueError("cannot parse line label %r" % (text,))
    return LineLabel(m.group(1), len(m.group(2)), int(m.group(3)))


ALL_LINES = tuple(
    LineLabel(f, dec, i) for f in FAMILIES for dec in (0, 1, 2) for i in (0, 1, 2)
)


def _lab(text):
    return parse_label(text)


# ---------------------------------------------------------------------------
# Classes in Pic = ZΛ ⊕ ZE₁ ⊕ … ⊕ ZE₆.
#
# The blow-down dictionary: E_i are the six skew lines below, Q_i the
# conics-become-lines 2Λ − Σ_{j≠i} E_j, and the remaining fifteen are the
# strict transforms Λ − E_i − E_j.
# ---------------------------------------------------------------------------

def _e(i):
    v = [0] * 7
    v[i] = 1
    return tuple(v)


def _q(i):
    v = [2, -1, -1, -1, -1, -1, -1]
    v[i] = 0
    return tuple(v)


def _l(i, j):
    v = [1, 0, 0, 0, 0, 0, 0]
    v[i] = -1
    v[j] = -1
    return tuple(v)


_CLASS_OF = {
    _lab("L(0)"): _e(1), _lab("L(1)"): _e(2), _lab("L(2)"): _e(3),
    _lab("M(0)"): _e(4), _lab("M(1)"): _e(5), _lab("M(2)"): _e(6),
    _lab("L'(1)"): _q(1), _lab("L'(2)"): _q(2), _lab("L'(0)"): _q(3),
    _lab("M''(2)"): _q(4), _lab("M''(0)"): _q(5), _lab("M''(1)"): _q(6),
    _lab("L''(1)"): _l(1, 2), _lab("L''(2)"): _l(2, 3), _lab("L''(0)"): _l(3, 1),
    _lab("M'(0)"): _l(4, 5), _lab("M'(1)"): _l(5, 6), _lab("M'(2)"): _l(6, 4),
    _lab("N'(2)"): _l(1, 4), _lab("N'(0)"): _l(1, 5), _lab("N'(1)"): _l(1, 6),
    _lab("N''(0)"): _l(2, 4), _lab("N''(1)"): _l(2, 5), _lab("N''(2)"): _l(2, 6),
    _lab("N(1)"): _l(3, 4), _lab("N(2)"): _l(3, 5), _lab("N(0)"): _l(3, 6),
}

assert len(_CLASS_OF) == 27


def line_class(label: LineLabel) -> tuple:
    """The class of a line in (Λ, E₁, …, E₆) coordinates."""
    return _CLASS_OF[label]


# ---------------------------------------------------------------------------
# The Galois generators as permutations of the labels.
#
# Each 3-cycle generator rotates the decoration of every family and shifts
# the index of exactly one family; which way the decoration rotates depends
# on (generator, family).  ROT[k] below is the decoration image under
# "rotate by k": ROT_BWD = (0→2→1→0), ROT_FWD = (0→1→2→0).
# conjugation negates every index and swaps two decorations per family.
# ---------------------------------------------------------------------------

_ROT_BWD = {0: 2, 2: 1, 1: 0}
_ROT_FWD = {0: 1, 1: 2, 2: 0}

# generator -> family -> (decoration map, index shift)
_GEN_TABLES = {
    "tau": {
        "L": (_ROT_BWD, 1),
        "M": (_ROT_BWD, 0),
        "N": (_ROT_BWD, 0),
    },
    "tau1": {
        "L": (_ROT_BWD, 0),
        "M": (_ROT_BWD, 1),
        "N": (_ROT_FWD, 0),
    },
    "tau2": {
        "L": (_ROT_FWD, 0),
        "M": (_ROT_FWD, 0),
        "N": (_ROT_BWD, 1),
    },
}

_CONJ_DEC_SWAP = {"L": {0: 0, 1: 2, 2: 1}, "M": {0: 1, 1: 0, 2: 2}, "N": {0: 2, 1: 1, 2: 0}}


def _apply_gen(name, label):
    dec_map, shift = _GEN_TABLES[name][label.family]
    return LineLabel(label.family, dec_map[label.decoration], (label.index + shift) % 3)


def _apply_conj(label):
    return LineLabel(
        label.family,
        _CONJ_DEC_SWAP[label.family][label.decoration],
        (-label.index) % 3,
    )


@dataclass(frozen=True)
class GaloisElement:
    """τ^j τ'^j' τ''^j'' c^ε in the group (Z/3)³ ⋊ Z/2.

    Composition uses the semidirect law: conjugation by c inverts the
    3-cycles, so (v₁,ε₁)(v₂,ε₂) = (v₁ + (−1)^{ε₁} v₂, ε₁+ε₂).
    """

    j: int
    j1: int
    j2: int
    eps: int

    def __post_init__(self):
        if not (0 <= self.j < 3 and 0 <= self.j1 < 3 and 0 <= self.j2 < 3):
            raise ValueError("3-cycle exponents live in {0,1,2}")
        if self.eps not in (0, 1):
            raise ValueError("eps is 0 or 1")

    def compose(self, other: "GaloisElement") -> "GaloisElement":
        """self · other, acting on lines as self ∘ other."""
        s = -1 if self.eps else 1
        return GaloisElement(
            (self.j + s * other.j) % 3,
            (self.j1 + s * other.j1) % 3,
            (self.j2 + s * other.j2) % 3,
            (self.eps + other.eps) % 2,
        )

    def inverse(self) -> "GaloisElement":
        s = -1 if self.eps else 1
        return GaloisElement((-s * self.j) % 3, (-s * self.j1) % 3, (-s * self.j2) % 3, self.eps)


IDENTITY = GaloisElement(0, 0, 0, 0)
TAU = GaloisElement(1, 0, 0, 0)
TAU1 = GaloisElement(0, 1, 0, 0)
TAU2 = GaloisElement(0, 0, 1, 0)
CONJ = GaloisElement(0, 0, 0, 1)

FULL_GROUP = tuple(
    GaloisElement(j, j1, j2, e)
    for j, j1, j2, e in product(range(3), range(3), range(3), range(2))
)


def apply_galois(g: GaloisElement, label: LineLabel) -> LineLabel:
    """Act on a line; the word is applied right to left (c first)."""
    if g.eps:
        label = _apply_conj(label)
    for _ in range(g.j2):
        label = _apply_gen("tau2", label)
    for _ in range(g.j1):
        label = _apply_gen("tau1", label)
    for _ in range(g.j):
        label = _apply_gen("tau", label)
    return label


# ---------------------------------------------------------------------------
# The subgroup cut out by a specific surface.
#
# An element (j,j',j'',ε) descends to the splitting field of the surface iff
# x·j + y·j' + z·j'' ≡ 0 (mod 3) whenever (b/a)^x (c/a)^y (d/a)^z is a
# rational cube; ε is always free (complex conjugation).
# ---------------------------------------------------------------------------

def galois_subgroup(classification) -> tuple:
    """The elements of (Z/3)³⋊Z/2 fixing the surface's field relations."""
    from .surfaces import is_rational_cube
    from fractions import Fraction as F

    a, b, c, d = classification.surface.coeffs
    base = (F(b, a), F(c, a), F(d, a))
    relations = [
        (x, y, z)
        for x, y, z in product(range(3), repeat=3)
        if is_rational_cube(base[0] ** x * base[1] ** y * base[2] ** z)
    ]
    kept = []
    for g in FULL_GROUP:
        if all((x * g.j + y * g.j1 + z * g.j2) % 3 == 0 for x, y, z in relations):
            kept.append(g)
    return tuple(kept)


def orbits(subgroup) -> tuple:
    """Orbits of the 27 lines under the given elements (closed under composition
    or not — the orbit closure is taken anyway).  Returned sorted by smallest
    member, each orbit itself sorted."""
    remaining = set(ALL_LINES)
    out = []
    while remaining:
        seed = min(remaining)
        orbit = {seed}
        frontier = [seed]
        while frontier:
            x = frontier.pop()
            for g in subgroup:
                y = apply_galois(g, x)
                if y not in orbit:
                    orbit.add(y)
                    frontier.append(y)
        out.append(tuple(sorted(orbit)))
        remaining -= orbit
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# Integer linear algebra: the action on Pic and its fixed lattice.
# ---------------------------------------------------------------------------

def pic_matrix(g: GaloisElement):
    """7×7 matrix of g on Pic in the (Λ, E₁…E₆) basis (columns = images).

    The image of Λ is read off from Λ = [L''(1)] + [L(0)] + [L(1)]
    (the strict-transform relation Λ = L₁₂ + E₁ + E₂); the E_i are line
    classes and map to line classes.
    """
    cols = []
    lam = [0] * 7
    for lbl in (_lab("L''(1)"), _lab("L(0)"), _lab("L(1)")):
        img = line_class(apply_galois(g, lbl))
        lam = [u + v for u, v in zip(lam, img)]
    cols.append(tuple(lam))
    for lbl in ("L(0)", "L(1)", "L(2)", "M(0)", "M(1)", "M(2)"):
        cols.append(line_class(apply_galois(g, _lab(lbl))))
    # transpose: entry [i][j] = i-th coordinate of the image of basis vector j
    return tuple(tuple(cols[j][i] for j in range(7)) for i in range(7))


def _mat_vec(m, v):
    return tuple(sum(m[i][j] * v[j] for j in range(len(v))) for i in range(len(m)))


def integer_kernel(rows) -> tuple:
    """Basis of {x ∈ Z^n : A·x = 0} for an integer matrix given as rows.

    Column-reduces [A] with unimodular column operations (Euclidean style),
    tracking them in U; columns of U below zero columns of the reduced A
    form a basis of the kernel, automatically saturated.
    """
    rows = [list(r) for r in rows]
    if not rows:
        raise ValueError("need at least one row")
    n = len(rows[0])
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def col_op_swap(j, k):
        for r in rows:
            r[j], r[k] = r[k], r[j]
        for r in u:
            r[j], r[k] = r[k], r[j]

    def col_op_add(j, k, q):  # col_j += q * col_k
        for r in rows:
            r[j] += q * r[k]
        for r in u:
            r[j] += q * r[k]

    def col_op_neg(j):
        for r in rows:
            r[j] = -r[j]
        for r in u:
            r[j] = -r[j]

    pivot_col = 0
    for i in range(len(rows)):
        # find a nonzero entry in row i at column >= pivot_col and reduce
        while True:
            nz = [j for j in range(pivot_col, n) if rows[i][j] != 0]
            if not nz:
                break
            if len(nz) == 1:
                j = nz[0]
                if j != pivot_col:
                    col_op_swap(pivot_col, j)
                if rows[i][pivot_col] < 0:
                    col_op_neg(pivot_col)
                pivot_col += 1
                break
            # reduce the two smallest entries against each other
            nz.sort(key=lambda j: abs(rows[i][j]))
            j0, j1 = nz[0], nz[1]
            q = rows[i][j1] // rows[i][j0]
            col_op_add(j1, j0, -q)
        if pivot_col == n:
            break
    kernel = []
    for j in range(pivot_col, n):
        if all(r[j] == 0 for r in rows):
            kernel.append(tuple(u[i][j] for i in range(n)))
    return tuple(kernel)


@dataclass(frozen=True)
class OrbitDecomposition:
    subgroup: tuple
    orbits: tuple  # tuples of LineLabel

    @property
    def orbit_sums(self):
        """Sum of line classes over each orbit (invariant Pic vectors)."""
        out = []
        for orb in self.orbits:
            v = [0] * 7
            for lbl in orb:
                v = [a + b for a, b in zip(v, line_class(lbl))]
            out.append(tuple(v))
        return tuple(out)


def orbit_decomposition(classification) -> OrbitDecomposition:
    sub = galois_subgroup(classification)
    return OrbitDecomposition(subgroup=sub, orbits=orbits(sub))


def invariant_basis(dec: OrbitDecomposition) -> tuple:
    """Basis of the Galois-invariant sublattice of Pic ≅ Z⁷.

    Stacks (M_g − 1) over the subgroup and takes the saturated integer
    kernel; the anticanonical class always belongs to the result.
    """
    rows = []
    for g in dec.subgroup:
        m = pic_matrix(g)
        for i in range(7):
            rows.append(tuple(m[i][j] - (1 if i == j else 0) for j in range(7)))
    basis = integer_kernel(rows)
    assert in_lattice(basis, OMEGA), "anticanonical class must be invariant"
    return basis


def coordinates_in(basis, v):
    """Rational coordinates of v in the given (independent) vectors, or None."""
    n = len(basis[0])
    r = len(basis)
    # solve B^T x = v by fraction Gaussian elimination on the n×(r+1) system
    aug = [[Fraction(basis[j][i]) for j in range(r)] + [Fraction(v[i])] for i in range(n)]
    piv_rows = []
    row = 0
    for col in range(r):
        sel = next((k for k in range(row, n) if aug[k][col] != 0), None)
        if sel is None:
            return None
        aug[row], aug[sel] = aug[sel], aug[row]
        pv = aug[row][col]
        aug[row] = [x / pv for x in aug[row]]
        for k in range(n):
            if k != row and aug[k][col] != 0:
                f = aug[k][col]
                aug[k] = [x - f * y for x, y in zip(aug[k], aug[row])]
        piv_rows.append(row)
        row += 1
    # consistency: all remaining rows must be zero
    for k in range(row, n):
        if aug[k][r] != 0:
            return None
    return tuple(aug[i][r] for i in range(row))


def in_lattice(basis, v) -> bool:
    coords = coordinates_in(basis, v)
    return coords is not None and all(c.denominator == 1 for c in coords)


def effective_cone(dec: OrbitDecomposition, basis) -> tuple:
    """Orbit-sum generators of the effective cone, in `basis` coordinates.

    Proportional duplicates are merged (primitive representative kept) and
    generators lying in the cone of the others are dropped, so the result is
    irredundant.  Requires every orbit sum to lie in the lattice spanned by
    `basis` (it does, for an invariant basis of full rank).
    """
    from .ratlp import in_cone
    from math import gcd

    vecs = []
    for s in dec.orbit_sums:
        coords = coordinates_in(basis, s)
        if coords is None or any(c.denominator != 1 for c in coords):
            raise ValueError("orbit sum %r not in the lattice of the basis" % (s,))
        w = tuple(int(c) for c in coords)
        g = 0
        for x in w:
            g = gcd(g, abs(x))
        w = tuple(x // g for x in w)
        if w not in vecs:
            vecs.append(w)
    kept = list(vecs)
    for v in list(vecs):
        rest = [w for w in kept if w != v]
        if rest and in_cone(v, rest):
            kept = rest
    return tuple(kept)
