"""The volume α(V) of the dual effective cone sliced at anticanonical height 1.

α(V) = Vol{ x ∈ Λ_eff(V)^∨ : ⟨ω, x⟩ = 1 } with the hyperplane measure
normalised so that dx̄ ∧ d⟨ω,·⟩ is the Lebesgue measure of the dual lattice.
Concretely, in lattice coordinates pick k with ω_k ≠ 0, eliminate x_k via
⟨ω,x⟩ = 1, and divide the Lebesgue volume of the resulting polytope by |ω_k|.

Everything is exact: vertices are enumerated over Fractions and the volume
is computed by two unrelated methods (a divergence-theorem sum over facets
and a fan of simplices from a vertex) that must agree.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import factorial, gcd

from .ratlp import feasible


# ---------------------------------------------------------------------------
# Exact polytope helpers (dimension ≤ 3).
# ---------------------------------------------------------------------------

def _solve_square(a, b):
    """Solve the d×d system a·y = b over Fractions; None if singular."""
    d = len(b)
    m = [[Fraction(a[i][j]) for j in range(d)] + [Fraction(b[i])] for i in range(d)]
    for col in range(d):
        piv = next((r for r in range(col, d) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        pv = m[col][col]
        m[col] = [x / pv for x in m[col]]
        for r in range(d):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return tuple(m[i][d] for i in range(d))


def polytope_vertices(a, b):
    """Vertices of {y : a·y ≤ b}, bounded case, by basis enumeration."""
    d = len(a[0])
    verts = set()
    for idx in combinations(range(len(a)), d):
        y = _solve_square([a[i] for i in idx], [b[i] for i in idx])
        if y is None:
            continue
        if all(sum(a[i][j] * y[j] for j in range(d)) <= b[i] for i in range(len(a))):
            verts.add(y)
    return sorted(verts)


def assert_bounded(a, b):
    """Fail unless the recession cone of {a·y ≤ b} is {0}."""
    d = len(a[0])
    zero = [0] * len(a)
    for j in range(d):
        for s in (1, -1):
            unit = [[1 if i == j else 0 for i in range(d)]]
            if feasible(a_eq=unit, b_eq=[s], a_le=a, b_le=zero) is not None:
                raise ValueError("polytope is unbounded in coordinate %d" % j)


def _hull_order_2d(points):
    """Convex hull of distinct 2-D Fraction points, counter-clockwise."""
    pts = sorted(points)
    if len(pts) <= 2:
        return pts

    def cross(o, p, q):
        return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _hull_volume(points, dim):
    """Exact volume of the convex hull of `points` in R^dim, dim ≤ 2."""
    if dim == 0:
        return Fraction(1)
    if dim == 1:
        xs = [p[0] for p in points]
        return max(xs) - min(xs)
    ring = _hull_order_2d(set(points))
    s = Fraction(0)
    for i in range(len(ring)):
        x0, y0 = ring[i]
        x1, y1 = ring[(i + 1) % len(ring)]
        s += x0 * y1 - x1 * y0
    return abs(s) / 2


def _facets(a, b, verts):
    """(normal, offset, vertex tuple) per facet, deduplicated by hyperplane."""
    d = len(a[0])
    seen = {}
    for i in range(len(a)):
        on = tuple(
            v for v in verts if sum(a[i][j] * v[j] for j in range(d)) == b[i]
        )
        if len(on) < d:
            continue
        # primitive representative of the hyperplane (n, b)
        g = 0
        for x in a[i]:
            g = gcd(g, abs(x))
        g = gcd(g, abs(b[i])) or 1
        key = tuple(x // g for x in a[i]) + (b[i] // g,)
        seen[key] = (a[i], b[i], on)
    out = []
    for n, off, on in seen.values():
        # keep only genuine (d−1)-dimensional faces
        if _face_dim(on) == d - 1:
            out.append((n, off, on))
    return out


def _face_dim(points):
    if not points:
        return -1
    base = points[0]
    diffs = [[p[j] - base[j] for j in range(len(base))] for p in points[1:]]
    rank = 0
    for col in range(len(base)):
        piv = next((r for r in range(rank, len(diffs)) if diffs[r][col] != 0), None)
        if piv is None:
            continue
        diffs[rank], diffs[piv] = diffs[piv], diffs[rank]
        pv = diffs[rank][col]
        for r in range(len(diffs)):
            if r != rank and diffs[r][col] != 0:
                f = diffs[r][col] / pv
                diffs[r] = [x - f * y for x, y in zip(diffs[r], diffs[rank])]
        rank += 1
    return rank


def _project_out(points, k):
    return [tuple(p[j] for j in range(len(p)) if j != k) for p in points]


def volume_by_divergence(a, b, verts):
    """(1/d)·Σ_facets offset·vol(projected facet)/|n_k|, all exact.

    For a facet on ⟨n,y⟩ = β with n_k ≠ 0, the Euclidean facet area equals
    |n|/|n_k| times the area of its projection along coordinate k, and its
    signed distance from the origin is β/|n|, so each summand is rational.
    """
    d = len(a[0])
    total = Fraction(0)
    for n, off, on in _facets(a, b, verts):
        k = next(j for j in range(d) if n[j] != 0)
        total += Fraction(off, abs(n[k])) * _hull_volume(_project_out(on, k), d - 1)
    return total / d


def volume_by_fan(a, b, verts):
    """Sum of simplex volumes coning a vertex over the opposite facets."""
    d = len(a[0])
    apex = verts[0]
    total = Fraction(0)
    for n, off, on in _facets(a, b, verts):
        if sum(n[j] * apex[j] for j in range(d)) == off:
            continue
        total += _cone_volume(apex, on, d)
    return total


def _cone_volume(apex, face_points, d):
    if d == 1:
        return abs(face_points[0][0] - apex[0])
    if d == 2:
        p, q = sorted(face_points)[0], sorted(face_points)[-1]
        det = (p[0] - apex[0]) * (q[1] - apex[1]) - (p[1] - apex[1]) * (q[0] - apex[0])
        return abs(det) / 2
    # d == 3: order the polygon by the hull of a non-degenerate projection
    n3 = _face_dim(face_points)
    assert n3 == 2
    for k in range(3):
        proj = _project_out(face_points, k)
        if _face_dim(proj) == 2:
            break
    ring2 = _hull_order_2d(set(proj))
    lookup = {}
    for p in face_points:
        lookup.setdefault(tuple(x for j, x in enumerate(p) if j != k), p)
    ring = [lookup[p] for p in ring2]
    total = Fraction(0)
    for i in range(1, len(ring) - 1):
        u = [ring[0][j] - apex[j] for j in range(3)]
        v = [ring[i][j] - apex[j] for j in range(3)]
        w = [ring[i + 1][j] - apex[j] for j in range(3)]
        det = (
            u[0] * (v[1] * w[2] - v[2] * w[1])
            - u[1] * (v[0] * w[2] - v[2] * w[0])
            + u[2] * (v[0] * w[1] - v[1] * w[0])
        )
        total += abs(det)
    return total / factorial(3)


# ---------------------------------------------------------------------------
# The α invariant itself.
# ---------------------------------------------------------------------------

def slice_inequalities(cone_gens, omega):
    """Eliminate x_k from {⟨g,x⟩ ≥ 0, ⟨ω,x⟩ = 1}: returns (k, A, b) integer.

    k is the last index with ω_k ≠ 0; the inequalities A·y ≤ b live in the
    remaining coordinates.
    """
    t = len(omega)
    k = max(j for j in range(t) if omega[j] != 0)
    s = 1 if omega[k] > 0 else -1
    rows, rhs = [], []
    for g in cone_gens:
        rows.append([-s * (omega[k] * g[j] - g[k] * omega[j]) for j in range(t) if j != k])
        rhs.append(s * g[k])
    return k, rows, rhs


def alpha_volume(cone_gens, omega) -> Fraction:
    """Exact α given effective-cone generators and ω in lattice coordinates."""
    t = len(omega)
    k, a, b = slice_inequalities(cone_gens, omega)
    scale = Fraction(1, abs(omega[k]))
    if t == 1:
        if any(x < 0 for x in b):
            raise ValueError("anticanonical class not in the effective cone")
        return scale
    assert_bounded(a, b)
    verts = polytope_vertices(a, b)
    if not verts:
        raise ValueError("empty height-1 slice")
    v1 = volume_by_divergence(a, b, verts)
    v2 = volume_by_fan(a, b, verts)
    assert v1 == v2, "volume cross-check failed: %s vs %s" % (v1, v2)
    return v1 * scale


def alpha_invariant(classification) -> Fraction:
    """α(V) computed from scratch: orbits → invariant lattice → cone → volume."""
    from .lines import (
        OMEGA,
        coordinates_in,
        effective_cone,
        invariant_basis,
        orbit_decomposition,
    )

    dec = orbit_decomposition(classification)
    basis = invariant_basis(dec)
    gens = effective_cone(dec, basis)
    omega = coordinates_in(basis, OMEGA)
    assert omega is not None and all(c.denominator == 1 for c in omega)
    return alpha_volume(gens, tuple(int(c) for c in omega))
