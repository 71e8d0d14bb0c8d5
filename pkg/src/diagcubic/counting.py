"""Counting rational points of bounded height on diagonal cubic surfaces.

``N(B)`` is the number of points (x:y:z:t) in projective space with integer
coprime coordinates, ``a x^3 + b y^3 + c z^3 + d t^3 = 0``, height
``max(|x|,|y|,|z|,|t|) <= B``, and not lying on one of the 27 lines of the
surface.  Each projective point is counted once: (v) and (-v) are identified.

Two independent engines are provided and tested against each other:

* :func:`brute_count` — direct cubic enumeration: loop over (x, y, z) and
  solve for an integral t with an exact cube-root test.  Reference oracle,
  usable up to B = 1000.
* :func:`fast_count` — collision counting: a point off the x/y-pairing lines
  with the first cubic pair positive corresponds to exactly one coincidence
  ``u = a x^3 + b y^3 = -(c z^3 + d t^3) > 0``; both value multisets are
  generated in ascending value order and merged.  The value axis is processed
  in bounded windows (a blocked form of the sorted-stream merge: each side of
  a window is produced by closed-form per-coordinate interval bounds, so
  memory stays O(window) and nothing of size O(B^2) is ever held), equal-value
  runs on the two sides are cross-combined, and the combined quadruples are
  filtered for primitivity and line membership.

Points with ``u = 0`` need no enumeration at all: on the surface, ``u = 0``
forces ``c z^3 + d t^3 = 0`` as well, which is precisely the first pairing of
lines — always excluded.  The remaining two pairings are filtered explicitly.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .surfaces import DiagonalSurface

__all__ = [
    "RationalPoint",
    "CountSeries",
    "is_on_line",
    "brute_count",
    "fast_count",
    "count_series",
    "enumerate_points",
]

#: heights above this make (a+b) B^3 unsafe in signed 64-bit arithmetic for
#: the coefficient sizes this package targets
_MAX_HEIGHT = 2**20
#: brute_count is cubic in B; cap it as an oracle
_MAX_BRUTE_HEIGHT = 1000
#: target number of generated values per side per value window of fast_count
_WINDOW_TARGET = 4_000_000


@dataclass(frozen=True)
class RationalPoint:
    """A projective rational point stored by its canonical integer quadruple:
    coprime coordinates whose first nonzero entry is positive."""

    x: int
    y: int
    z: int
    t: int

    @property
    def height(self) -> int:
        return max(abs(self.x), abs(self.y), abs(self.z), abs(self.t))

    @property
    def coords(self) -> tuple[int, int, int, int]:
        return (self.x, self.y, self.z, self.t)

    @classmethod
    def canonical(cls, x: int, y: int, z: int, t: int) -> "RationalPoint":
        """Reduce a nonzero integer quadruple to the canonical representative
        of its projective point (divide by the gcd, fix the leading sign)."""
        g = math.gcd(math.gcd(abs(x), abs(y)), math.gcd(abs(z), abs(t)))
        if g == 0:
            raise ValueError("the zero quadruple is not a projective point")
        x, y, z, t = x // g, y // g, z // g, t // g
        for lead in (x, y, z, t):
            if lead:
                if lead < 0:
                    x, y, z, t = -x, -y, -z, -t
                break
        return cls(x, y, z, t)


@dataclass(frozen=True)
class CountSeries:
    """Counts N(B_i) along a height ladder: B_i are consecutive powers of two
    from 128 up to B, with a final entry at B itself when B is not a power of
    two.  B_i strictly increase and N_i are nondecreasing."""

    entries: tuple[tuple[int, int], ...]

    def __post_init__(self):
        bs = [b for b, _ in self.entries]
        ns = [n for _, n in self.entries]
        if any(b2 <= b1 for b1, b2 in zip(bs, bs[1:])):
            raise ValueError("heights must be strictly increasing")
        if any(n2 < n1 for n1, n2 in zip(ns, ns[1:])):
            raise ValueError("counts must be nondecreasing")

    @property
    def heights(self) -> tuple[int, ...]:
        return tuple(b for b, _ in self.entries)

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(n for _, n in self.entries)


def _coeffs(surface: DiagonalSurface) -> tuple[int, int, int, int]:
    return surface.coeffs


def is_on_line(surface: DiagonalSurface, point) -> bool:
    """Whether a surface point lies on one of the 27 lines.

    Over the algebraic closure every line annihilates one coefficient pairing,
    so a rational point is on a line iff one of the three pairing sums
    vanishes doubly:

        (a x^3 + b y^3 = 0  and  c z^3 + d t^3 = 0)   or
        (a x^3 + c z^3 = 0  and  b y^3 + d t^3 = 0)   or
        (a x^3 + d t^3 = 0  and  b y^3 + c z^3 = 0).

    ``point`` may be a :class:`RationalPoint` or a coordinate 4-tuple; it must
    satisfy the surface equation.
    """
    x, y, z, t = point.coords if isinstance(point, RationalPoint) else point
    a, b, c, d = _coeffs(surface)
    ax, by, cz, dt = a * x**3, b * y**3, c * z**3, d * t**3
    if ax + by + cz + dt != 0:
        raise ValueError(f"{(x, y, z, t)} does not lie on {surface}")
    return (
        (ax + by == 0 and cz + dt == 0)
        or (ax + cz == 0 and by + dt == 0)
        or (ax + dt == 0 and by + cz == 0)
    )


def _check_bounds(surface: DiagonalSurface, B: int) -> None:
    if B < 0:
        raise ValueError("height bound must be nonnegative")
    if B > _MAX_HEIGHT:
        raise ValueError(f"height bound {B} exceeds the supported {_MAX_HEIGHT}")
    a, b, c, d = _coeffs(surface)
    if (a + b + c + d) * B**3 >= 2**62:
        raise OverflowError(
            "coefficient/height combination overflows 64-bit value arithmetic"
        )


def _exact_scaled_cbrt(m: np.ndarray, d: int) -> tuple[np.ndarray, np.ndarray]:
    """Per element: (r, ok) with d * r^3 = m where ok, via float cube root
    plus integer correction (exact for |m| < 2^62; avoids integer division)."""
    r = np.rint(np.cbrt(m.astype(np.float64) / d)).astype(np.int64)
    ok = d * r**3 == m
    for delta in (-1, 1):
        cand = r + delta
        hit = ~ok & (d * cand**3 == m)
        r = np.where(hit, cand, r)
        ok |= hit
    return r, ok


def _cube_floor(bound: np.ndarray, m: int) -> np.ndarray:
    """Largest integer y with m*y^3 <= bound (m > 0), exactly, vectorized."""
    y = np.floor(np.cbrt(bound.astype(np.float64) / m)).astype(np.int64)
    # float rounding can be off by one in either direction; fix exactly
    for _ in range(2):
        too_high = m * y**3 > bound
        y[too_high] -= 1
        low = m * (y + 1) ** 3 <= bound
        y[low] += 1
    return y


def _pairs_in_window(
    m1: int, m2: int, B: int, lo: int, hi: int, count_only: bool
):
    """All integer pairs (p, q), |p|,|q| <= B, with m1 p^3 + m2 q^3 in
    [lo, hi).  Returns the total count, or (values, p, q) arrays sorted by
    value.  Generation is by closed-form q-intervals for each p."""
    p = np.arange(-B, B + 1, dtype=np.int64)
    rest_lo = lo - m1 * p**3  # need m2 q^3 >= rest_lo, i.e. q >= qmin
    rest_hi = hi - 1 - m1 * p**3  # and m2 q^3 <= rest_hi, i.e. q <= qmax
    qmax = np.minimum(_cube_floor(rest_hi, m2), B)
    # smallest q with m2 q^3 >= rest_lo is floor-cbrt of rest_lo - 1, plus 1
    qmin = np.maximum(_cube_floor(rest_lo - 1, m2) + 1, -B)
    counts = np.maximum(qmax - qmin + 1, 0)
    total = int(counts.sum())
    if count_only:
        return total
    if total == 0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty, empty
    keep = counts > 0
    p, qmin, counts = p[keep], qmin[keep], counts[keep]
    offsets = np.concatenate(([0], np.cumsum(counts)[:-1]))
    pv = np.repeat(p, counts)
    qv = np.repeat(qmin - offsets, counts) + np.arange(total, dtype=np.int64)
    values = m1 * pv**3 + m2 * qv**3
    order = np.argsort(values, kind="stable")
    return values[order], pv[order], qv[order]


def _window_histogram(
    coeffs: tuple[int, int, int, int], B: int, lo: int, hi: int
) -> np.ndarray:
    """Height histogram of counted points whose collision value lies in
    [lo, hi): generate both sides, merge equal-value runs, cross-combine,
    filter lines and imprimitive quadruples."""
    a, b, c, d = coeffs
    hist = np.zeros(B + 1, dtype=np.int64)
    # left side: u = a x^3 + b y^3 in [lo, hi)
    u, x, y = _pairs_in_window(a, b, B, lo, hi, count_only=False)
    if len(u) == 0:
        return hist
    # right side: -(c z^3 + d t^3) in [lo, hi)  <=>  c z^3 + d t^3 in (-hi,-lo]
    v, z, t = _pairs_in_window(c, d, B, -hi + 1, -lo + 1, count_only=False)
    if len(v) == 0:
        return hist
    v = -v[::-1]  # ascending collision values
    z = z[::-1]
    t = t[::-1]

    vals_u = np.unique(u)
    vals_v = np.unique(v)
    common = np.intersect1d(vals_u, vals_v, assume_unique=True)
    if len(common) == 0:
        return hist
    a_lo = np.searchsorted(u, common, side="left")
    a_hi = np.searchsorted(u, common, side="right")
    b_lo = np.searchsorted(v, common, side="left")
    b_hi = np.searchsorted(v, common, side="right")
    la = a_hi - a_lo
    lb = b_hi - b_lo
    quads = la * lb
    total = int(quads.sum())
    base = np.repeat(np.arange(len(common)), quads)
    first = np.concatenate(([0], np.cumsum(quads)[:-1]))
    within = np.arange(total, dtype=np.int64) - np.repeat(first, quads)
    ia = a_lo[base] + within // lb[base]
    ib = b_lo[base] + within % lb[base]

    xq, yq, zq, tq = x[ia], y[ia], z[ib], t[ib]
    # line filter first: the two remaining pairings (the x/y pairing is
    # impossible at u > 0).  On line-rich surfaces these dominate the
    # collisions, so dropping them before the gcd pass saves most of the work.
    ax3, by3 = a * xq**3, b * yq**3
    cz3, dt3 = c * zq**3, d * tq**3
    on_line = ((ax3 + cz3 == 0) & (by3 + dt3 == 0)) | (
        (ax3 + dt3 == 0) & (by3 + cz3 == 0)
    )
    keep = ~on_line
    xq, yq, zq, tq = xq[keep], yq[keep], zq[keep], tq[keep]
    if len(xq) == 0:
        return hist
    g = np.gcd(
        np.gcd(np.abs(xq), np.abs(yq)), np.gcd(np.abs(zq), np.abs(tq))
    )
    prim = g == 1
    xq, yq, zq, tq = xq[prim], yq[prim], zq[prim], tq[prim]
    if len(xq) == 0:
        return hist
    h = np.maximum(
        np.maximum(np.abs(xq), np.abs(yq)), np.maximum(np.abs(zq), np.abs(tq))
    )
    hist += np.bincount(h, minlength=B + 1)
    return hist


def _plan_windows(
    coeffs: tuple[int, int, int, int], B: int
) -> list[tuple[int, int]]:
    """Half-open value windows covering [1, span] with bounded per-side output
    size.  Windows are pre-counted by the closed-form bounds; oversized ones
    are split, empty ones (on either side) are dropped."""
    a, b, c, d = coeffs
    span = min(a + b, c + d) * B**3
    if span < 1:
        return []
    initial = max(1, math.ceil(2 * (B + 1) * B / _WINDOW_TARGET))
    step = max(1, span // initial + 1)
    stack = [(lo, min(lo + step, span + 1)) for lo in range(1, span + 1, step)]
    stack.reverse()
    windows = []
    while stack:
        lo, hi = stack.pop()
        n_left = _pairs_in_window(a, b, B, lo, hi, count_only=True)
        if n_left == 0:
            continue
        n_right = _pairs_in_window(c, d, B, -hi + 1, -lo + 1, count_only=True)
        if n_right == 0:
            continue
        if max(n_left, n_right) > 4 * _WINDOW_TARGET and hi - lo > 1:
            mid = (lo + hi) // 2
            stack.append((mid, hi))
            stack.append((lo, mid))
            continue
        windows.append((lo, hi))
    return windows


def _height_histogram(
    surface: DiagonalSurface, B: int, threads: int = 1
) -> np.ndarray:
    """Histogram over heights 0..B of all counted points of height <= B."""
    _check_bounds(surface, B)
    coeffs = _coeffs(surface)
    hist = np.zeros(B + 1, dtype=np.int64)
    if B == 0:
        return hist
    windows = _plan_windows(coeffs, B)
    if threads > 1 and len(windows) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for part in pool.map(
                lambda w: _window_histogram(coeffs, B, *w), windows
            ):
                hist += part
    else:
        for lo, hi in windows:
            hist += _window_histogram(coeffs, B, lo, hi)
    return hist


def fast_count(surface: DiagonalSurface, B: int, threads: int = 1) -> int:
    """N(B) by sorted-value collision counting.

    Merges the ascending value streams {a x^3 + b y^3} and {-(c z^3 + d t^3)}
    over |coordinate| <= B in bounded windows, cross-combines equal-value
    runs, and filters line points and imprimitive quadruples.  Exact; equals
    :func:`brute_count` wherever both run.

    >>> from diagcubic.surfaces import new_surface
    >>> fast_count(new_surface(1, 1, 2, 4), 1)
    2
    >>> fast_count(new_surface(1, 1, 1, 1), 1)
    0
    """
    return int(_height_histogram(surface, B, threads=threads).sum())


def count_series(surface: DiagonalSurface, B: int, threads: int = 1) -> CountSeries:
    """N(B_i) for B_i = 128, 256, ..., up to B (final entry at B itself when
    it is not a power of two), from a single enumeration pass bucketing
    points by height.  Requires B >= 128.
    """
    if B < 128:
        raise ValueError("count_series requires a height bound of at least 128")
    hist = _height_histogram(surface, B, threads=threads)
    cumulative = np.cumsum(hist)
    heights = []
    h = 128
    while h <= B:
        heights.append(h)
        h *= 2
    if heights[-1] != B:
        heights.append(B)
    return CountSeries(tuple((h, int(cumulative[h])) for h in heights))


def _brute_quadruples(surface: DiagonalSurface, B: int):
    """All integer quadruples on the surface with canonical leading sign,
    0 < height <= B, coprime, off the lines — by direct (x, y, z) enumeration
    and an exact cube-root solve for t.  Returns a list of tuples."""
    a, b, c, d = _coeffs(surface)
    zs = np.arange(-B, B + 1, dtype=np.int64)
    cz3 = c * zs**3
    found = []
    # the canonical representative has its first nonzero coordinate positive,
    # so x >= 0 suffices; within x = 0, y >= 0 suffices, and so on
    for x in range(0, B + 1):
        ax3 = a * x**3
        ys = np.arange(0 if x == 0 else -B, B + 1, dtype=np.int64)
        m = -(ax3 + b * ys**3)[:, None] - cz3[None, :]
        tv, ok = _exact_scaled_cbrt(m, d)
        ok &= np.abs(tv) <= B
        iy, iz = np.nonzero(ok)
        if len(iy) == 0:
            continue
        yq, zq, tq = ys[iy], zs[iz], tv[iy, iz]
        if x == 0:
            keep = (yq > 0) | ((yq == 0) & ((zq > 0) | ((zq == 0) & (tq > 0))))
        else:
            keep = np.ones(len(yq), dtype=bool)
        g = np.gcd(np.gcd(x, np.abs(yq)), np.gcd(np.abs(zq), np.abs(tq)))
        keep &= g == 1
        ax, by = a * x**3, b * yq**3
        cz, dt = c * zq**3, d * tq**3
        keep &= ~(
            ((ax + by == 0) & (cz + dt == 0))
            | ((ax + cz == 0) & (by + dt == 0))
            | ((ax + dt == 0) & (by + cz == 0))
        )
        found.extend(
            (x, int(yv), int(zv), int(tvv))
            for yv, zv, tvv in zip(yq[keep], zq[keep], tq[keep])
        )
    return found


def brute_count(surface: DiagonalSurface, B: int) -> int:
    """N(B) by direct cubic enumeration (reference oracle, B <= 1000).

    >>> from diagcubic.surfaces import new_surface
    >>> brute_count(new_surface(1, 1, 2, 4), 1)
    2
    >>> brute_count(new_surface(1, 1, 1, 1), 1)
    0
    >>> brute_count(new_surface(1, 1, 2, 4), 0)
    0
    """
    if B > _MAX_BRUTE_HEIGHT:
        raise ValueError(
            f"brute_count is a cubic-time oracle, capped at B = {_MAX_BRUTE_HEIGHT}"
        )
    _check_bounds(surface, B)
    if B == 0:
        return 0
    return len(_brute_quadruples(surface, B))


def enumerate_points(surface: DiagonalSurface, B: int) -> list[RationalPoint]:
    """The counted points themselves (canonical representatives), for
    verification at small heights (B <= 1000)."""
    if B > _MAX_BRUTE_HEIGHT:
        raise ValueError(
            f"enumerate_points is a cubic-time oracle, capped at B = {_MAX_BRUTE_HEIGHT}"
        )
    _check_bounds(surface, B)
    if B == 0:
        return []
    return [RationalPoint(*q) for q in _brute_quadruples(surface, B)]
