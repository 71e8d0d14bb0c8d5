"""Exact linear-programming feasibility over the rationals.

A small phase-1 simplex with Bland's rule, used for cone membership and
polytope bookkeeping where floating point would be untrustworthy.  Problem
sizes here are tiny (≤ ~20 variables), so clarity beats speed.
"""

from __future__ import annotations

from fractions import Fraction


def _phase1(a, b):
    """Feasibility of {a·x = b, x ≥ 0} (exact).  Returns x or None.

    Standard phase-1: append one artificial variable per row, minimise their
    sum by the simplex method with Bland's anti-cycling rule.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    rows = []
    for i in range(m):
        r = [Fraction(x) for x in a[i]]
        rhs = Fraction(b[i])
        if rhs < 0:
            r = [-x for x in r]
            rhs = -rhs
        rows.append(r + [Fraction(1) if j == i else Fraction(0) for j in range(m)] + [rhs])
    basis = [n + i for i in range(m)]

    while True:
        entering = None
        for j in range(n + m):
            cost_j = 1 if j >= n else 0
            reduced = cost_j - sum(rows[i][j] for i in range(m) if basis[i] >= n)
            if reduced < 0:
                entering = j  # Bland: smallest index
                break
        if entering is None:
            break
        pivot = None
        for i in range(m):
            if rows[i][entering] > 0:
                ratio = rows[i][-1] / rows[i][entering]
                if pivot is None or ratio < pivot[0] or (
                    ratio == pivot[0] and basis[i] < basis[pivot[1]]
                ):
                    pivot = (ratio, i)
        assert pivot is not None, "phase-1 objective is bounded below"
        _, pr = pivot
        pv = rows[pr][entering]
        rows[pr] = [x / pv for x in rows[pr]]
        for i in range(m):
            if i != pr and rows[i][entering] != 0:
                f = rows[i][entering]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[pr])]
        basis[pr] = entering

    if sum(rows[i][-1] for i in range(m) if basis[i] >= n) != 0:
        return None
    x = [Fraction(0)] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = rows[i][-1]
    return x


def in_cone(v, generators) -> bool:
    """Is v a nonnegative rational combination of the generators?"""
    if not generators:
        return all(x == 0 for x in v)
    d = len(v)
    a = [[generators[j][i] for j in range(len(generators))] for i in range(d)]
    return _phase1(a, list(v)) is not None


def feasible(a_eq=None, b_eq=None, a_le=None, b_le=None):
    """Solve {a_eq·y = b_eq, a_le·y ≤ b_le} for free y; returns y or None.

    Free variables are split as y = y⁺ − y⁻ and inequality rows get slack
    variables, reducing to phase-1 standard form.
    """
    a_eq = [list(r) for r in (a_eq or [])]
    a_le = [list(r) for r in (a_le or [])]
    b_eq = list(b_eq or [])
    b_le = list(b_le or [])
    rows = a_eq + a_le
    if not rows:
        return ()
    n = len(rows[0])
    m_le = len(a_le)
    a = []
    for i, r in enumerate(rows):
        split = [x for v in r for x in (v, -v)]
        slack = [Fraction(1) if (i - len(a_eq)) == j else Fraction(0) for j in range(m_le)]
        a.append(split + slack)
    x = _phase1(a, b_eq + b_le)
    if x is None:
        return None
    return tuple(x[2 * j] - x[2 * j + 1] for j in range(n))
