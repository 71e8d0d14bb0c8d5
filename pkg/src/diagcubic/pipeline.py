"""Assembly of the predicted leading constant and comparison reports.

The constant attached to a supported surface factors as

    theta = alpha * beta * zeta_limit * omega_infinity
            * prod_{p bad} (lambda_p^{-1} omega_p) * C0 C1 C2 C3

where alpha is the exact rational cone volume, beta = 1 for the supported
(Q-rational) families, zeta_limit is the residue product of the attached
etale algebra, omega_infinity the real density, the bad factors are exact
rationals, and C0..C3 the convergent Euler products over good primes.  The
base field is Q throughout, so the discriminant normalisation factor is 1
and is dropped.

:func:`compute_constant` evaluates every factor through its own module and
records them in a :class:`ConstantBreakdown` whose ``theta`` is exactly the
recomposition of the parts.  :func:`report` combines a breakdown with a
count series into a comparison row (including the ratio
``N / (theta * B * (log B)^{t-1})`` and the statistical estimate
``theta_stat``) plus plot-ready curve data.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .alpha import alpha_invariant
from .archimedean import QuadratureResult, leray_density
from .counting import CountSeries
from .fitting import theta_stat
from .localdens import EulerProducts, LocalFactor, euler_products, local_factor
from .residues import load_invariants, zeta_limit
from .surfaces import Classification, DiagonalSurface, classify

__all__ = [
    "ConstantBreakdown",
    "UnsupportedFamilyError",
    "ToleranceNotMetError",
    "compute_constant",
    "breakdown_row",
    "report",
]

DEFAULT_PRIME_CUTOFF = 10_000_000
DEFAULT_QUAD_TOL = 1e-4


class UnsupportedFamilyError(ValueError):
    """The surface lies outside the coefficient families this pipeline
    supports (for which beta = 1 is known); refuse rather than guess."""


class ToleranceNotMetError(RuntimeError):
    """A numerical stage exhausted its budget before reaching the requested
    tolerance."""


@dataclass(frozen=True)
class ConstantBreakdown:
    """Every factor of the constant, plus their product ``theta``."""

    classification: Classification
    alpha: Fraction
    beta: int
    zeta_limit: float
    omega_infinity: QuadratureResult
    local_factors: tuple[LocalFactor, ...]
    euler: EulerProducts
    theta: float

    @property
    def surface(self) -> DiagonalSurface:
        return self.classification.surface

    @property
    def rank(self) -> int:
        return self.classification.rank

    @property
    def bad_factors(self) -> dict[int, Fraction]:
        return {f.prime: f.value for f in self.local_factors}

    def recompose(self) -> float:
        """Multiply the stored parts back together (the ``theta`` invariant)."""
        return _assemble(
            self.alpha,
            self.beta,
            self.zeta_limit,
            self.omega_infinity.value,
            self.local_factors,
            self.euler,
        )


def _assemble(alpha, beta, zl, omega_inf, local_factors, euler) -> float:
    value = float(alpha) * beta * zl * omega_inf
    for factor in local_factors:
        value *= float(factor.value)
    return value * euler.product


def compute_constant(
    surface: DiagonalSurface,
    *,
    prime_cutoff: int = DEFAULT_PRIME_CUTOFF,
    quad_tol: float = DEFAULT_QUAD_TOL,
    field_invariants=None,
    threads: int = 1,
) -> ConstantBreakdown:
    """Evaluate all factors of the constant for a supported surface.

    ``field_invariants`` optionally names a CSV overriding the shipped
    cubic-field table.  With ``threads > 1`` the two expensive independent
    stages (Euler products, real-density quadrature) run concurrently.
    """
    cls = classify(surface)
    if not cls.is_supported:
        raise UnsupportedFamilyError(
            "surface %s (family %s) is outside the supported coefficient "
            "families" % (surface, cls.family.name)
        )
    alpha = alpha_invariant(cls)
    beta = 1  # the supported families are Q-rational
    zl = zeta_limit(cls, load_invariants(field_invariants))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=2) as pool:
            euler_job = pool.submit(euler_products, cls, prime_cutoff)
            dens_job = pool.submit(leray_density, surface, quad_tol)
            euler = euler_job.result()
            density = dens_job.result()
    else:
        euler = euler_products(cls, prime_cutoff)
        density = leray_density(surface, quad_tol)
    if not density.converged:
        raise ToleranceNotMetError(
            "real-density quadrature did not reach tolerance %g on %s "
            "(error estimate %g)" % (quad_tol, surface, density.error_estimate)
        )
    locals_ = tuple(local_factor(cls, p) for p in cls.bad_primes)

    return ConstantBreakdown(
        classification=cls,
        alpha=alpha,
        beta=beta,
        zeta_limit=zl,
        omega_infinity=density,
        local_factors=locals_,
        euler=euler,
        theta=_assemble(alpha, beta, zl, density.value, locals_, euler),
    )


def _fraction_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else "%d/%d" % (
        q.numerator,
        q.denominator,
    )


def breakdown_row(b: ConstantBreakdown) -> dict:
    """JSON-ready mapping of the breakdown.

    Exact rationals appear as ``"p/q"`` strings with float renditions
    alongside, so consumers can round-trip them losslessly.
    """
    return {
        "surface": list(b.surface.coeffs),
        "rank": b.rank,
        "family": b.classification.family.name,
        "alpha": _fraction_str(b.alpha),
        "alpha_float": float(b.alpha),
        "beta": b.beta,
        "zeta_limit": b.zeta_limit,
        "omega_inf": b.omega_infinity.value,
        "omega_inf_err": b.omega_infinity.error_estimate,
        "bad_factors": {str(p): _fraction_str(v) for p, v in b.bad_factors.items()},
        "bad_factors_float": {str(p): float(v) for p, v in b.bad_factors.items()},
        "C0": b.euler.c0,
        "C1": b.euler.c1,
        "C2": b.euler.c2,
        "C3": b.euler.c3,
        "prime_cutoff": b.euler.cutoff,
        "tail_bound": b.euler.tail_bound,
        "theta": b.theta,
    }


def normalized_count(n: int, height: int, theta: float, rank: int) -> float:
    """The comparison ratio ``N / (theta * B * (log B)^{t-1})``."""
    if height < 2:
        raise ValueError("heights below 2 have log B <= 0; ratio undefined")
    return n / (theta * height * math.log(height) ** (rank - 1))


def report(
    breakdown: ConstantBreakdown, series: CountSeries
) -> tuple[dict, str]:
    """Comparison row and curve data for a computed series.

    Returns ``(row, curve)``: ``row`` extends :func:`breakdown_row` with the
    final count, the ratio ``N/(theta B (log B)^{t-1})`` at the largest
    height, and ``theta_stat`` with its quotient by ``theta``;  ``curve`` is
    tab-separated text with one line per series entry, columns
    ``log_height``, ``normalized_count`` and the constant ``theta``
    reference, ready for any plotting tool.
    """
    if not series.entries:
        raise ValueError("empty count series")
    t = breakdown.rank
    theta = breakdown.theta
    b_last, n_last = series.entries[-1]
    stat = theta_stat(series, t)
    row = breakdown_row(breakdown)
    row.update(
        {
            "B": b_last,
            "N": n_last,
            "ratio": normalized_count(n_last, b_last, theta, t),
            "theta_stat": stat,
            "theta_stat_over_theta": stat / theta,
        }
    )
    lines = ["log_height\tnormalized_count\ttheta"]
    for height, count in series.entries:
        x = math.log(height)
        lines.append(
            "%.12g\t%.12g\t%.12g"
            % (x, count / (theta * height * x ** (t - 1)), theta)
        )
    return row, "\n".join(lines) + "\n"
