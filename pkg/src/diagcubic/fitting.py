"""Statistical estimate of the leading constant from a count series.

If ``N(B) ~ B P(log B)`` with ``deg P = t - 1``, the leading coefficient of
``P`` can be recovered from finitely many samples by least squares: with
``x_i = log B_i`` and ``y_i = N(B_i)/B_i``, fit a polynomial ``Q`` of degree
``t - 1`` minimising ``sum (Q(x_i) - y_i)^2`` and read off its top
coefficient, written ``theta_stat``.

Two interchangeable routes are provided and tested against each other:

* :func:`leading_coeff_closed` — closed-form mean-value expressions
  ``A_1, A_2, A_3`` for degrees 1, 2, 3.  They are the result of sequentially
  orthogonalising the monomial regressors (each ``A_k`` is the covariance of
  ``y`` with the part of ``x^k`` orthogonal to the lower monomials, divided
  by the variance of that part), hence algebraically equal to the
  normal-equation solution.
* :func:`leading_coeff_ls` — the generic (t x t) normal equations in the
  monomial basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .counting import CountSeries

__all__ = [
    "FitInput",
    "DegenerateDesignError",
    "leading_coeff_closed",
    "leading_coeff_ls",
    "theta_stat",
]


class DegenerateDesignError(ValueError):
    """The sample points cannot determine the requested coefficient (fewer
    distinct abscissae than coefficients, or a singular normal matrix)."""


@dataclass(frozen=True)
class FitInput:
    """Samples ``(x_i, y_i)`` and the polynomial degree + 1 to fit.

    ``rank_t`` is the expected power of ``log B`` in the asymptotic, i.e. the
    fitted polynomial has degree ``rank_t - 1``; at least ``rank_t`` distinct
    ``x_i`` are required.
    """

    points: tuple[tuple[float, float], ...]
    rank_t: int

    def __post_init__(self):
        if self.rank_t not in (2, 3, 4):
            raise ValueError(f"rank_t must be 2, 3 or 4, got {self.rank_t!r}")
        if len({x for x, _ in self.points}) < self.rank_t:
            raise DegenerateDesignError(
                f"need at least {self.rank_t} distinct sample abscissae"
            )

    @property
    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        pts = np.asarray(self.points, dtype=np.float64)
        return pts[:, 0], pts[:, 1]


def _mean(v: np.ndarray) -> float:
    return float(v.mean())


def leading_coeff_closed(fit: FitInput) -> float:
    """Leading coefficient by the closed-form mean-value expressions.

    With ``<R>`` the mean of ``R(x_i, y_i)`` over the samples:

    degree 1:  A1 = (<XY> - <Y><X>) / (<X^2> - <X>^2)

    degree 2:  A2 = (<YX^2> - <Y><X^2> - c32 * (<YX> - <Y><X>) / v1)
                    / (<X^4> - <X^2>^2 - c32^2 / v1)
               where v1 = <X^2> - <X>^2 and c32 = <X^3> - <X><X^2>

    degree 3:  A3 = (<YX^3> - <Y><X^3> - c41 * (<YX> - <Y><X>) / v1
                     - beta * delta / gamma)
                    / (<X^6> - <X^3>^2 - c41^2 / v1 - beta^2 / gamma)
               with c41 = <X^4> - <X><X^3> and
               beta  = <X^5> - <X^3><X^2> - c32 / v1 * (<X^4> - <X^3><X>),
               gamma = <X^4> - <X^2>^2 - c32^2 / v1,
               delta = <YX^2> - <Y><X^2> - c32 / v1 * (<YX> - <Y><X>).
    """
    x, y = fit.arrays
    v1 = _mean(x * x) - _mean(x) ** 2
    if v1 <= 0.0:
        raise DegenerateDesignError("zero variance in the sample abscissae")
    cov_y_x = _mean(y * x) - _mean(y) * _mean(x)
    if fit.rank_t == 2:
        return cov_y_x / v1

    x2, x3 = x * x, x * x * x
    c32 = _mean(x3) - _mean(x) * _mean(x2)
    cov_y_x2 = _mean(y * x2) - _mean(y) * _mean(x2)
    gamma = _mean(x2 * x2) - _mean(x2) ** 2 - c32**2 / v1
    if fit.rank_t == 3:
        if gamma <= 0.0:
            raise DegenerateDesignError("degenerate design for a quadratic fit")
        return (cov_y_x2 - c32 * cov_y_x / v1) / gamma

    c41 = _mean(x2 * x2) - _mean(x) * _mean(x3)
    beta = _mean(x2 * x3) - _mean(x3) * _mean(x2) - c32 / v1 * c41
    delta = cov_y_x2 - c32 / v1 * cov_y_x
    if gamma <= 0.0:
        raise DegenerateDesignError("degenerate design for a cubic fit")
    denom = _mean(x3 * x3) - _mean(x3) ** 2 - c41**2 / v1 - beta**2 / gamma
    if denom <= 0.0:
        raise DegenerateDesignError("degenerate design for a cubic fit")
    cov_y_x3 = _mean(y * x3) - _mean(y) * _mean(x3)
    return (cov_y_x3 - c41 * cov_y_x / v1 - beta * delta / gamma) / denom


def leading_coeff_ls(fit: FitInput) -> float:
    """Leading coefficient from the normal equations in the monomial basis."""
    x, y = fit.arrays
    t = fit.rank_t
    M = np.vander(x, t, increasing=True)
    gram = M.T @ M
    rhs = M.T @ y
    try:
        coeffs = np.linalg.solve(gram, rhs)
    except np.linalg.LinAlgError as exc:
        raise DegenerateDesignError("singular normal matrix") from exc
    return float(coeffs[-1])


def theta_stat(series: CountSeries, rank_t: int) -> float:
    """Fit ``N(B_i)/B_i`` against ``log B_i`` (natural logarithm) and return
    the degree-``rank_t - 1`` coefficient — the statistical estimate of the
    leading constant in ``N(B) ~ theta * B * (log B)^{t-1}``."""
    points = tuple((math.log(b), n / b) for b, n in series.entries)
    return leading_coeff_closed(FitInput(points, rank_t))
