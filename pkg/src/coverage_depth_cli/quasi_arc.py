"""
Expectation of the dimension-3 codes built from balanced quasi-arcs.

The finite formula depends on the two design integers x and y (length
3x + 3y); the asymptotic one only on the ratio eps = y/x. The best ratio is
the unique positive root of a degree-six numerator, located here by exact
rational bisection.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Union

from .combinat import binom
from .constants import LOGGER_NAME
from .errors import PreconditionError
from .models import QuasiArcParams, rational_to_dict

__all__ = [
    "QuasiArcOptimum",
    "quasiarc_derivative_numerator",
    "quasiarc_expectation",
    "quasiarc_limit",
    "quasiarc_optimize",
]

RationalLike = Union[Fraction, int, str, float]

# -261 - 513e - 63e^2 + 583e^3 + 592e^4 + 238e^5 + 36e^6, constant term first
DERIVATIVE_COEFFICIENTS = (-261, -513, -63, 583, 592, 238, 36)
BRACKET = (Fraction(0), Fraction(4))

logger = logging.getLogger(LOGGER_NAME)


def _rational(value: RationalLike) -> Fraction:
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


def quasiarc_expectation(x: int, y: int) -> Fraction:
    """Exact E[tau_i] of the [3x + 3y, 3] quasi-arc code."""
    QuasiArcParams(x, y).validate()
    n = 3 * x + 3 * y
    pairs = 2 * (x * y + binom(x, 2)) + y * (3 * x + 2 * y) + Fraction(y * (y - 1), 2)
    value = 3 + Fraction(2, n - 2) - Fraction(y - 1, n - 1) - pairs / binom(n - 1, 2)
    top = x + 2 * y
    running = Fraction(1)
    for j in range(top):
        running *= Fraction(top - j, n - j - 1)
        if j + 1 >= 3:
            value += running
    for s in range(3, y + 2):
        value += Fraction(2 * binom(y, s - 1) * x, binom(n - 1, s))
    return value


def quasiarc_limit(eps: RationalLike) -> Fraction:
    """Limit of E[tau_i] as x grows with y = eps * x."""
    e = _rational(eps)
    if e < 0:
        raise PreconditionError(f"eps must be non-negative, got {e}")
    numerator = 153 + 543 * e + 805 * e**2 + 611 * e**3 + 234 * e**4 + 36 * e**5
    denominator = 3 * (1 + e) ** 2 * (2 + e) * (3 + 2 * e) ** 2
    return numerator / denominator


def quasiarc_derivative_numerator(eps: RationalLike) -> Fraction:
    e = _rational(eps)
    return sum((c * e**power for power, c in enumerate(DERIVATIVE_COEFFICIENTS)), Fraction(0))


def _lipschitz_bound(upper: Fraction) -> Fraction:
    """Bound on |N'| over [0, upper]."""
    terms = enumerate(DERIVATIVE_COEFFICIENTS)
    return sum((abs(c) * p * upper ** (p - 1) for p, c in terms if p), Fraction(0))


@dataclass(frozen=True)
class QuasiArcOptimum:
    """Minimising ratio with its certified bisection bracket."""

    epsilon: Fraction
    minimum: Fraction
    iterations: int
    bracket_width: Fraction
    residual_bound: Fraction

    def to_dict(self, precision: int = 3) -> Dict[str, Any]:
        return {
            "epsilon": rational_to_dict(self.epsilon, precision),
            "minimum": rational_to_dict(self.minimum, precision),
            "ratio_to_k": rational_to_dict(self.minimum / 3, precision),
            "iterations": self.iterations,
            "bracket_width": rational_to_dict(self.bracket_width, precision),
            "residual_bound": rational_to_dict(self.residual_bound, precision),
        }


def quasiarc_optimize(tolerance: RationalLike = Fraction(1, 10**10)) -> QuasiArcOptimum:
    """
    Bisect the derivative numerator on [0, 4] until the bracket is narrower than ``tolerance``.

    Returns the bracket midpoint; the numerator there is at most
    L * width / 2 in absolute value, L bounding |N'| on the bracket.
    """
    tol = _rational(tolerance)
    if tol <= 0:
        raise PreconditionError(f"tolerance must be positive, got {tol}")
    low, high = BRACKET
    if not quasiarc_derivative_numerator(low) < 0 < quasiarc_derivative_numerator(high):
        raise AssertionError("derivative numerator does not change sign on [0, 4]")
    iterations = 0
    while high - low > tol:
        middle = (low + high) / 2
        if quasiarc_derivative_numerator(middle) < 0:
            low = middle
        else:
            high = middle
        iterations += 1
    root = (low + high) / 2
    width = high - low
    logger.debug("Bisection converged after %d steps, width %s", iterations, width)
    return QuasiArcOptimum(
        epsilon=root,
        minimum=quasiarc_limit(root),
        iterations=iterations,
        bracket_width=width,
        residual_bound=_lipschitz_bound(BRACKET[1]) * width / 2,
    )
