"""
The binary k x 2k construction with columns e_1..e_k, e_1+e_2, ..., e_k+e_1.

Its expectation is driven by the counts B(k, j), available both from a
three-term recurrence and in closed form. As k grows, E/k decreases towards
(8 sqrt(3) pi - 18)/27.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict

import mpmath

from .combinat import binom
from .errors import PreconditionError
from .models import AlphaProfile

__all__ = [
    "PRIOR_BOUND",
    "ratehalf_B",
    "ratehalf_alpha",
    "ratehalf_expectation",
    "ratehalf_limit",
    "ratehalf_limit_series",
    "ratehalf_ratios",
]

# Earlier published upper bound on lim E/k.
PRIOR_BOUND = Fraction(70318847, 74364290)

METHODS = ("recurrence", "closed")


def _require_k(k: int) -> None:
    if k < 3:
        raise PreconditionError(
            f"ratehalf requires k >= 3, got k = {k} (at k = 2 the last two columns coincide)"
        )


@lru_cache(maxsize=None)
def _b_recurrence(k: int, j: int) -> int:
    if j == 0:
        return 1
    if j == 1:
        return 2 * k + 1
    if k == 0:
        return 0
    if k == 1:
        return 1 if j == 2 else 0
    return binom(2 * k - 1, j) + 2 * _b_recurrence(k - 1, j - 1) - _b_recurrence(k - 2, j - 2)


def _sigma(j: int, k: int) -> int:
    if j <= k:
        return (2 * (k - j + 1) + 1) * j - (j - 1)
    if j == k + 1:
        return 1
    return 0


def _b_closed(k: int, j: int) -> int:
    total = sum(
        binom(2 * (k - t + 1) - 1, j - t + 1) * t for t in range(1, min(k - 1, j - 1) + 1)
    )
    return total + _sigma(j, k)


def ratehalf_B(k: int, j: int, method: str = "recurrence") -> int:  # noqa: N802
    """B(k, j) by the memoised recurrence or by its closed form."""
    if k < 0 or j < 0:
        raise ValueError(f"B(k, j) needs k, j >= 0, got ({k}, {j})")
    if method == "recurrence":
        # only the diagonal (k - d, j - d) is reachable; fill it bottom-up
        for level in range(k % 64, k, 64):
            if j >= k - level:
                _b_recurrence(level, j - (k - level))
        return _b_recurrence(k, j)
    if method == "closed":
        return _b_closed(k, j)
    raise ValueError(f"unknown method '{method}', expected one of {', '.join(METHODS)}")


def ratehalf_expectation(k: int, method: str = "recurrence") -> Fraction:
    """E[tau_i] = 1 + sum_{j=1}^{2k-3} B(k-1, j) 2k / ((2k - j) C(2k, j))."""
    _require_k(k)
    total = Fraction(1)
    for j in range(1, 2 * k - 2):
        total += Fraction(ratehalf_B(k - 1, j, method) * 2 * k, (2 * k - j) * binom(2 * k, j))
    return total


def ratehalf_alpha(k: int) -> AlphaProfile:
    """Closed-form recovery counts; the bracket is the number of non-recovery s-sets."""
    _require_k(k)
    n = 2 * k
    alpha = []
    for s in range(n + 1):
        missing = binom(n - 1, s)
        missing -= 2 * sum(binom(n - 2 * ell + 1, s - ell) for ell in range(2, k + 1))
        missing += sum((j - 3) * binom(n - 2 * j + 3, s - j) for j in range(4, k + 2))
        if s == k + 1:
            missing += k - 1
        alpha.append(binom(n, s) - missing)
    return AlphaProfile(n, tuple(alpha))


def ratehalf_limit(dps: int = 30) -> mpmath.mpf:
    """lim_{k -> inf} E/k = (8 sqrt(3) pi - 18) / 27 at ``dps`` significant digits."""
    with mpmath.workdps(dps):
        return (8 * mpmath.sqrt(3) * mpmath.pi - 18) / 27


def ratehalf_limit_series(terms: int) -> Fraction:
    """Partial sum 2 sum_{t=1}^{terms} 1/C(2t+1, t+1), increasing towards the limit."""
    if terms < 1:
        raise ValueError(f"terms must be positive, got {terms}")
    return 2 * sum((Fraction(1, binom(2 * t + 1, t + 1)) for t in range(1, terms + 1)), Fraction(0))


def ratehalf_ratios(kmax: int) -> Dict[int, Fraction]:
    """l_k = E/k for k = 3..kmax."""
    _require_k(kmax)
    return {k: ratehalf_expectation(k) / k for k in range(3, kmax + 1)}
