"""
Exact distribution of the retrieval time from an alpha profile.

Two independent routes to the raw moments are provided. The closed form
expands sum_r r^l S(r, s) x^r = (x d/dx)^l [x^s / prod_j (1 - j x)] and
evaluates the derivatives of that product at x = 1/n by Leibniz folding. The
tail-sum form adds ((r+1)^p - r^p) P(tau > r) up to a cut-off chosen so the
analytic remainder is below a requested epsilon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional, Union

from .combinat import binom, falling_factorial, stirling2
from .models import AlphaProfile, MomentReport, PmfTable
from .recovery import survival

__all__ = [
    "TailSumResult",
    "central_moments",
    "expectation",
    "moment",
    "moment_report",
    "moment_tailsum",
    "pmf",
    "pmf_table",
    "second_moment_closed",
    "variance",
]

RationalLike = Union[Fraction, int, str, float]


@dataclass(frozen=True)
class TailSumResult:
    """Partial tail sum of a raw moment and the certified bound on what was left out."""

    value: Fraction
    remainder_bound: Fraction
    terms: int


def _weights(profile: AlphaProfile) -> List[Fraction]:
    """complement(s) / C(n-1, s) for s = 0..n-1."""
    n = profile.n
    return [Fraction(profile.complement(s), binom(n - 1, s)) for s in range(n)]


def expectation(profile: AlphaProfile) -> Fraction:
    """E[tau] as the sum of complement(s) / C(n-1, s) over s < n."""
    return sum(_weights(profile), Fraction(0))


def _fold(left: List[Fraction], right: List[Fraction]) -> List[Fraction]:
    """Derivatives 0..len-1 of a product from the derivatives of its two factors."""
    order = len(left)
    return [
        sum((binom(t, u) * left[u] * right[t - u] for u in range(t + 1)), Fraction(0))
        for t in range(order)
    ]


def _product_derivatives(n: int, s: int, order: int) -> List[Fraction]:
    """Derivatives 0..order of x^s / prod_{j<=s} (1 - j x), evaluated at x = 1/n."""
    x = Fraction(1, n)
    power = [
        falling_factorial(s, u) * x ** (s - u) if u <= s else Fraction(0)
        for u in range(order + 1)
    ]
    result = power
    for j in range(1, s + 1):
        # u-th derivative of 1/(1 - j x) at 1/n is u! j^u n^(u+1) / (n - j)^(u+1)
        factor = [
            Fraction(math.factorial(u) * j**u * n ** (u + 1), (n - j) ** (u + 1))
            for u in range(order + 1)
        ]
        result = _fold(result, factor)
    return result


def moment(profile: AlphaProfile, p: int) -> Fraction:
    """
    Exact raw moment E[tau^p] in closed form.

    Each non-recovery layer s contributes
    s! * complement(s) * sum_l C(p, l) sum_b S(l, b) n^-b D^b[x^s / prod (1 - j x)](1/n).
    """
    if p < 1:
        raise ValueError(f"moment order must be at least 1, got {p}")
    n = profile.n
    total = Fraction(0)
    for s in range(n):
        missing = profile.complement(s)
        if not missing:
            continue
        scaled = [d / Fraction(n) ** b for b, d in enumerate(_product_derivatives(n, s, p - 1))]
        layer = Fraction(0)
        for order in range(p):
            inner = sum((stirling2(order, b) * scaled[b] for b in range(order + 1)), Fraction(0))
            layer += binom(p, order) * inner
        total += math.factorial(s) * missing * layer
    return total


def _survival_numerators(profile: AlphaProfile) -> Iterator[int]:
    """n^r * P(tau > r) for r = 0, 1, 2, ... using only the Stirling columns s < n."""
    n = profile.n
    columns = [1] + [0] * (n - 1)  # S(0, s)
    weights = [math.factorial(s) * profile.complement(s) for s in range(n)]
    while True:
        yield sum(w * c for w, c in zip(weights, columns))
        columns = [0] + [s * columns[s] + columns[s - 1] for s in range(1, n)]


def moment_tailsum(profile: AlphaProfile, p: int, eps: RationalLike) -> TailSumResult:
    """
    Raw moment by the tail-sum formula with a certified remainder.

    Since s! S(r, s) <= s^r and s <= n - 1, P(tau > r) <= A rho^r with
    A = sum_s complement(s) and rho = (n - 1)/n. With (r+1)^p - r^p <= p (r+1)^(p-1)
    the terms past R are dominated by a geometric series of ratio
    theta = ((R+3)/(R+2))^(p-1) rho, giving
    remainder <= A p (R+2)^(p-1) rho^(R+1) / (1 - theta).
    """
    if p < 1:
        raise ValueError(f"moment order must be at least 1, got {p}")
    epsilon = Fraction(eps)
    if epsilon <= 0:
        raise ValueError("eps must be positive")
    n = profile.n
    rho = Fraction(n - 1, n)
    scale = sum(profile.complement(s) for s in range(n)) * p

    value = Fraction(0)
    rho_next = rho  # rho^(R+1)
    for r, numerator in enumerate(_survival_numerators(profile)):
        value += ((r + 1) ** p - r**p) * Fraction(numerator, n**r)
        theta = Fraction(r + 3, r + 2) ** (p - 1) * rho
        if theta < 1:
            bound = scale * (r + 2) ** (p - 1) * rho_next / (1 - theta)
            if bound <= epsilon:
                return TailSumResult(value, bound, r + 1)
        rho_next *= rho
    raise AssertionError("unreachable")  # pragma: no cover


def second_moment_closed(profile: AlphaProfile) -> Fraction:
    """E[tau^2] = sum_s w_s (1 + 2s + 2 sum_{l<=s} l/(n - l)), w_s = complement(s)/C(n-1, s)."""
    n = profile.n
    total = Fraction(0)
    running = Fraction(0)
    for s, weight in enumerate(_weights(profile)):
        if s:
            running += Fraction(s, n - s)
        total += weight * (1 + 2 * s + 2 * running)
    return total


def variance(profile: AlphaProfile) -> Fraction:
    n = profile.n
    weights = _weights(profile)
    shift = sum(weights[1:], Fraction(0))
    total = Fraction(0)
    running = Fraction(0)
    for v, weight in enumerate(weights):
        if v:
            running += Fraction(v, n - v)
        total += weight * (2 * v + 2 * running - shift)
    return total


def pmf(profile: AlphaProfile, r: int) -> Fraction:
    """P[tau = r] for r >= 1."""
    if r < 1:
        raise ValueError(f"r must be at least 1, got {r}")
    n = profile.n
    numerator = sum(
        (stirling2(r, s) - n * stirling2(r - 1, s)) * math.factorial(s) * profile.alpha[s]
        for s in range(1, min(r, n) + 1)
    )
    return Fraction(numerator, n**r)


def pmf_table(profile: AlphaProfile, rmax: int) -> PmfTable:
    if rmax < 1:
        raise ValueError(f"rmax must be at least 1, got {rmax}")
    entries = {r: pmf(profile, r) for r in range(1, rmax + 1)}
    return PmfTable(profile.n, profile.strand, entries, survival(profile, rmax))


def moment_report(
    profile: AlphaProfile,
    powers: Iterable[int] = (1, 2, 3, 4),
    method: str = "closed-form",
    eps: RationalLike = Fraction(1, 10**12),
) -> MomentReport:
    """
    Collect raw moments and the variance of one profile.

    ``method`` is ``closed-form`` or ``tail-sum``; tail-sum entries carry their
    certified remainder in ``tail_bounds``. The variance is taken from the same
    moments, so in tail-sum mode it is truncated as well and comes with
    ``variance_bound``.
    """
    if method not in ("closed-form", "tail-sum"):
        raise ValueError(f"unknown moment method '{method}'")
    orders = sorted(set(powers) | {1, 2})
    moments: Dict[int, Fraction] = {}
    methods: Dict[int, str] = {}
    bounds: Dict[int, Fraction] = {}
    for p in orders:
        if method == "tail-sum":
            result = moment_tailsum(profile, p, eps)
            moments[p] = result.value
            bounds[p] = result.remainder_bound
        elif p == 1:
            moments[p] = expectation(profile)
        else:
            moments[p] = moment(profile, p)
        methods[p] = method
    if method == "tail-sum":
        # Truncated sums sit below the true moments by at most their bounds.
        low_side = 2 * moments[1] * bounds[1] + bounds[1] ** 2
        variance_bound: Optional[Fraction] = max(bounds[2], low_side)
        variance_value = moments[2] - moments[1] ** 2
    else:
        variance_bound = None
        variance_value = variance(profile)
    return MomentReport(
        n=profile.n,
        strand=profile.strand,
        moments=moments,
        variance=variance_value,
        methods=methods,
        tail_bounds=bounds,
        variance_bound=variance_bound,
    )


def central_moments(report: MomentReport) -> Dict[int, Fraction]:
    """Central moments of orders 2..4 derived from the raw moments present in ``report``."""
    m = report.moments
    mean = m[1]
    result: Dict[int, Fraction] = {2: m[2] - mean**2}
    if 3 in m:
        result[3] = m[3] - 3 * mean * m[2] + 2 * mean**3
    if 3 in m and 4 in m:
        result[4] = m[4] - 4 * mean * m[3] + 6 * mean**2 * m[2] - 3 * mean**4
    return result
