"""
Combinatorial number families used by the distribution formulas.

Everything is exact: integers are Python ints and rationals are
``fractions.Fraction`` (always normalised, denominator positive). Stirling
numbers live in triangular tables that grow on demand; growth is guarded by a
lock and a warmed-up table is read without locking.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from functools import lru_cache
from typing import Callable, List

__all__ = [
    "ExactRational",
    "binom",
    "falling_factorial",
    "gauss_binom",
    "harmonic",
    "stirling1_unsigned",
    "stirling2",
]

ExactRational = Fraction


def binom(a: int, b: int) -> int:
    """Binomial coefficient with ``binom(a, b) = 0`` for ``b < 0`` or ``b > a``."""
    if a < 0:
        raise ValueError(f"binom requires a >= 0, got a = {a}")
    if b < 0 or b > a:
        return 0
    return math.comb(a, b)


def falling_factorial(r: int, b: int) -> int:
    return math.perm(r, b) if 0 <= b <= r else 0


class _TriangleTable:
    """Row-wise memo of a triangular recurrence T(r, s), 0 <= s <= r."""

    def __init__(self, first_row: List[int], step: Callable[[List[int], int], List[int]]) -> None:
        self._rows: List[List[int]] = [first_row]
        self._step = step
        self._lock = threading.Lock()

    def value(self, r: int, s: int) -> int:
        if r < 0 or s < 0:
            raise ValueError(f"indices must be non-negative, got ({r}, {s})")
        if s > r:
            return 0
        if r >= len(self._rows):
            with self._lock:
                while len(self._rows) <= r:
                    self._rows.append(self._step(self._rows[-1], len(self._rows)))
        return self._rows[r][s]


def _stirling2_row(prev: List[int], r: int) -> List[int]:
    # S(r, s) = s * S(r-1, s) + S(r-1, s-1)
    row = [0] * (r + 1)
    for s in range(1, r + 1):
        above = prev[s] if s < len(prev) else 0
        row[s] = s * above + prev[s - 1]
    return row


def _stirling1_row(prev: List[int], r: int) -> List[int]:
    # c(r, s) = (r-1) * c(r-1, s) + c(r-1, s-1)
    row = [0] * (r + 1)
    for s in range(1, r + 1):
        above = prev[s] if s < len(prev) else 0
        row[s] = (r - 1) * above + prev[s - 1]
    return row


_STIRLING2 = _TriangleTable([1], _stirling2_row)
_STIRLING1 = _TriangleTable([1], _stirling1_row)


def stirling2(r: int, s: int) -> int:
    """Number of partitions of an r-set into s nonempty blocks."""
    return _STIRLING2.value(r, s)


def stirling1_unsigned(s: int, r: int) -> int:
    """Unsigned Stirling number of the first kind: permutations of s items with r cycles."""
    return _STIRLING1.value(s, r)


def gauss_binom(a: int, b: int, q: int) -> int:
    """Gaussian binomial coefficient [a choose b]_q by the product formula."""
    if q < 2:
        raise ValueError(f"gauss_binom requires q >= 2, got q = {q}")
    if b < 0 or b > a:
        return 0
    numerator = 1
    denominator = 1
    for j in range(b):
        numerator *= q ** (a - j) - 1
        denominator *= q ** (j + 1) - 1
    quotient, remainder = divmod(numerator, denominator)
    assert remainder == 0
    return quotient


@lru_cache(maxsize=None)
def harmonic(n: int) -> Fraction:
    """H_n = 1 + 1/2 + ... + 1/n, with H_0 = 0."""
    if n < 0:
        raise ValueError(f"harmonic requires n >= 0, got n = {n}")
    return sum((Fraction(1, j) for j in range(1, n + 1)), Fraction(0))
