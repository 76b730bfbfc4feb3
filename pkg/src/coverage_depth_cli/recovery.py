"""
Recovery-set counting for a single information strand.

The brute-force enumerator walks the subset lattice depth first in sorted
index order, carrying an ``EliminationState`` down each branch. The first node
on a path whose columns span e_i accounts for all of its supersets built from
larger indices at once, so that branch is never expanded further.
"""

from __future__ import annotations

import logging
import math
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor, as_completed
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .combinat import binom, stirling1_unsigned, stirling2
from .constants import LOGGER_NAME
from .errors import CapExceededError, InconsistentDataError
from .matrix import EliminationState, GeneratorMatrix
from .models import AlphaProfile, XiTable
from .signal_handler import get_cancellation_manager

__all__ = [
    "alpha_bruteforce",
    "alpha_from_beta",
    "alpha_from_xi",
    "beta_extended",
    "beta_of",
    "code_expectation",
    "minimal_recovery_sets",
    "survival",
    "xi_from_minimal",
]

DEFAULT_COLUMN_CAP = 24
DEFAULT_XI_CAP = 25

logger = logging.getLogger(LOGGER_NAME)


def _subtree_counts(matrix: GeneratorMatrix, strand: int, first: int) -> List[int]:
    """alpha contributions of every subset whose smallest element is ``first``."""
    n = matrix.n
    counts = [0] * (n + 1)

    def visit(state: EliminationState, size: int, last: int) -> None:
        for position in range(last + 1, n):
            child = state.copy()
            if child.insert(position):
                free = n - 1 - position
                for extra in range(free + 1):
                    counts[size + 1 + extra] += binom(free, extra)
            else:
                visit(child, size + 1, position)

    root = EliminationState.for_matrix(matrix, strand)
    if root.insert(first):
        free = n - 1 - first
        for extra in range(free + 1):
            counts[1 + extra] += binom(free, extra)
    else:
        visit(root, 1, first)
    return counts


def alpha_bruteforce(
    matrix: GeneratorMatrix,
    strand: int,
    cap: int = DEFAULT_COLUMN_CAP,
    workers: int = 1,
) -> AlphaProfile:
    """
    Exact alpha profile of ``strand`` by exhaustive subset enumeration.

    Args:
        matrix: Rank-k generator matrix
        strand: Information strand index, 1..k
        cap: Largest code length accepted
        workers: Process count; the lattice is split on the smallest element

    Raises:
        CapExceededError: If ``matrix.n`` exceeds ``cap``
    """
    if matrix.n > cap:
        raise CapExceededError("code length n", matrix.n, cap)
    EliminationState.for_matrix(matrix, strand)  # validates the strand index
    n = matrix.n
    cancellation = get_cancellation_manager()
    started = time.perf_counter()
    logger.info("Enumerating recovery sets: n = %d, k = %d, strand %d", n, matrix.k, strand)

    partials: Dict[int, List[int]] = {}
    if workers <= 1 or n < 2:
        for first in range(n):
            cancellation.checkpoint("alpha enumeration")
            partials[first] = _subtree_counts(matrix, strand, first)
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            futures = {
                executor.submit(_subtree_counts, matrix, strand, first): first
                for first in range(n)
            }
            for future in as_completed(futures):
                partials[futures[future]] = future.result()
                logger.debug("Partition %d of %d done", len(partials), n)
                if cancellation.is_cancelled():
                    for pending in futures:
                        pending.cancel()
                    cancellation.checkpoint("alpha enumeration")

    alpha = [0] * (n + 1)
    for first in sorted(partials):
        for s, count in enumerate(partials[first]):
            alpha[s] += count
    profile = AlphaProfile(n, tuple(alpha), strand)
    if __debug__:
        profile.check_invariants()
    logger.info("Enumeration finished in %.2fs", time.perf_counter() - started)
    return profile


def beta_of(profile: AlphaProfile, r: int) -> int:
    """Ordered length-r index lists whose columns span e_i."""
    if r < 0:
        raise ValueError(f"list length must be non-negative, got {r}")
    return sum(
        stirling2(r, s) * math.factorial(s) * profile.alpha[s]
        for s in range(1, min(r, profile.n) + 1)
    )


def alpha_from_beta(
    betas: Sequence[int], n: int, strand: Optional[int] = None
) -> AlphaProfile:
    """Invert ``beta_of`` from the values beta(1..n) via Stirling numbers of the first kind."""
    if len(betas) < n:
        raise InconsistentDataError(f"need beta(1..{n}), got {len(betas)} values")
    alpha = [0]
    for s in range(1, n + 1):
        signed = sum(
            (-1) ** (s - r) * stirling1_unsigned(s, r) * int(betas[r - 1]) for r in range(1, s + 1)
        )
        value, remainder = divmod(signed, math.factorial(s))
        if remainder:
            raise InconsistentDataError(
                f"beta values are inconsistent: alpha({s}) = {Fraction(signed, math.factorial(s))}"
            )
        alpha.append(value)
    return AlphaProfile(n, tuple(alpha), strand)


def beta_extended(betas: Sequence[int], n: int, r: int) -> int:
    """beta(n + r) predicted from beta(1..n) alone."""
    return beta_of(alpha_from_beta(betas, n), n + r)


def survival(profile: AlphaProfile, r: int) -> Fraction:
    """P(tau > r), summed over the non-recovery complements."""
    if r < 0:
        raise ValueError(f"r must be non-negative, got {r}")
    n = profile.n
    failing = sum(
        math.factorial(s) * stirling2(r, s) * profile.complement(s) for s in range(min(r, n) + 1)
    )
    return Fraction(failing, n**r)


def _recovers(matrix: GeneratorMatrix, strand: int, positions: Sequence[int]) -> bool:
    state = EliminationState.for_matrix(matrix, strand)
    for position in positions:
        if state.insert(position):
            return True
    return False


def minimal_recovery_sets(
    matrix: GeneratorMatrix, strand: int, cap: int = DEFAULT_COLUMN_CAP
) -> List[Tuple[int, ...]]:
    """Inclusion-minimal recovery sets as sorted 1-based tuples, by size then lexicographic."""
    if matrix.n > cap:
        raise CapExceededError("code length n", matrix.n, cap)
    n = matrix.n
    found: List[Tuple[int, ...]] = []

    # A minimal set is the first recovering node on its own sorted path.
    def visit(state: EliminationState, chosen: List[int], last: int) -> None:
        for position in range(last + 1, n):
            child = state.copy()
            path = [*chosen, position]
            if child.insert(position):
                reduced = (path[:d] + path[d + 1 :] for d in range(len(path) - 1))
                if not any(_recovers(matrix, strand, rest) for rest in reduced):
                    found.append(tuple(p + 1 for p in path))
            else:
                visit(child, path, position)

    visit(EliminationState.for_matrix(matrix, strand), [], -1)
    found.sort(key=lambda item: (len(item), item))
    logger.debug("Strand %d has %d minimal recovery sets", strand, len(found))
    return found


def xi_from_minimal(
    sets: Sequence[Sequence[int]], cap: int = DEFAULT_XI_CAP
) -> XiTable:
    """Union-size census over all nonempty families of minimal recovery sets."""
    size = len(sets)
    if size > cap:
        raise CapExceededError("number of minimal sets L", size, cap)
    masks = [sum(1 << (j - 1) for j in set(members)) for members in sets]
    counts: Counter = Counter()

    def walk(start: int, chosen: int, union: int) -> None:
        for h in range(start, size):
            merged = union | masks[h]
            counts[(chosen + 1, bin(merged).count("1"))] += 1
            walk(h + 1, chosen + 1, merged)

    walk(0, 0, 0)
    return XiTable(size, dict(counts))


def alpha_from_xi(xi: XiTable, n: int, strand: Optional[int] = None) -> AlphaProfile:
    """Inclusion-exclusion over families of minimal sets."""
    alpha = [0] * (n + 1)
    for s in range(1, n + 1):
        total = 0
        for (j, t), count in xi.counts.items():
            if t <= s:
                total += (-1) ** (j + 1) * binom(n - t, s - t) * count
        if total < 0:
            raise InconsistentDataError(f"xi table yields a negative count alpha({s}) = {total}")
        alpha[s] = total
    return AlphaProfile(n, tuple(alpha), strand)


def code_expectation(expectations: Mapping[int, Fraction]) -> Tuple[Fraction, Tuple[int, ...]]:
    """Largest per-strand expectation and the strands that attain it."""
    if not expectations:
        raise ValueError("at least one strand expectation is required")
    worst = max(expectations.values())
    return worst, tuple(sorted(i for i, value in expectations.items() if value == worst))
