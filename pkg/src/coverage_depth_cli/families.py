"""
Code families with closed-form recovery profiles.

Generators are deterministic: MDS codes are Reed-Solomon codes on the first n
field elements brought to systematic form, Hamming and simplex codes use the
normalised projective points of GF(q)^m in lexicographic order. The closed
forms do not depend on the strand, so their profiles carry ``strand=None``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Tuple

import numpy as np

from .combinat import binom, gauss_binom, harmonic, stirling2
from .errors import PreconditionError
from .field import field_for_order
from .matrix import GeneratorMatrix, systematic_form
from .models import AlphaProfile, FamilySpec, XiTable
from .ratehalf import ratehalf_alpha
from .recovery import alpha_from_xi

__all__ = [
    "family_generator",
    "family_profile",
    "geometric_raw_moment",
    "hamming_alpha",
    "hamming_xi_closed",
    "identity_pmf_geometric",
    "mds_alpha",
    "mds_pmf_closed",
    "mds_variance_closed",
    "projective_points",
    "simplex_alpha",
]


def projective_points(q: int, m: int) -> List[Tuple[int, ...]]:
    """Nonzero vectors of GF(q)^m whose first nonzero coordinate is 1, in lexicographic order."""
    points = []
    for vector in product(range(q), repeat=m):
        lead = next((x for x in vector if x), 0)
        if lead == 1:
            points.append(vector)
    return points


def _identity(n: int) -> GeneratorMatrix:
    return GeneratorMatrix(field_for_order(2), np.eye(n, dtype=np.int64))


def _mds(q: int, n: int, k: int) -> GeneratorMatrix:
    spec = field_for_order(q)
    vandermonde = np.array(
        [[spec.power(a, t) for a in range(n)] for t in range(k)], dtype=np.int64
    )
    systematic, _ = systematic_form(GeneratorMatrix(spec, vandermonde))
    return systematic


def _hamming(q: int, m: int) -> GeneratorMatrix:
    spec = field_for_order(q)
    points = projective_points(q, m)
    units = {tuple(int(r == c) for c in range(m)) for r in range(m)}
    others = [p for p in points if p not in units]
    # H = [A | I_m] gives G = [I | -A^T]
    a_transposed = np.array(others, dtype=np.int64)
    k = len(others)
    entries = np.zeros((k, k + m), dtype=np.int64)
    entries[:, :k] = np.eye(k, dtype=np.int64)
    entries[:, k:] = spec.negate(a_transposed)
    return GeneratorMatrix(spec, entries)


def _simplex(q: int, k: int) -> GeneratorMatrix:
    spec = field_for_order(q)
    units = [tuple(int(r == c) for r in range(k)) for c in range(k)]
    rest = [p for p in projective_points(q, k) if p not in units]
    columns = units + rest
    return GeneratorMatrix(spec, np.array(columns, dtype=np.int64).T)


def _ratehalf(k: int) -> GeneratorMatrix:
    entries = np.zeros((k, 2 * k), dtype=np.int64)
    entries[:, :k] = np.eye(k, dtype=np.int64)
    for j in range(k):
        entries[j, k + j] = 1
        entries[(j + 1) % k, k + j] = 1
    return GeneratorMatrix(field_for_order(2), entries)


def family_generator(spec: FamilySpec) -> GeneratorMatrix:
    """Build the generator matrix of a validated family."""
    spec.validate()
    if spec.kind == "identity":
        return _identity(int(spec.n))  # type: ignore[arg-type]
    if spec.kind == "mds":
        return _mds(int(spec.q), int(spec.n), int(spec.k))  # type: ignore[arg-type]
    if spec.kind == "hamming":
        return _hamming(int(spec.q), int(spec.m))  # type: ignore[arg-type]
    if spec.kind == "simplex":
        return _simplex(int(spec.q), int(spec.k))  # type: ignore[arg-type]
    return _ratehalf(int(spec.k))  # type: ignore[arg-type]


def _require_dimension(n: int, k: int) -> None:
    if not 1 <= k <= n:
        raise PreconditionError(f"need 1 <= k <= n, got n = {n}, k = {k}")


def mds_alpha(n: int, k: int) -> AlphaProfile:
    """C(n-1, s-1) below the dimension, every s-set from k on."""
    _require_dimension(n, k)
    alpha = [binom(n - 1, s - 1) if s < k else binom(n, s) for s in range(n + 1)]
    return AlphaProfile(n, tuple(alpha))


def mds_variance_closed(n: int, k: int) -> Fraction:
    """
    Variance of a systematic MDS code in harmonic numbers.

    Written with H_{n-k} so that k = n needs no special case; for k < n it
    equals 2n(n-k)(H_{n-k-1} - H_{n-1}) + 2nk - (k-1)k.
    """
    _require_dimension(n, k)
    return 2 * n * (k - 1) - 2 * n * (n - k) * (harmonic(n - 1) - harmonic(n - k)) - k * (k - 1)


def mds_pmf_closed(n: int, k: int, r: int) -> Fraction:
    _require_dimension(n, k)
    if r < 1:
        raise ValueError(f"r must be at least 1, got {r}")
    if r < k:
        return Fraction(n - 1, n) ** (r - 1) / n
    stalled = sum(
        binom(n - 1, d) * stirling2(r - 1, d) * math.factorial(d) for d in range(1, k - 1)
    )
    last = binom(n - 1, k - 1) * stirling2(r - 1, k - 1) * (n - k + 1) * math.factorial(k - 1)
    return Fraction(stalled + last, n**r)


def _gamma(q: int, m: int, j: int, v: int) -> int:
    total = 0
    for u in range(v, m):
        total += (
            q**u
            * gauss_binom(m - v - 1, u - v, q)
            * binom(q ** (m - u - 1), j)
            * (-1) ** (u - v)
            * q ** binom(u - v, 2)
        )
    return gauss_binom(m - 1, v, q) * total


def hamming_xi_closed(q: int, m: int) -> XiTable:
    """
    Union-size census of the minimal recovery sets of a q-ary Hamming code.

    The singleton {i} is one minimal set; the remaining q^(m-1) sets all have
    the same shape, and a family of j of them spans
    (q^m - q^v)/(q - 1) - 1 columns for some v. Adding the singleton shifts
    that size by one.
    """
    field_for_order(q)
    if m < 2:
        raise PreconditionError(f"hamming requires redundancy m >= 2, got m = {m}")
    size = q ** (m - 1) + 1
    counts: Dict[Tuple[int, int], int] = {(1, 1): 1}
    for j in range(1, size + 1):
        for v in range(m):
            s = (q**m - q**v) // (q - 1) - 1
            value = _gamma(q, m, j, v)
            if value:
                counts[(j, s)] = counts.get((j, s), 0) + value
            if j >= 2:
                shifted = _gamma(q, m, j - 1, v)
                if shifted:
                    counts[(j, s + 1)] = counts.get((j, s + 1), 0) + shifted
    return XiTable(size, {key: c for key, c in counts.items() if c})


def hamming_alpha(q: int, m: int) -> AlphaProfile:
    n = (q**m - 1) // (q - 1)
    return alpha_from_xi(hamming_xi_closed(q, m), n)


def simplex_alpha(q: int, k: int) -> AlphaProfile:
    """Recovery counts of the simplex code through subspaces containing e_i."""
    field_for_order(q)
    if k < 2:
        raise PreconditionError(f"simplex requires k >= 2, got k = {k}")
    n = (q**k - 1) // (q - 1)
    alpha = [0] * (n + 1)
    for s in range(1, n + 1):
        total = 0
        for d in range(1, min(s, k) + 1):
            inner = sum(
                gauss_binom(d, r, q)
                * binom((q**r - 1) // (q - 1), s)
                * (-1) ** (d - r)
                * q ** binom(d - r, 2)
                for r in range(1, d + 1)
            )
            total += gauss_binom(k - 1, d - 1, q) * inner
        alpha[s] = total
    return AlphaProfile(n, tuple(alpha))


def identity_pmf_geometric(n: int, r: int) -> Fraction:
    if n < 1 or r < 1:
        raise ValueError(f"need n >= 1 and r >= 1, got n = {n}, r = {r}")
    return Fraction(n - 1, n) ** (r - 1) / n


def geometric_raw_moment(n: int, p: int) -> Fraction:
    """E[X^p] for X geometric on {1, 2, ...} with success probability 1/n."""
    if n < 1 or p < 1:
        raise ValueError(f"need n >= 1 and p >= 1, got n = {n}, p = {p}")
    success = Fraction(1, n)
    return sum(
        (
            stirling2(p, j) * math.factorial(j) * (1 - success) ** (j - 1) / success**j
            for j in range(1, p + 1)
        ),
        Fraction(0),
    )


def family_profile(spec: FamilySpec, strand: Optional[int] = None) -> AlphaProfile:
    """Closed-form alpha profile of a family (the same for every strand)."""
    spec.validate()
    if spec.kind == "identity":
        profile = mds_alpha(int(spec.n), int(spec.n))  # type: ignore[arg-type]
    elif spec.kind == "mds":
        profile = mds_alpha(int(spec.n), int(spec.k))  # type: ignore[arg-type]
    elif spec.kind == "hamming":
        profile = hamming_alpha(int(spec.q), int(spec.m))  # type: ignore[arg-type]
    elif spec.kind == "simplex":
        profile = simplex_alpha(int(spec.q), int(spec.k))  # type: ignore[arg-type]
    else:
        profile = ratehalf_alpha(int(spec.k))  # type: ignore[arg-type]
    return profile.with_strand(strand)
