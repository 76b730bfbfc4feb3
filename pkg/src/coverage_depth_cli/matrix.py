"""
Generator matrices over GF(q), rank, span membership and systematic form.

Row reduction works on numpy arrays through the field's vectorised
``scale``/``combine`` helpers. Enumeration and simulation instead use
``EliminationState``, which keeps an echelon basis of the drawn columns and the
residual of the target unit vector so each inserted column costs O(k^2).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .constants import MAX_COLUMNS
from .errors import MatrixError
from .field import FieldElement, FieldSpec

__all__ = [
    "BinaryEliminationState",
    "EliminationState",
    "GeneratorMatrix",
    "mat_rank",
    "row_reduce",
    "span_contains",
    "systematic_form",
]

ArrayLike = Union["GeneratorMatrix", np.ndarray, Sequence[Sequence[Union[int, FieldElement]]]]


def _as_array(rows: ArrayLike, spec: Optional[FieldSpec]) -> Tuple[np.ndarray, FieldSpec]:
    """Convert a matrix-like value to an int64 array, checking shape and field."""
    if isinstance(rows, GeneratorMatrix):
        if spec is not None and spec != rows.spec:
            raise MatrixError("matrix belongs to a different field")
        return np.array(rows.entries, dtype=np.int64), rows.spec
    if isinstance(rows, np.ndarray):
        if rows.ndim != 2:
            raise MatrixError(f"expected a 2-dimensional array, got shape {rows.shape}")
        data = [list(r) for r in rows.tolist()]
    else:
        data = [list(r) for r in rows]
    if data and len({len(r) for r in data}) != 1:
        raise MatrixError("ragged matrix: rows have different lengths")
    converted: List[List[int]] = []
    for row in data:
        out = []
        for entry in row:
            if isinstance(entry, FieldElement):
                if spec is None:
                    spec = entry.spec
                elif entry.spec != spec:
                    raise MatrixError("matrix mixes elements of different fields")
                out.append(entry.value)
            else:
                out.append(int(entry))
        converted.append(out)
    if spec is None:
        raise MatrixError("a field specification is required for plain integer entries")
    width = len(converted[0]) if converted else 0
    array = np.array(converted, dtype=np.int64).reshape(len(converted), width)
    if array.size and (array.min() < 0 or array.max() >= spec.q):
        raise MatrixError(f"entries must lie in [0, {spec.q})")
    return array, spec


def row_reduce(spec: FieldSpec, array: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form over ``spec`` and the list of pivot columns."""
    work = np.array(array, dtype=np.int64)
    nrows, ncols = work.shape
    pivots: List[int] = []
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        candidates = np.nonzero(work[row:, col])[0]
        if candidates.size == 0:
            continue
        pivot_row = row + int(candidates[0])
        if pivot_row != row:
            work[[row, pivot_row]] = work[[pivot_row, row]]
        work[row] = spec.scale(spec.inv(int(work[row, col])), work[row])
        for other in range(nrows):
            factor = int(work[other, col])
            if other != row and factor:
                work[other] = spec.combine(work[other], spec.scale(spec.neg(factor), work[row]))
        pivots.append(col)
        row += 1
    return work, pivots


@dataclass(frozen=True, eq=False)
class GeneratorMatrix:
    """
    A rank-k generator matrix G in GF(q)^{k x n} with 1 <= k <= n <= 64.

    Columns are addressed 1..n in reports; ``column(j)`` follows that
    convention while the enumeration internals use zero-based positions.
    """

    spec: FieldSpec
    entries: np.ndarray

    def __post_init__(self) -> None:
        array, _ = _as_array(self.entries, self.spec)
        k, n = array.shape
        if not 1 <= k <= n:
            raise MatrixError(f"need 1 <= k <= n, got k = {k}, n = {n}")
        if n > MAX_COLUMNS:
            raise MatrixError(f"n = {n} exceeds the hard limit of {MAX_COLUMNS} columns")
        rank = len(row_reduce(self.spec, array)[1])
        if rank != k:
            raise MatrixError(f"generator matrix must have rank k = {k}, got rank {rank}")
        array.setflags(write=False)
        object.__setattr__(self, "entries", array)

    @classmethod
    def from_rows(cls, spec: FieldSpec, rows: Iterable[Sequence[int]]) -> GeneratorMatrix:
        return cls(spec, np.array([list(r) for r in rows], dtype=np.int64))

    @property
    def k(self) -> int:
        return int(self.entries.shape[0])

    @property
    def n(self) -> int:
        return int(self.entries.shape[1])

    @property
    def q(self) -> int:
        return self.spec.q

    def column(self, j: int) -> np.ndarray:
        if not 1 <= j <= self.n:
            raise MatrixError(f"column index {j} outside 1..{self.n}")
        return self.entries[:, j - 1]

    def rows(self) -> List[List[int]]:
        return self.entries.tolist()

    @cached_property
    def columns(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(int(x) for x in col) for col in self.entries.T)

    @cached_property
    def column_masks(self) -> Tuple[int, ...]:
        """Binary columns as bitmasks, bit r set when row r holds a one."""
        return tuple(
            sum(int(x) << row for row, x in enumerate(col)) for col in self.entries.T.tolist()
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GeneratorMatrix):
            return NotImplemented
        return self.spec == other.spec and np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        return hash((self.spec, self.entries.shape, self.entries.tobytes()))

    def __repr__(self) -> str:
        return f"GeneratorMatrix(q={self.q}, k={self.k}, n={self.n})"


def mat_rank(matrix: ArrayLike, spec: Optional[FieldSpec] = None) -> int:
    """Rank over GF(q) by Gaussian elimination."""
    array, field = _as_array(matrix, spec)
    if array.size == 0:
        return 0
    return len(row_reduce(field, array)[1])


def span_contains(matrix: GeneratorMatrix, cols: Iterable[int], v: Sequence[int]) -> bool:
    """True when ``v`` lies in the span of the 1-based columns ``cols`` (repeats ignored)."""
    selected = sorted(set(cols))
    for j in selected:
        if not 1 <= j <= matrix.n:
            raise MatrixError(f"column index {j} outside 1..{matrix.n}")
    target = np.array([int(x) for x in v], dtype=np.int64)
    if target.shape != (matrix.k,):
        raise MatrixError(f"target vector must have length k = {matrix.k}")
    if not target.any():
        return True
    if not selected:
        return False
    block = matrix.entries[:, [j - 1 for j in selected]]
    base_rank = len(row_reduce(matrix.spec, block)[1])
    augmented = np.column_stack([block, target])
    return len(row_reduce(matrix.spec, augmented)[1]) == base_rank


def systematic_form(
    matrix: GeneratorMatrix, allow_column_permutation: bool = False
) -> Tuple[GeneratorMatrix, Tuple[int, ...]]:
    """
    Row-reduce ``matrix`` so that its first k columns form the identity.

    Returns:
        The systematic matrix and the applied column order (1-based); the
        order is the identity unless a permutation was needed and allowed.

    Raises:
        MatrixError: If the leading k columns are dependent and permutation is
            not allowed
    """
    reduced, pivots = row_reduce(matrix.spec, matrix.entries)
    k, n = matrix.k, matrix.n
    if pivots == list(range(k)):
        return GeneratorMatrix(matrix.spec, reduced), tuple(range(1, n + 1))
    if not allow_column_permutation:
        raise MatrixError(
            "the first k columns are linearly dependent; allow a column permutation"
        )
    order = pivots + [c for c in range(n) if c not in pivots]
    return GeneratorMatrix(matrix.spec, reduced[:, order]), tuple(c + 1 for c in order)


class EliminationState:
    """
    Echelon basis of the columns drawn so far plus the residual of e_i.

    ``insert`` takes a zero-based column position. The target e_i is in the
    span exactly when its residual against the basis vanishes. States are
    single-owner; ``copy`` gives an independent branch for enumeration.
    """

    __slots__ = ("_spec", "_columns", "_basis", "_residual")

    def __init__(self, matrix: GeneratorMatrix, strand: int) -> None:
        if not 1 <= strand <= matrix.k:
            raise MatrixError(f"strand index {strand} outside 1..{matrix.k}")
        self._spec = matrix.spec
        self._columns = matrix.columns
        self._basis: List[Tuple[int, List[int]]] = []
        residual = [0] * matrix.k
        residual[strand - 1] = 1
        self._residual = residual

    @staticmethod
    def for_matrix(matrix: GeneratorMatrix, strand: int) -> EliminationState:
        """Pick the bitmask implementation for binary matrices."""
        if matrix.q == 2:
            return BinaryEliminationState(matrix, strand)
        return EliminationState(matrix, strand)

    @property
    def rank(self) -> int:
        return len(self._basis)

    @property
    def recovered(self) -> bool:
        return not any(self._residual)

    def _reduce(self, vec: List[int], pivot: int, basis_vec: List[int]) -> List[int]:
        spec = self._spec
        factor = spec.neg(vec[pivot])
        return [spec.add(x, spec.mul(factor, y)) for x, y in zip(vec, basis_vec)]

    def insert(self, position: int) -> bool:
        """Add column ``position`` (zero-based); return whether e_i is now spanned."""
        if self.recovered:
            return True
        vec = list(self._columns[position])
        for pivot, basis_vec in self._basis:
            if vec[pivot]:
                vec = self._reduce(vec, pivot, basis_vec)
        lead = next((idx for idx, x in enumerate(vec) if x), None)
        if lead is None:
            return False
        inverse = self._spec.inv(vec[lead])
        vec = [self._spec.mul(inverse, x) for x in vec]
        if self._residual[lead]:
            self._residual = self._reduce(self._residual, lead, vec)
        self._basis.append((lead, vec))
        return self.recovered

    def copy(self) -> EliminationState:
        clone = object.__new__(type(self))
        clone._spec = self._spec
        clone._columns = self._columns
        clone._basis = list(self._basis)
        clone._residual = self._residual
        return clone


class BinaryEliminationState(EliminationState):
    """GF(2) variant: columns, basis and residual are integer bitmasks."""

    __slots__ = ()

    def __init__(self, matrix: GeneratorMatrix, strand: int) -> None:
        if matrix.q != 2:
            raise MatrixError("bitmask elimination requires a binary matrix")
        if not 1 <= strand <= matrix.k:
            raise MatrixError(f"strand index {strand} outside 1..{matrix.k}")
        self._spec = matrix.spec
        self._columns = matrix.column_masks
        self._basis = []
        self._residual = 1 << (strand - 1)

    @property
    def recovered(self) -> bool:
        return not self._residual

    def insert(self, position: int) -> bool:
        if not self._residual:
            return True
        vec = self._columns[position]
        for bit, mask in self._basis:
            if vec & bit:
                vec ^= mask
        if not vec:
            return False
        bit = vec & -vec
        if self._residual & bit:
            self._residual ^= vec
        self._basis.append((bit, vec))
        return not self._residual
