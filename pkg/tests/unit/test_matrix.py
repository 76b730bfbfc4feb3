"""
Unit tests for generator matrices, rank, span membership and systematic form.
"""

import itertools

import numpy as np
import pytest

from coverage_depth_cli.errors import MatrixError
from coverage_depth_cli.field import FieldElement, field_make
from coverage_depth_cli.matrix import (
    BinaryEliminationState,
    EliminationState,
    GeneratorMatrix,
    mat_rank,
    span_contains,
    systematic_form,
)

galois = pytest.importorskip("galois")


def _galois_field(spec):
    if spec.m == 1:
        return galois.GF(spec.p)
    poly = galois.Poly(list(reversed(spec.modulus)), field=galois.GF(spec.p))
    return galois.GF(spec.q, irreducible_poly=poly)


class TestGeneratorMatrix:
    """Construction and validation."""

    def test_shape_and_columns(self, gf2):
        # Arrange
        rows = [[1, 0, 1, 1], [0, 1, 1, 0]]

        # Act
        matrix = GeneratorMatrix.from_rows(gf2, rows)

        # Assert
        assert (matrix.k, matrix.n, matrix.q) == (2, 4, 2)
        assert matrix.column(3).tolist() == [1, 1]
        assert matrix.columns == ((1, 0), (0, 1), (1, 1), (1, 0))
        assert matrix.column_masks == (1, 2, 3, 1)
        assert matrix.rows() == rows

    def test_entries_are_read_only(self, gf2):
        # Arrange
        matrix = GeneratorMatrix.from_rows(gf2, [[1, 1]])

        # Act & Assert
        with pytest.raises(ValueError):
            matrix.entries[0, 0] = 0

    def test_rank_deficient_matrix_is_rejected(self, gf2):
        with pytest.raises(MatrixError, match="rank k = 2, got rank 1"):
            GeneratorMatrix.from_rows(gf2, [[1, 1, 0], [1, 1, 0]])

    def test_more_rows_than_columns_is_rejected(self, gf2):
        with pytest.raises(MatrixError, match="1 <= k <= n"):
            GeneratorMatrix.from_rows(gf2, [[1], [1]])

    def test_entry_outside_field_is_rejected(self, gf2):
        with pytest.raises(MatrixError, match=r"entries must lie in \[0, 2\)"):
            GeneratorMatrix.from_rows(gf2, [[1, 2]])

    def test_ragged_rows_are_rejected(self, gf2):
        with pytest.raises(MatrixError, match="ragged"):
            GeneratorMatrix(gf2, [[1, 0], [0]])

    def test_too_many_columns_are_rejected(self, gf2):
        with pytest.raises(MatrixError, match="hard limit"):
            GeneratorMatrix(gf2, np.ones((1, 65), dtype=np.int64))

    def test_column_index_is_one_based(self, identity7):
        with pytest.raises(MatrixError, match="outside 1..7"):
            identity7.column(0)

    def test_equality_and_hash(self, gf2):
        # Arrange
        first = GeneratorMatrix.from_rows(gf2, [[1, 0, 1], [0, 1, 1]])
        second = GeneratorMatrix.from_rows(gf2, [[1, 0, 1], [0, 1, 1]])

        # Act & Assert
        assert first == second
        assert hash(first) == hash(second)
        assert first != GeneratorMatrix.from_rows(field_make(3), [[1, 0, 1], [0, 1, 1]])


class TestRank:
    """Gaussian elimination over GF(q)."""

    def test_rank_of_field_elements(self, gf8):
        # Arrange: the second row is x times the first
        rows = [
            [FieldElement(gf8, 1), FieldElement(gf8, 3)],
            [FieldElement(gf8, 2), FieldElement(gf8, 6)],
        ]

        # Act & Assert
        assert mat_rank(rows) == 1

    def test_plain_integers_need_a_field(self):
        with pytest.raises(MatrixError, match="field specification is required"):
            mat_rank([[1, 0], [0, 1]])

    def test_mixed_fields_are_rejected(self, gf2, gf8):
        with pytest.raises(MatrixError, match="different fields"):
            mat_rank([[FieldElement(gf2, 1), FieldElement(gf8, 1)]])

    def test_rank_matches_galois_on_random_matrices(self):
        # Arrange
        rng = np.random.default_rng(7)

        # Act & Assert
        for p, m in [(2, 1), (3, 1), (5, 1), (2, 3), (3, 2)]:
            spec = field_make(p, m)
            oracle = _galois_field(spec)
            for _ in range(40):
                k = int(rng.integers(1, 6))
                n = int(rng.integers(1, 9))
                # Low-entropy rows so deficient ranks actually occur
                array = rng.integers(0, min(spec.q, 3), size=(k, n))
                assert mat_rank(array, spec) == int(np.linalg.matrix_rank(oracle(array)))

    def test_rank_of_generator_matrix_is_k(self, random_matrices):
        assert all(mat_rank(matrix) == matrix.k for matrix in random_matrices)


class TestSpanContains:
    """Span membership of a target vector."""

    def test_unit_vectors_of_identity(self, identity7):
        # Act & Assert
        assert span_contains(identity7, [1], [1, 0, 0, 0, 0, 0, 0])
        assert not span_contains(identity7, [2, 3, 4, 5, 6, 7], [1, 0, 0, 0, 0, 0, 0])
        assert span_contains(identity7, [1, 2], [1, 1, 0, 0, 0, 0, 0])

    def test_zero_vector_is_always_spanned(self, identity7):
        assert span_contains(identity7, [], [0] * 7)

    def test_empty_column_set_spans_nothing_else(self, identity7):
        assert not span_contains(identity7, [], [0, 0, 1, 0, 0, 0, 0])

    def test_repeated_columns_are_ignored(self, gf2):
        # Arrange
        matrix = GeneratorMatrix.from_rows(gf2, [[1, 0, 1], [0, 1, 1]])

        # Act & Assert
        assert not span_contains(matrix, [3, 3, 3], [1, 0])
        assert span_contains(matrix, [2, 3, 2], [1, 0])

    def test_invalid_arguments(self, identity7):
        with pytest.raises(MatrixError, match="outside 1..7"):
            span_contains(identity7, [8], [1] + [0] * 6)
        with pytest.raises(MatrixError, match="length k = 7"):
            span_contains(identity7, [1], [1, 0])


class TestSystematicForm:
    """Row reduction to [I | P]."""

    def test_row_space_is_preserved(self, random_matrices):
        # Act & Assert
        for matrix in random_matrices:
            try:
                systematic, order = systematic_form(matrix)
            except MatrixError:
                systematic, order = systematic_form(matrix, allow_column_permutation=True)
            k = matrix.k
            assert systematic.entries[:, :k].tolist() == np.eye(k, dtype=np.int64).tolist()
            assert sorted(order) == list(range(1, matrix.n + 1))
            permuted = matrix.entries[:, [j - 1 for j in order]]
            stacked = np.vstack([permuted, systematic.entries])
            assert mat_rank(stacked, matrix.spec) == k

    def test_dependent_leading_columns_need_permission(self, gf2):
        # Arrange
        matrix = GeneratorMatrix.from_rows(gf2, [[0, 1, 0], [0, 0, 1]])

        # Act
        with pytest.raises(MatrixError, match="linearly dependent"):
            systematic_form(matrix)
        systematic, order = systematic_form(matrix, allow_column_permutation=True)

        # Assert
        assert order == (2, 3, 1)
        assert systematic.rows() == [[1, 0, 0], [0, 1, 0]]

    def test_already_systematic_matrix_keeps_column_order(self, identity7):
        # Act
        systematic, order = systematic_form(identity7)

        # Assert
        assert systematic == identity7
        assert order == tuple(range(1, 8))


class TestEliminationState:
    """Incremental recovery tracking used by enumeration and simulation."""

    def test_binary_matrices_get_the_bitmask_state(self, identity7):
        assert isinstance(EliminationState.for_matrix(identity7, 1), BinaryEliminationState)

    def test_recovery_when_target_column_is_inserted(self, identity7):
        # Arrange
        state = EliminationState.for_matrix(identity7, 3)

        # Act
        before = [state.insert(position) for position in (0, 1, 3)]
        after = state.insert(2)

        # Assert
        assert before == [False, False, False]
        assert after is True
        assert state.recovered
        assert state.rank == 4

    def test_duplicate_columns_do_not_raise_rank(self, gf2):
        # Arrange
        matrix = GeneratorMatrix.from_rows(gf2, [[1, 1, 0], [0, 0, 1]])
        state = EliminationState(matrix, 2)

        # Act
        state.insert(0)
        state.insert(1)

        # Assert
        assert state.rank == 1
        assert not state.recovered

    def test_copy_branches_independently(self, identity7):
        # Arrange
        root = EliminationState.for_matrix(identity7, 1)
        root.insert(1)

        # Act
        branch = root.copy()
        branch.insert(0)

        # Assert
        assert branch.recovered
        assert not root.recovered
        assert root.rank == 1

    def test_bitmask_and_generic_states_agree(self, full_rank_matrices):
        # Arrange
        binary = [m for m in full_rank_matrices(30, seed=99, fields=(2,)) if m.n <= 8]
        rng = np.random.default_rng(5)

        # Act & Assert
        for matrix in binary:
            for strand in range(1, matrix.k + 1):
                order = rng.permutation(matrix.n).tolist()
                generic = EliminationState(matrix, strand)
                bitmask = BinaryEliminationState(matrix, strand)
                assert [generic.insert(p) for p in order] == [bitmask.insert(p) for p in order]

    def test_state_agrees_with_span_contains(self, random_matrices):
        # Act & Assert
        for matrix in random_matrices[:15]:
            if matrix.n > 8:
                continue
            target = [1] + [0] * (matrix.k - 1)
            for size in range(matrix.n + 1):
                for subset in itertools.combinations(range(matrix.n), size):
                    state = EliminationState.for_matrix(matrix, 1)
                    for position in subset:
                        state.insert(position)
                    expected = span_contains(matrix, [p + 1 for p in subset], target)
                    assert state.recovered == expected

    def test_strand_out_of_range(self, identity7):
        with pytest.raises(MatrixError, match="strand index 8"):
            EliminationState.for_matrix(identity7, 8)

    def test_bitmask_state_requires_binary_matrix(self):
        # Arrange
        matrix = GeneratorMatrix.from_rows(field_make(3), [[1, 2]])

        # Act & Assert
        with pytest.raises(MatrixError, match="binary"):
            BinaryEliminationState(matrix, 1)
