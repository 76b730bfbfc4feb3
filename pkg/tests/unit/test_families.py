"""
Unit tests for the code family constructors and their closed forms.

Every closed-form alpha profile is checked against exhaustive enumeration of
the generated matrix on all strands.
"""

import itertools
from fractions import Fraction

import numpy as np
import pytest

from coverage_depth_cli.combinat import binom
from coverage_depth_cli.errors import FieldError, PreconditionError
from coverage_depth_cli.families import (
    family_generator,
    family_profile,
    geometric_raw_moment,
    hamming_alpha,
    hamming_xi_closed,
    identity_pmf_geometric,
    mds_alpha,
    mds_pmf_closed,
    mds_variance_closed,
    projective_points,
    simplex_alpha,
)
from coverage_depth_cli.matrix import mat_rank
from coverage_depth_cli.models import FamilySpec
from coverage_depth_cli.moments import pmf, variance
from coverage_depth_cli.ratehalf import ratehalf_alpha
from coverage_depth_cli.recovery import alpha_bruteforce


def _assert_closed_form_on_all_strands(spec, closed):
    matrix = family_generator(spec)
    assert matrix.n == spec.length
    assert matrix.k == spec.dimension
    for strand in range(1, matrix.k + 1):
        assert alpha_bruteforce(matrix, strand).alpha == closed.alpha, (spec, strand)


class TestGenerators:
    """Shapes, labels and structure of the generated matrices."""

    @pytest.mark.parametrize(
        "spec,label",
        [
            (FamilySpec("identity", n=7), "Identity [7,7]_2"),
            (FamilySpec("mds", q=8, n=7, k=3), "MDS [7,3]_8"),
            (FamilySpec("hamming", q=2, m=3), "Hamming [7,4]_2"),
            (FamilySpec("simplex", q=2, k=3), "Simplex [7,3]_2"),
            (FamilySpec("ratehalf", k=4), "Rate-1/2 [8,4]_2"),
        ],
    )
    def test_shapes_and_labels(self, spec, label):
        # Act
        matrix = family_generator(spec)

        # Assert
        assert spec.label() == label
        assert (matrix.n, matrix.k, matrix.q) == (spec.length, spec.dimension, spec.field_order)

    def test_mds_generator_is_systematic_and_mds(self):
        # Arrange
        matrix = family_generator(FamilySpec("mds", q=8, n=7, k=3))

        # Act & Assert
        assert matrix.entries[:, :3].tolist() == np.eye(3, dtype=np.int64).tolist()
        for columns in itertools.combinations(range(7), 3):
            assert mat_rank(matrix.entries[:, list(columns)], matrix.spec) == 3

    def test_hamming_code_has_minimum_distance_three(self):
        # Arrange
        matrix = family_generator(FamilySpec("hamming", q=2, m=3))

        # Act
        weights = [
            int(np.count_nonzero(np.array(message) @ matrix.entries % 2))
            for message in itertools.product((0, 1), repeat=4)
            if any(message)
        ]

        # Assert
        assert min(weights) == 3

    def test_ratehalf_generator_pairs_neighbouring_strands(self):
        # Act
        matrix = family_generator(FamilySpec("ratehalf", k=3))

        # Assert
        assert matrix.rows() == [
            [1, 0, 0, 1, 0, 1],
            [0, 1, 0, 1, 1, 0],
            [0, 0, 1, 0, 1, 1],
        ]

    def test_projective_points(self):
        # Act & Assert
        assert projective_points(3, 2) == [(0, 1), (1, 0), (1, 1), (1, 2)]
        assert len(projective_points(2, 3)) == 7
        assert len(projective_points(4, 2)) == 5


class TestClosedFormsAgainstEnumeration:
    """Closed-form profiles equal the enumerated profile of every strand."""

    @pytest.mark.parametrize("q,n,k", [(8, 7, 3), (8, 7, 4), (5, 5, 2), (7, 6, 1), (9, 8, 4), (4, 4, 4)])
    def test_mds(self, q, n, k):
        _assert_closed_form_on_all_strands(FamilySpec("mds", q=q, n=n, k=k), mds_alpha(n, k))

    @pytest.mark.parametrize("q,m", [(2, 3), (3, 2), (4, 2), (5, 2)])
    def test_hamming(self, q, m):
        _assert_closed_form_on_all_strands(FamilySpec("hamming", q=q, m=m), hamming_alpha(q, m))

    @pytest.mark.parametrize("q,k", [(2, 2), (2, 3), (3, 2), (4, 2), (3, 3)])
    def test_simplex(self, q, k):
        _assert_closed_form_on_all_strands(FamilySpec("simplex", q=q, k=k), simplex_alpha(q, k))

    @pytest.mark.slow
    def test_binary_simplex_of_dimension_four(self):
        _assert_closed_form_on_all_strands(FamilySpec("simplex", q=2, k=4), simplex_alpha(2, 4))

    @pytest.mark.parametrize("k", [3, 4, 5, 6])
    def test_ratehalf(self, k):
        _assert_closed_form_on_all_strands(FamilySpec("ratehalf", k=k), ratehalf_alpha(k))

    def test_identity(self):
        _assert_closed_form_on_all_strands(FamilySpec("identity", n=6), family_profile(FamilySpec("identity", n=6)))


class TestClosedFormValues:
    """Spot values and cross-checks of the closed forms."""

    def test_ratehalf_alpha_at_k3(self):
        # Act
        profile = ratehalf_alpha(3)

        # Assert
        assert profile[1] == 1
        assert profile[2] == 7
        assert profile[6] == 1

    def test_simplex_alpha_at_full_length(self):
        # Act
        profile = simplex_alpha(2, 3)

        # Assert
        assert profile[3] == 31
        assert profile[7] == 1
        assert profile[1] == 1

    def test_hamming_census_rows_are_binomial(self):
        # Act & Assert
        for q, m in [(2, 3), (2, 4), (3, 2), (3, 3), (4, 2)]:
            xi = hamming_xi_closed(q, m)
            assert xi.size == q ** (m - 1) + 1
            xi.check_invariants()

    def test_mds_variance_closed_form(self):
        # Act & Assert
        assert mds_variance_closed(7, 3) == Fraction(22, 15)
        assert mds_variance_closed(7, 7) == 42
        for n in range(1, 12):
            for k in range(1, n + 1):
                assert mds_variance_closed(n, k) == variance(mds_alpha(n, k)), (n, k)

    def test_mds_pmf_closed_form(self):
        # Act & Assert
        assert mds_pmf_closed(7, 3, 3) == Fraction(156, 343)
        assert mds_pmf_closed(7, 3, 1) == Fraction(1, 7)
        with pytest.raises(ValueError):
            mds_pmf_closed(7, 3, 0)

    @pytest.mark.parametrize("n", range(1, 13))
    def test_mds_pmf_closed_form_matches_the_engine(self, n):
        # Act & Assert
        for k in range(1, n + 1):
            profile = mds_alpha(n, k)
            for r in range(1, 21):
                assert mds_pmf_closed(n, k, r) == pmf(profile, r), (n, k, r)

    def test_identity_is_geometric(self):
        # Arrange
        profile = family_profile(FamilySpec("identity", n=7))

        # Act & Assert
        for r in range(1, 30):
            assert pmf(profile, r) == identity_pmf_geometric(7, r)
        assert geometric_raw_moment(7, 2) == 91

    def test_mds_alpha_shape(self):
        # Act
        profile = mds_alpha(7, 3)

        # Assert
        assert profile.alpha == (0, 1, 6, binom(7, 3), binom(7, 4), binom(7, 5), binom(7, 6), 1)

    def test_invalid_dimensions(self):
        with pytest.raises(PreconditionError, match="1 <= k <= n"):
            mds_alpha(3, 4)
        with pytest.raises(ValueError):
            geometric_raw_moment(0, 1)
        with pytest.raises(ValueError):
            identity_pmf_geometric(7, 0)

    def test_profile_carries_requested_strand(self):
        # Act
        profile = family_profile(FamilySpec("simplex", q=2, k=3), strand=2)

        # Assert
        assert profile.strand == 2


class TestFamilySpec:
    """Parameter validation of family presets."""

    @pytest.mark.parametrize(
        "spec,message",
        [
            (FamilySpec("mds", q=8, n=9, k=3), "1 <= k <= n <= q"),
            (FamilySpec("mds", q=8, n=7), "requires --k"),
            (FamilySpec("hamming", q=2, m=1), "m >= 2"),
            (FamilySpec("simplex", q=2, k=1), "k >= 2"),
            (FamilySpec("ratehalf", k=2), "k >= 3"),
            (FamilySpec("identity"), "requires --n"),
            (FamilySpec("identity", n=65), r"outside 1..64"),
            (FamilySpec("golay"), "unknown family"),
        ],
    )
    def test_invalid_parameters(self, spec, message):
        with pytest.raises(PreconditionError, match=message):
            spec.validate()

    def test_field_order_must_be_prime_power(self):
        with pytest.raises(FieldError, match="not a prime power"):
            FamilySpec("mds", q=6, n=5, k=2).validate()

    def test_generator_validates_first(self):
        with pytest.raises(PreconditionError):
            family_generator(FamilySpec("ratehalf", k=2))

    def test_to_dict(self):
        # Act
        payload = FamilySpec("hamming", q=2, m=3).to_dict()

        # Assert
        assert payload == {"kind": "hamming", "q": 2, "m": 3, "length": 7, "dimension": 4}
