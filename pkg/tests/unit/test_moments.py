"""
Unit tests for exact moments, the tail-sum route and the mass function.
"""

from fractions import Fraction

import pytest

from coverage_depth_cli.families import geometric_raw_moment, mds_alpha, mds_pmf_closed
from coverage_depth_cli.models import AlphaProfile
from coverage_depth_cli.moments import (
    central_moments,
    expectation,
    moment,
    moment_report,
    moment_tailsum,
    pmf,
    pmf_table,
    second_moment_closed,
    variance,
)
from coverage_depth_cli.recovery import alpha_bruteforce, survival


@pytest.fixture
def mds73():
    return mds_alpha(7, 3)


@pytest.fixture
def identity_profile():
    return mds_alpha(7, 7)


class TestClosedFormMoments:
    """Raw moments and the variance in exact arithmetic."""

    def test_mds_expectation_and_variance(self, mds73):
        # Act & Assert
        assert expectation(mds73) == 3
        assert moment(mds73, 1) == 3
        assert moment(mds73, 2) == Fraction(157, 15)
        assert variance(mds73) == Fraction(22, 15)

    def test_identity_follows_the_geometric_law(self, identity_profile):
        # Act & Assert
        assert expectation(identity_profile) == 7
        assert moment(identity_profile, 2) == 91
        assert moment(identity_profile, 3) == 1771
        assert moment(identity_profile, 4) == 45955
        assert variance(identity_profile) == 42
        for p in range(1, 7):
            assert moment(identity_profile, p) == geometric_raw_moment(7, p)

    def test_recovery_balance_on_table_codes(self, table_codes, table_profiles):
        # Act & Assert
        for name, profile in table_profiles.items():
            assert expectation(profile) == table_codes[name].dimension

    def test_second_moment_routes_agree(self, table_profiles, random_matrices):
        # Arrange
        profiles = list(table_profiles.values())
        profiles += [alpha_bruteforce(matrix, 1) for matrix in random_matrices[:20]]

        # Act & Assert
        for profile in profiles:
            assert second_moment_closed(profile) == moment(profile, 2)
            assert variance(profile) == moment(profile, 2) - moment(profile, 1) ** 2
            assert expectation(profile) == moment(profile, 1)

    def test_moment_order_must_be_positive(self, mds73):
        with pytest.raises(ValueError, match="at least 1"):
            moment(mds73, 0)

    def test_single_column_code_is_deterministic(self):
        # Arrange: n = 1, the only column recovers the strand
        profile = AlphaProfile(1, (0, 1))

        # Act & Assert
        assert moment(profile, 3) == 1
        assert variance(profile) == 0
        assert pmf(profile, 1) == 1
        assert pmf(profile, 2) == 0


class TestTailSum:
    """The tail-sum route with its certified remainder."""

    @pytest.mark.parametrize("p", [1, 2, 3, 4])
    def test_agrees_with_closed_form_within_bound(self, table_profiles, p):
        # Arrange
        eps = Fraction(1, 10**12)

        # Act & Assert
        for profile in table_profiles.values():
            result = moment_tailsum(profile, p, eps)
            gap = moment(profile, p) - result.value
            assert result.remainder_bound <= eps
            assert 0 <= gap <= result.remainder_bound
            assert result.terms > 0

    def test_looser_eps_needs_fewer_terms(self, mds73):
        # Act
        loose = moment_tailsum(mds73, 2, Fraction(1, 10**3))
        tight = moment_tailsum(mds73, 2, Fraction(1, 10**9))

        # Assert
        assert loose.terms < tight.terms

    def test_accepts_decimal_strings(self, mds73):
        assert moment_tailsum(mds73, 1, "1e-6").remainder_bound <= Fraction(1, 10**6)

    def test_eps_must_be_positive(self, mds73):
        with pytest.raises(ValueError, match="eps must be positive"):
            moment_tailsum(mds73, 1, 0)


class TestMassFunction:
    """P[tau = r] and its tables."""

    def test_mds_value(self, mds73):
        assert pmf(mds73, 3) == Fraction(156, 343)

    def test_matches_mds_closed_form(self):
        # Act & Assert
        for n, k in [(7, 3), (7, 4), (7, 7), (5, 1), (9, 5)]:
            profile = mds_alpha(n, k)
            for r in range(1, 25):
                assert pmf(profile, r) == mds_pmf_closed(n, k, r), (n, k, r)

    def test_nothing_before_one_draw(self, mds73):
        with pytest.raises(ValueError, match="at least 1"):
            pmf(mds73, 0)

    def test_table_with_exact_tail_sums_to_one(self, table_profiles):
        # Act & Assert
        for profile in table_profiles.values():
            table = pmf_table(profile, 30)
            assert table.rmax == 30
            assert table.total() == 1
            assert table.tail > 0

    def test_mass_is_the_drop_in_survival(self, table_profiles):
        # Act & Assert
        for name, profile in table_profiles.items():
            for r in range(1, 51):
                assert pmf(profile, r) == survival(profile, r - 1) - survival(profile, r), (name, r)

    def test_mass_and_tail_sum_to_one_at_every_cutoff(self, table_profiles):
        # Act & Assert
        for name, profile in table_profiles.items():
            running = Fraction(0)
            for cutoff in range(1, 51):
                running += pmf(profile, cutoff)
                assert running + survival(profile, cutoff) == 1, (name, cutoff)

    def test_table_frame(self, mds73):
        # Act
        frame = pmf_table(mds73, 7).to_frame(precision=3)

        # Assert
        assert list(frame.columns) == ["r", "num", "den", "pmf"]
        assert frame["pmf"].tolist() == ["0.143", "0.122", "0.455", "0.190", "0.063", "0.019", "0.006"]

    def test_rmax_must_be_positive(self, mds73):
        with pytest.raises(ValueError):
            pmf_table(mds73, 0)


class TestMomentReport:
    """Collected moments with their method tags."""

    def test_closed_form_report(self, mds73):
        # Act
        report = moment_report(mds73, powers=(3,))

        # Assert
        assert sorted(report.moments) == [1, 2, 3]
        assert report.expectation == 3
        assert report.variance == Fraction(22, 15)
        assert set(report.methods.values()) == {"closed-form"}
        assert report.tail_bounds == {}

    def test_tail_sum_report_carries_bounds(self, mds73):
        # Act
        report = moment_report(mds73, powers=(1, 2), method="tail-sum", eps=Fraction(1, 10**8))

        # Assert
        assert set(report.tail_bounds) == {1, 2}
        assert all(bound <= Fraction(1, 10**8) for bound in report.tail_bounds.values())
        payload = report.to_dict(precision=3)
        assert payload["moments"]["1"]["method"] == "tail-sum"
        assert "tail_bound" in payload["moments"]["2"]

    def test_variance_follows_the_reported_moments(self, identity_profile):
        # Act
        closed = moment_report(identity_profile, powers=(2,))
        tail = moment_report(identity_profile, powers=(2,), method="tail-sum", eps=Fraction(1, 10**6))

        # Assert
        assert closed.variance == closed.moments[2] - closed.moments[1] ** 2 == 42
        assert closed.variance_bound is None
        assert tail.variance == tail.moments[2] - tail.moments[1] ** 2
        assert tail.variance_bound is not None
        assert abs(tail.variance - 42) <= tail.variance_bound
        assert "variance_bound" in tail.to_dict(precision=3)
        assert "variance_bound" not in closed.to_dict(precision=3)

    def test_unknown_method(self, mds73):
        with pytest.raises(ValueError, match="unknown moment method"):
            moment_report(mds73, method="series")

    def test_central_moments_of_the_geometric_law(self, identity_profile):
        # Act
        central = central_moments(moment_report(identity_profile))

        # Assert: a geometric law with success 1/7 has variance 42 and third central moment 546
        assert central[2] == 42
        assert central[3] == 546
        assert set(central) == {2, 3, 4}
