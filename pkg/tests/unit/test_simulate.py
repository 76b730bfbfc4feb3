"""
Unit tests for the Monte Carlo estimator.
"""

from fractions import Fraction

import pytest

from coverage_depth_cli import simulate
from coverage_depth_cli.errors import PreconditionError, SimulationError
from coverage_depth_cli.matrix import GeneratorMatrix
from coverage_depth_cli.models import SimConfig
from coverage_depth_cli.moments import pmf
from coverage_depth_cli.simulate import (
    MonteCarloSimulator,
    compare_with_exact,
    estimate,
    sample_tau,
    trial_stream,
)


@pytest.fixture
def small_chunks(monkeypatch):
    """Shrink the chunk size so a few hundred trials span several chunks."""
    monkeypatch.setattr(simulate, "CHUNK_TRIALS", 100)


class TestStreams:
    """Per-trial random streams."""

    def test_same_seed_and_index_repeat(self):
        # Act
        first = trial_stream(42, 7).random_raw(8).tolist()
        second = trial_stream(42, 7).random_raw(8).tolist()

        # Assert
        assert first == second

    def test_trials_and_seeds_are_independent_streams(self):
        # Act
        base = trial_stream(42, 7).random_raw(4).tolist()

        # Assert
        assert trial_stream(42, 8).random_raw(4).tolist() != base
        assert trial_stream(43, 7).random_raw(4).tolist() != base


class TestSampleTau:
    """A single trial."""

    def test_draw_count_is_at_least_the_minimal_set_size(self, gf2):
        # Arrange: e_1 is only spanned by both columns together
        matrix = GeneratorMatrix.from_rows(gf2, [[0, 1], [1, 1]])

        # Act
        draws = [sample_tau(matrix, 1, trial_stream(5, t)) for t in range(50)]

        # Assert
        assert min(draws) >= 2

    def test_draw_limit_raises(self, gf2):
        # Arrange
        matrix = GeneratorMatrix.from_rows(gf2, [[0, 1], [1, 1]])

        # Act & Assert
        with pytest.raises(SimulationError, match="not recovered after 1 draws"):
            sample_tau(matrix, 1, trial_stream(5, 0), max_draws=1)


class TestEstimate:
    """Whole simulations and their reproducibility."""

    def test_histogram_depends_only_on_seed(self, identity7, small_chunks):
        # Arrange
        config = SimConfig(trials=450, master_seed=11)

        # Act
        first = estimate(identity7, 3, config)
        second = estimate(identity7, 3, config)
        other = estimate(identity7, 3, SimConfig(trials=450, master_seed=12))

        # Assert
        assert first.histogram == second.histogram
        assert first.histogram != other.histogram
        assert sum(first.histogram.values()) == 450

    def test_histogram_matches_trial_by_trial_sampling(self, identity7, small_chunks):
        # Arrange
        config = SimConfig(trials=250, master_seed=3)
        expected = {}
        for trial in range(250):
            draws = sample_tau(identity7, 1, trial_stream(3, trial))
            expected[draws] = expected.get(draws, 0) + 1

        # Act
        report = estimate(identity7, 1, config)

        # Assert
        assert report.histogram == dict(sorted(expected.items()))

    @pytest.mark.slow
    def test_worker_count_does_not_change_the_result(self, identity7, small_chunks):
        # Act
        serial = estimate(identity7, 2, SimConfig(trials=450, master_seed=9, parallelism=1))
        parallel = estimate(identity7, 2, SimConfig(trials=450, master_seed=9, parallelism=2))

        # Assert
        assert parallel.histogram == serial.histogram
        assert parallel.mean == serial.mean

    def test_chunks_cover_all_trials(self, identity7, small_chunks):
        # Act
        chunks = MonteCarloSimulator(identity7, 1, SimConfig(trials=250, master_seed=1)).chunks()

        # Assert
        assert chunks == [(0, 100), (100, 200), (200, 250)]

    def test_sample_statistics(self, identity7):
        # Act
        report = estimate(identity7, 1, SimConfig(trials=200, master_seed=77))

        # Assert
        total = sum(r * c for r, c in report.histogram.items())
        assert report.mean == pytest.approx(total / 200)
        assert report.raw_moments[1] == pytest.approx(report.mean)
        assert report.variance >= 0
        assert set(report.standard_errors) >= {"mean", "variance", "moment_1", "moment_4"}
        assert sum(report.pmf.values()) == pytest.approx(1.0)

    def test_to_dict(self, identity7):
        # Act
        payload = estimate(identity7, 1, SimConfig(trials=20, master_seed=1)).to_dict()

        # Assert
        assert payload["trials"] == 20
        assert payload["seed"] == 1
        assert sum(payload["histogram"].values()) == 20

    @pytest.mark.parametrize(
        "config,message",
        [
            (SimConfig(trials=0, master_seed=1), "trials must be positive"),
            (SimConfig(trials=10, master_seed=-1), "64-bit"),
            (SimConfig(trials=10, master_seed=1, parallelism=0), "parallelism"),
            (SimConfig(trials=10, master_seed=1, max_draws=3), "at least n = 7"),
        ],
    )
    def test_invalid_configuration(self, identity7, config, message):
        with pytest.raises(PreconditionError, match=message):
            MonteCarloSimulator(identity7, 1, config)

    def test_cancellation_stops_the_run(self, identity7, reset_cancellation):
        # Arrange
        reset_cancellation.cancel()

        # Act & Assert
        with pytest.raises(KeyboardInterrupt):
            estimate(identity7, 1, SimConfig(trials=10, master_seed=1))


class TestCompareWithExact:
    """Agreement between simulation and exact values."""

    def test_identity_code(self, identity7, table_profiles):
        # Act
        report = estimate(identity7, 1, SimConfig(trials=3000, master_seed=2024))
        scores = compare_with_exact(report, table_profiles["identity7"])

        # Assert
        assert abs(scores["mean"]) < 5
        assert abs(scores["variance"]) < 5
        assert report.mean == pytest.approx(7, abs=0.6)

    def test_mds_code(self, table_matrices, table_profiles):
        # Act
        report = estimate(table_matrices["mds3"], 2, SimConfig(trials=3000, master_seed=7))
        scores = compare_with_exact(report, table_profiles["mds3"])

        # Assert
        assert abs(scores["mean"]) < 5
        assert report.mean == pytest.approx(float(Fraction(3)), abs=0.15)
        assert set(scores) == {"mean", "variance", "pmf", "max_abs_z"}
        assert min(report.histogram) == 1


COMPARISON_CODES = ["mds3", "simplex3", "mds4", "hamming4", "identity7"]


@pytest.mark.slow
class TestLargeRuns:
    """Million-trial runs of the five comparison codes."""

    @pytest.mark.parametrize("name", COMPARISON_CODES)
    def test_empirical_distribution_agrees_with_exact(self, name, table_matrices, table_profiles):
        # Arrange
        profile = table_profiles[name]
        config = SimConfig(trials=10**6, master_seed=20240701, parallelism=8)

        # Act
        report = estimate(table_matrices[name], 1, config)
        scores = compare_with_exact(report, profile)

        # Assert: entries with an expected count of at least 25
        checked = {
            r: z for r, z in scores["pmf"].items() if report.trials * pmf(profile, r) >= 25
        }
        assert len(checked) >= 5
        assert all(abs(z) <= 4 for z in checked.values()), checked
        assert abs(scores["mean"]) <= 4
        assert abs(scores["variance"]) <= 4

    @pytest.mark.parametrize("name", COMPARISON_CODES)
    def test_one_four_and_eight_workers_agree(self, name, table_matrices):
        # Arrange
        matrix = table_matrices[name]

        # Act
        reports = [
            estimate(matrix, 1, SimConfig(trials=60_000, master_seed=31, parallelism=workers))
            for workers in (1, 4, 8)
        ]

        # Assert
        assert reports[0].histogram == reports[1].histogram == reports[2].histogram
        assert reports[0].mean == reports[1].mean == reports[2].mean
        assert reports[0].variance == reports[1].variance == reports[2].variance
