"""
Unit tests for the ConfigurationManager class.
"""

from __future__ import annotations

import json
from fractions import Fraction
from unittest.mock import MagicMock

import pytest

from coverage_depth_cli.config import ConfigurationManager
from coverage_depth_cli.constants import THREADS_ENV_VAR
from coverage_depth_cli.errors import PreconditionError


def test_configuration_manager_uses_embedded_defaults():
    # Arrange
    manager = ConfigurationManager()

    # Act & Assert
    assert manager.bruteforce_max_columns == 24
    assert manager.xi_max_sets == 25
    assert manager.precision == 3
    assert manager.output_format == "json"
    assert manager.tailsum_epsilon == Fraction(1, 10**12)
    assert manager.tolerance == Fraction(5, 10**4)
    assert manager.simulation_defaults()["trials"] == 100000


def test_configuration_manager_loads_from_file(tmp_path):
    # Arrange
    config_file = tmp_path / "config.json"
    payload = {"computation": {"bruteforce_max_columns": 18}, "output": {"precision": 6}}
    config_file.write_text(json.dumps(payload), encoding="utf-8")

    # Act
    manager = ConfigurationManager(config_file=str(config_file))

    # Assert
    assert manager.bruteforce_max_columns == 18
    assert manager.precision == 6
    # untouched keys keep their defaults
    assert manager.xi_max_sets == 25
    assert manager.pmf_rmax == 30


def test_configuration_manager_accepts_provided_dict():
    # Act
    manager = ConfigurationManager(config_data={"reproduce": {"tolerance": "1/1000"}})

    # Assert
    assert manager.tolerance == Fraction(1, 1000)


def test_missing_file_falls_back_to_defaults(tmp_path):
    # Arrange
    logger = MagicMock()

    # Act
    manager = ConfigurationManager(config_file=str(tmp_path / "absent.json"), logger=logger)

    # Assert
    assert manager.precision == 3
    logger.info.assert_called_once()


def test_invalid_json_reports_location(tmp_path):
    # Arrange
    config_file = tmp_path / "config.json"
    config_file.write_text('{"output": {"precision": }}', encoding="utf-8")

    # Act & Assert
    with pytest.raises(PreconditionError, match="invalid JSON .* at line 1, column"):
        ConfigurationManager(config_file=str(config_file))


@pytest.mark.parametrize(
    "overrides,message",
    [
        ([1, 2], "configuration root must be an object"),
        ({"output": 3}, "section 'output' must be an object"),
        ({"computation": {"xi_max_sets": 0}}, "computation.xi_max_sets must be a positive integer"),
        ({"simulation": {"trials": True}}, "simulation.trials must be a positive integer"),
        ({"output": {"precision": -1}}, "output.precision must be a non-negative integer"),
        ({"output": {"format": "xlsx"}}, "expected one of: json, csv, tsv"),
        ({"simulation": {"seed": -5}}, "simulation.seed must be a non-negative integer"),
        ({"reproduce": {"tolerance": "abc"}}, "reproduce.tolerance must be a rational number"),
        ({"computation": {"tailsum_epsilon": "0"}}, "computation.tailsum_epsilon must be positive"),
    ],
)
def test_validation_errors(overrides, message):
    with pytest.raises(PreconditionError, match=message):
        ConfigurationManager(config_data=overrides)


def test_validation_error_names_the_source():
    with pytest.raises(PreconditionError, match=r"invalid configuration \(provided configuration\)"):
        ConfigurationManager(config_data={"output": {"precision": "3"}})


def test_high_cap_is_warned_about():
    # Arrange
    logger = MagicMock()

    # Act
    ConfigurationManager(config_data={"computation": {"bruteforce_max_columns": 40}}, logger=logger)

    # Assert
    logger.warning.assert_called_once()


def test_get_supports_dotted_paths_and_defaults():
    # Arrange
    manager = ConfigurationManager()

    # Act & Assert
    assert manager.get("simulation.seed") == 20240701
    assert manager.get("simulation.unknown", "fallback") == "fallback"
    assert manager.get("missing.section") is None


def test_config_property_is_a_copy():
    # Arrange
    manager = ConfigurationManager()

    # Act
    snapshot = manager.config
    snapshot["output"]["precision"] = 9

    # Assert
    assert manager.precision == 3


def test_default_threads_from_config_and_environment(monkeypatch):
    # Arrange
    manager = ConfigurationManager(config_data={"simulation": {"threads": 3}})
    monkeypatch.delenv(THREADS_ENV_VAR, raising=False)

    # Act & Assert
    assert manager.default_threads() == 3
    monkeypatch.setenv(THREADS_ENV_VAR, "6")
    assert manager.default_threads() == 6
    monkeypatch.setenv(THREADS_ENV_VAR, " ")
    assert manager.default_threads() == 3


@pytest.mark.parametrize("raw,message", [("many", "must be an integer"), ("0", "must be positive")])
def test_default_threads_rejects_bad_environment(monkeypatch, raw, message):
    # Arrange
    monkeypatch.setenv(THREADS_ENV_VAR, raw)
    manager = ConfigurationManager()

    # Act & Assert
    with pytest.raises(PreconditionError, match=message):
        manager.default_threads()
