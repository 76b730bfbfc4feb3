"""
Configuration management for the coverage-depth CLI.

The ``ConfigurationManager`` class centralises loading, validation, and retrieval
of the tunable limits and defaults: enumeration caps, output precision, Monte
Carlo settings and the reproduction tolerance.
"""

from __future__ import annotations

import json
import logging
import os
from copy import deepcopy
from fractions import Fraction
from pathlib import Path
from typing import Any, NoReturn, Optional

from .constants import LOGGER_NAME, THREADS_ENV_VAR
from .errors import PreconditionError

__all__ = [
    "OUTPUT_FORMATS",
    "ConfigurationManager",
]

OUTPUT_FORMATS = ("json", "csv", "tsv")

_EMBEDDED_DEFAULT_CONFIG: dict[str, Any] = {
    "computation": {
        "bruteforce_max_columns": 24,
        "xi_max_sets": 25,
        "tailsum_epsilon": "1e-12",
        "strand_check_max_columns": 16,
    },
    "output": {
        "precision": 3,
        "format": "json",
        "pmf_rmax": 30,
    },
    "simulation": {
        "trials": 100000,
        "seed": 20240701,
        "max_draws": 10000000,
        "threads": 1,
    },
    "reproduce": {
        "tolerance": "0.0005",
    },
}

_POSITIVE_INTEGERS = (
    "computation.bruteforce_max_columns",
    "computation.xi_max_sets",
    "computation.strand_check_max_columns",
    "output.pmf_rmax",
    "simulation.trials",
    "simulation.max_draws",
    "simulation.threads",
)
_POSITIVE_RATIONALS = ("computation.tailsum_epsilon", "reproduce.tolerance")


def _get_embedded_default_config() -> dict[str, Any]:
    """Return a deep copy of the embedded configuration defaults."""
    return deepcopy(_EMBEDDED_DEFAULT_CONFIG)


def _merge(base: dict[str, Any], overrides: dict[str, Any]) -> dict[str, Any]:
    merged = deepcopy(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = deepcopy(value)
    return merged


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


class ConfigurationManager:
    """High level interface for loading and querying configuration data."""

    def __init__(
        self,
        config_file: Optional[str] = None,
        logger: Optional[logging.Logger] = None,
        config_data: Optional[dict[str, Any]] = None,
    ) -> None:
        self.logger = logger or logging.getLogger(LOGGER_NAME)
        self.config_path = Path(config_file) if config_file else None
        self._provided_config = deepcopy(config_data) if config_data is not None else None
        self._config: dict[str, Any] = {}
        self._load()

    # ------------------------------------------------------------------ Loading
    def _load(self) -> None:
        """Merge provided dict or file contents over the embedded defaults."""
        overrides: dict[str, Any] = {}

        if self._provided_config is not None:
            overrides = self._provided_config
            self.logger.debug("Loaded configuration from provided dictionary")
        elif self.config_path and self.config_path.exists():
            try:
                with self.config_path.open("r", encoding="utf-8") as fh:
                    overrides = json.load(fh)
            except json.JSONDecodeError as exc:
                self.logger.error(f"Invalid JSON in config file: {self.config_path}")
                raise PreconditionError(
                    f"invalid JSON in config file {self.config_path} "
                    f"at line {exc.lineno}, column {exc.colno}: {exc.msg}"
                ) from None
            except OSError as exc:
                raise PreconditionError(
                    f"cannot read config file {self.config_path}: {exc.strerror}"
                ) from None
            self.logger.info(f"Loaded configuration from {self.config_path}")
        elif self.config_path:
            self.logger.info(f"Config file not found: {self.config_path}, using embedded defaults")

        if not isinstance(overrides, dict):
            self._validation_error(
                "configuration root must be an object", found=type(overrides).__name__
            )
        self._config = _merge(_get_embedded_default_config(), overrides)
        self._validate_config()

    # --------------------------------------------------------------- Validation
    def _validate_config(self) -> None:
        """Check section shapes first, then value types and ranges."""
        for section in _EMBEDDED_DEFAULT_CONFIG:
            if not isinstance(self._config.get(section), dict):
                self._validation_error(
                    f"configuration section '{section}' must be an object",
                    found=type(self._config.get(section)).__name__,
                )

        for key in _POSITIVE_INTEGERS:
            value = self.get(key)
            if not _is_int(value) or value < 1:
                self._validation_error(f"{key} must be a positive integer", found=repr(value))

        precision = self.get("output.precision")
        if not _is_int(precision) or precision < 0:
            self._validation_error(
                "output.precision must be a non-negative integer", found=repr(precision)
            )

        output_format = self.get("output.format")
        if output_format not in OUTPUT_FORMATS:
            self._validation_error(
                "output.format has an invalid value",
                found=repr(output_format),
                expected=f"one of: {', '.join(OUTPUT_FORMATS)}",
            )

        seed = self.get("simulation.seed")
        if not _is_int(seed) or seed < 0:
            self._validation_error("simulation.seed must be a non-negative integer", found=repr(seed))

        for key in _POSITIVE_RATIONALS:
            self._rational(key)

        cap = self.get("computation.bruteforce_max_columns")
        if cap > 30:
            self.logger.warning(
                f"computation.bruteforce_max_columns is unusually high ({cap}); "
                "enumeration time doubles with every column"
            )

    def _rational(self, key: str) -> Fraction:
        value = self.get(key)
        try:
            parsed = Fraction(str(value))
        except (TypeError, ValueError, ZeroDivisionError):
            self._validation_error(f"{key} must be a rational number", found=repr(value))
        if parsed <= 0:
            self._validation_error(f"{key} must be positive", found=repr(value))
        return parsed

    def _validation_error(self, message: str, found: str = "", expected: str = "") -> NoReturn:
        self.logger.error(f"Configuration validation failed: {message}")
        details = [message]
        if found:
            details.append(f"found {found}")
        if expected:
            details.append(f"expected {expected}")
        location = self.config_path or "provided configuration"
        raise PreconditionError(f"invalid configuration ({location}): {'; '.join(details)}")

    # ------------------------------------------------------------------ Helpers
    @property
    def config(self) -> dict[str, Any]:
        """Return a deep copy of the loaded configuration."""
        return deepcopy(self._config)

    def get(self, key: str, default: Any = None) -> Any:
        """Retrieve configuration values with optional dotted path access."""
        current: Any = self._config
        for part in key.split("."):
            if isinstance(current, dict) and part in current:
                current = current[part]
            else:
                return default
        return deepcopy(current)

    @property
    def bruteforce_max_columns(self) -> int:
        return self.get("computation.bruteforce_max_columns")

    @property
    def xi_max_sets(self) -> int:
        return self.get("computation.xi_max_sets")

    @property
    def strand_check_max_columns(self) -> int:
        return self.get("computation.strand_check_max_columns")

    @property
    def tailsum_epsilon(self) -> Fraction:
        return self._rational("computation.tailsum_epsilon")

    @property
    def precision(self) -> int:
        return self.get("output.precision")

    @property
    def output_format(self) -> str:
        return self.get("output.format")

    @property
    def pmf_rmax(self) -> int:
        return self.get("output.pmf_rmax")

    @property
    def tolerance(self) -> Fraction:
        return self._rational("reproduce.tolerance")

    def simulation_defaults(self) -> dict[str, int]:
        return {
            "trials": self.get("simulation.trials"),
            "seed": self.get("simulation.seed"),
            "max_draws": self.get("simulation.max_draws"),
        }

    def default_threads(self) -> int:
        """Worker count from the environment when set, otherwise from the config."""
        raw = os.environ.get(THREADS_ENV_VAR)
        if raw is None or not raw.strip():
            return self.get("simulation.threads")
        try:
            threads = int(raw)
        except ValueError:
            raise PreconditionError(f"{THREADS_ENV_VAR} must be an integer, got '{raw}'") from None
        if threads < 1:
            raise PreconditionError(f"{THREADS_ENV_VAR} must be positive, got {threads}")
        return threads
