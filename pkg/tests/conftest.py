"""
Pytest configuration and shared fixtures for coverage-depth CLI tests

This module provides common fixtures and test utilities that can be used
across all test files in the suite.
"""

from pathlib import Path

import numpy as np
import pytest

from coverage_depth_cli.families import family_generator, family_profile
from coverage_depth_cli.field import field_make
from coverage_depth_cli.matrix import GeneratorMatrix, mat_rank
from coverage_depth_cli.models import FamilySpec
from coverage_depth_cli.signal_handler import get_cancellation_manager

MATRICES_DIR = Path(__file__).resolve().parent.parent / "matrices"

# The five length-7 codes of the published comparison tables.
TABLE_CODES = {
    "mds3": FamilySpec("mds", q=8, n=7, k=3),
    "simplex3": FamilySpec("simplex", q=2, k=3),
    "mds4": FamilySpec("mds", q=8, n=7, k=4),
    "hamming4": FamilySpec("hamming", q=2, m=3),
    "identity7": FamilySpec("identity", n=7),
}


@pytest.fixture(autouse=True)
def reset_cancellation():
    """Every test starts and ends with a cleared cancellation flag."""
    manager = get_cancellation_manager()
    manager.reset()
    yield manager
    manager.reset()


@pytest.fixture
def isolated_dirs(tmp_path, monkeypatch):
    """
    Point config, cache and working directories at a temporary tree

    Usage:
        def test_something(isolated_dirs):
            # ~/.config and ~/.cache resolve below isolated_dirs
    """
    monkeypatch.setenv("HOME", str(tmp_path))
    monkeypatch.setenv("XDG_CONFIG_HOME", str(tmp_path / "config"))
    monkeypatch.setenv("XDG_CACHE_HOME", str(tmp_path / "cache"))
    monkeypatch.setenv("APPDATA", str(tmp_path / "config"))
    monkeypatch.setenv("LOCALAPPDATA", str(tmp_path / "cache"))
    monkeypatch.delenv("COVERAGE_CLI_THREADS", raising=False)
    work = tmp_path / "work"
    work.mkdir()
    monkeypatch.chdir(work)
    return tmp_path


@pytest.fixture
def matrices_dir():
    """Directory of the shipped example matrix files."""
    return MATRICES_DIR


@pytest.fixture
def gf2():
    return field_make(2)


@pytest.fixture
def gf8():
    return field_make(2, 3)


@pytest.fixture
def table_codes():
    return dict(TABLE_CODES)


@pytest.fixture
def table_matrices():
    """Generator matrices of the five comparison codes."""
    return {name: family_generator(spec) for name, spec in TABLE_CODES.items()}


@pytest.fixture
def table_profiles():
    """Closed-form alpha profiles of the five comparison codes."""
    return {name: family_profile(spec) for name, spec in TABLE_CODES.items()}


@pytest.fixture
def identity7(gf2):
    return GeneratorMatrix(gf2, np.eye(7, dtype=np.int64))


def random_full_rank_matrices(count, seed=2024, fields=(2, 3), max_n=12):
    """
    Deterministic stream of random rank-k matrices over small prime fields.

    Rows are redrawn until the matrix has full row rank.
    """
    rng = np.random.default_rng(seed)
    produced = []
    while len(produced) < count:
        p = int(rng.choice(fields))
        spec = field_make(p)
        n = int(rng.integers(2, max_n + 1))
        k = int(rng.integers(1, min(n, 5) + 1))
        rows = rng.integers(0, p, size=(k, n))
        if mat_rank(rows, spec) == k:
            produced.append(GeneratorMatrix(spec, rows))
    return produced


@pytest.fixture
def random_matrices():
    return random_full_rank_matrices(50)


@pytest.fixture
def full_rank_matrices():
    """Factory fixture around ``random_full_rank_matrices`` for custom seeds and fields."""
    return random_full_rank_matrices
