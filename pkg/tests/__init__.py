"""
Test suite for the coverage-depth CLI.

Unit tests live in ``tests/unit``; shared fixtures are in ``tests/conftest.py``.
"""
