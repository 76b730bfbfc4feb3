"""
Shared constants for the coverage-depth CLI application.

This module contains constants used throughout the application
to ensure consistency and maintainability.
"""

# CLI invocation commands
CLI_COMMAND_PYTHON = "python -m coverage_depth_cli"
CLI_COMMAND_SCRIPT = "coverage-cli"

# Configuration directory name
CONFIG_DIR_NAME = "coverage-cli"

# Name of the application logger and prefix of its log files
LOGGER_NAME = "coverage_cli"
LOG_FILE_PREFIX = "coverage_cli"

# Environment variable holding the default worker count
THREADS_ENV_VAR = "COVERAGE_CLI_THREADS"

# Subset masks must fit a machine word
MAX_COLUMNS = 64

# Process exit codes
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PRECONDITION = 2
EXIT_MISMATCH = 3
