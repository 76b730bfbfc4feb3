#!/usr/bin/env python3
"""
Coverage-depth CLI
Exact and simulated retrieval-time statistics of linear codes used for DNA
random access, emitted as JSON, CSV or TSV reports.
"""

import contextlib
import logging
import sys
from datetime import datetime
from typing import List, Optional

# Load environment variables from .env file if it exists
try:
    from dotenv import load_dotenv

    from .config_paths import ConfigPathManager

    env_file = ConfigPathManager().find_env_file()
    if env_file:
        load_dotenv(dotenv_path=env_file)
    else:
        load_dotenv()
except ImportError:
    # dotenv not installed, skip .env file loading
    pass

from .argument_parser import CLIArgumentParser  # noqa: E402 - placed after environment setup
from .command_router import CommandRouter  # noqa: E402 - placed after environment setup
from .config import ConfigurationManager  # noqa: E402 - placed after environment setup
from .config_paths import ConfigPathManager  # noqa: E402 - placed after environment setup
from .constants import (  # noqa: E402 - placed after environment setup
    EXIT_MISMATCH,
    EXIT_OK,
    EXIT_PRECONDITION,
    EXIT_USAGE,
    LOG_FILE_PREFIX,
    LOGGER_NAME,
)
from .errors import MatrixFileError, PreconditionError  # noqa: E402
from .report_writer import ReportWriter, emit  # noqa: E402
from .signal_handler import get_cancellation_manager  # noqa: E402
from .user_output import UserOutput  # noqa: E402


def setup_logging(verbose=False):
    """
    Set up logging configuration.

    Args:
        verbose: If True, also display logs on stderr. Otherwise logs go to file only.

    Returns:
        Tuple of (logger, log_file_path)
    """
    log_level = logging.INFO if not verbose else logging.DEBUG

    path_manager = ConfigPathManager()
    log_dir = path_manager.get_log_dir()
    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    log_file = log_dir / f"{LOG_FILE_PREFIX}_{timestamp}.log"

    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(log_level)

    # Close existing handlers before clearing to prevent ResourceWarning
    for handler in logger.handlers[:]:
        handler.close()
        logger.removeHandler(handler)

    formatter = logging.Formatter("%(asctime)s - %(levelname)s - %(message)s", datefmt="%H:%M:%S")
    file_handler = logging.FileHandler(log_file, encoding="utf-8")
    file_handler.setLevel(log_level)
    file_handler.setFormatter(formatter)
    logger.addHandler(file_handler)

    if verbose:
        stream_handler = logging.StreamHandler(sys.stderr)
        stream_handler.setLevel(log_level)
        stream_handler.setFormatter(formatter)
        logger.addHandler(stream_handler)

    with contextlib.suppress(Exception):
        path_manager.cleanup_old_logs(days=30)

    return logger, log_file


def _tool_version() -> str:
    from . import __version__  # noqa: PLC0415 - package imports this module

    return __version__


def run(argv: Optional[List[str]] = None) -> int:
    """
    Parse ``argv``, execute the command and emit its report.

    Returns:
        0 on success, 1 for usage and matrix-file errors, 2 when a computation
        precondition is violated, 3 when a reproduction check fails
    """
    parser = CLIArgumentParser().build()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    if not args.command:
        parser.print_help(sys.stderr)
        return EXIT_USAGE

    logger, log_file = setup_logging(verbose=args.verbose)
    output = UserOutput(quiet=args.quiet)
    logger.info("Command: %s", " ".join(sys.argv[1:] if argv is None else argv))

    cancellation = get_cancellation_manager()
    cancellation.set_logger(logger)
    cancellation.reset()
    try:
        config_file = args.config
        if config_file is None:
            found = ConfigPathManager().find_config_file()
            config_file = str(found) if found else None
        config = ConfigurationManager(config_file=config_file, logger=logger)
        precision = args.precision if args.precision is not None else config.precision
        fmt = args.format or config.output_format

        with cancellation:
            report = CommandRouter(config, logger, output).route(args.command, args)
        report.version = _tool_version()

        if args.output:
            result = ReportWriter(logger).write(report, args.output, fmt, precision)
            if not result.success:
                output.error(f"Could not write {result.output_file}: {result.error}")
                return EXIT_USAGE
            output.info(f"Report written to {result.output_file}", tag="SAVED")
        else:
            sys.stdout.write(emit(report, fmt, precision))
    except MatrixFileError as exc:
        logger.error("Matrix file error: %s", exc)
        output.error(str(exc))
        return EXIT_USAGE
    except PreconditionError as exc:
        logger.error("Precondition violated: %s", exc)
        output.error(str(exc))
        return EXIT_PRECONDITION
    except KeyboardInterrupt:
        logger.warning("Cancelled by user")
        output.error("Cancelled by user")
        return EXIT_USAGE

    if not args.verbose:
        output.info(f"Full diagnostic log saved to: {log_file}", tag="LOG")
    if not report.passed:
        output.error("Reproduction check failed; see the report's checks")
        return EXIT_MISMATCH
    return EXIT_OK


def main():
    """Main entry point for the CLI application."""
    sys.exit(run())


if __name__ == "__main__":
    main()
