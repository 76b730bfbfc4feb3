"""
Argument parser for the coverage-depth CLI
Handles command-line argument definition and parsing
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import NoReturn

from .constants import CLI_COMMAND_PYTHON, CONFIG_DIR_NAME, EXIT_USAGE
from .models import FAMILY_KINDS
from .report_writer import FORMATS

REPRODUCE_TARGETS = ("table1", "table2", "figure1")


class BetterHelpFormatter(argparse.RawDescriptionHelpFormatter):
    """Custom formatter with better indentation for help text."""

    def __init__(self, prog):
        super().__init__(prog, max_help_position=35)


class UsageErrorParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with the CLI's usage code."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def rational_arg(text: str) -> Fraction:
    """argparse type for exact rationals such as ``0.834``, ``5/6`` or ``1e-10``."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: '{text}'") from None


def _integer(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: '{text}'") from None


def positive_int(text: str) -> int:
    value = _integer(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def non_negative_int(text: str) -> int:
    value = _integer(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must not be negative, got {value}")
    return value


class CLIArgumentParser:
    """Creates and configures the CLI argument parser."""

    def build(self) -> argparse.ArgumentParser:
        """
        Build and return configured ArgumentParser.

        Returns:
            argparse.ArgumentParser: Configured argument parser with all commands
        """
        description = """
Exact retrieval-time statistics of linear codes for DNA random access

COMMAND GROUPS:
  Exact engine:    alpha, moments, pmf
  Monte Carlo:     simulate
  Closed forms:    limit, quasiarc, optimize-epsilon
  Regression:      reproduce
"""

        parser = UsageErrorParser(
            prog=CLI_COMMAND_PYTHON,
            description=description,
            formatter_class=BetterHelpFormatter,
            epilog=f"""
Common Examples:
  {CLI_COMMAND_PYTHON} pmf --family mds --q 8 --n 7 --k 3 --rmax 7
  {CLI_COMMAND_PYTHON} moments --file matrices/hamming_2_3.txt --strand 1
  {CLI_COMMAND_PYTHON} alpha --family ratehalf --k 4 --minimal
  {CLI_COMMAND_PYTHON} simulate --family identity --n 7 --trials 100000 --seed 7
  {CLI_COMMAND_PYTHON} optimize-epsilon --tol 1e-10
  {CLI_COMMAND_PYTHON} reproduce table2 --format csv

More help: {CLI_COMMAND_PYTHON} <command> --help
        """,
        )

        self._add_global_arguments(parser)
        common = self._common_parent()
        source = self._source_parent()
        subparsers = parser.add_subparsers(dest="command", help="Available commands")

        self._add_alpha_command(subparsers, [common, source])
        self._add_moments_command(subparsers, [common, source])
        self._add_pmf_command(subparsers, [common, source])
        self._add_simulate_command(subparsers, [common, source])
        self._add_limit_command(subparsers, [common])
        self._add_quasiarc_command(subparsers, [common])
        self._add_optimize_epsilon_command(subparsers, [common])
        self._add_reproduce_command(subparsers, [common])

        return parser

    def _add_global_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument(
            "--config",
            "-c",
            help=f"Path to configuration file (default: ./config.json, then ~/.config/{CONFIG_DIR_NAME}/)",
        )

    def _common_parent(self) -> argparse.ArgumentParser:
        """Output and logging options shared by every command."""
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--verbose", "-v", action="store_true", help="Enable verbose logging")
        common.add_argument("--quiet", "-q", action="store_true", help="Suppress status lines")
        common.add_argument(
            "--format", choices=FORMATS, help="Report format (default from config: json)"
        )
        common.add_argument(
            "--precision",
            type=non_negative_int,
            help="Decimal places of approximations (default: 3)",
        )
        common.add_argument("--output", "-o", help="Write the report to this file instead of stdout")
        common.add_argument(
            "--threads",
            type=positive_int,
            help="Worker processes for enumeration and simulation (default: env or config)",
        )
        return common

    def _source_parent(self) -> argparse.ArgumentParser:
        """Selection of the generator matrix: a file or a family preset."""
        source = argparse.ArgumentParser(add_help=False)
        choice = source.add_mutually_exclusive_group(required=True)
        group = source.add_argument_group("family parameters")
        choice.add_argument("--file", "-f", help="Generator matrix file")
        choice.add_argument("--family", choices=FAMILY_KINDS, help="Code family preset")
        group.add_argument("--q", type=int, help="Field order (mds, hamming, simplex)")
        group.add_argument("--n", type=int, help="Code length (identity, mds)")
        group.add_argument("--k", type=int, help="Dimension (mds, simplex, ratehalf)")
        group.add_argument("--m", type=int, help="Redundancy of the Hamming code")
        group.add_argument(
            "--strand",
            type=positive_int,
            help="Information strand i, 1-based (default: all strands)",
        )
        group.add_argument(
            "--save-matrix", metavar="PATH", help="Also write the generator matrix to PATH"
        )
        return source

    def _add_alpha_command(self, subparsers, parents) -> None:
        alpha_parser = subparsers.add_parser(
            "alpha",
            parents=parents,
            help="Recovery-set counts alpha_i(G, s)",
            description="Count the recovery sets of every size for one or all strands.",
        )
        alpha_parser.add_argument(
            "--method",
            choices=["auto", "bruteforce", "closed"],
            default="auto",
            help="Closed form for families, enumeration for files (default: auto)",
        )
        alpha_parser.add_argument(
            "--minimal",
            action="store_true",
            help="Include minimal recovery sets and the union census xi",
        )

    def _add_moments_command(self, subparsers, parents) -> None:
        moments_parser = subparsers.add_parser(
            "moments",
            parents=parents,
            help="Exact raw moments and variance of tau_i",
            description="Exact moments E[tau_i^p], p = 1..max-power, and the variance.",
        )
        moments_parser.add_argument(
            "--method",
            choices=["closed-form", "tail-sum"],
            default="closed-form",
            help="Moment evaluation route (default: closed-form)",
        )
        moments_parser.add_argument(
            "--eps",
            type=rational_arg,
            help="Remainder bound of the tail-sum route (default from config: 1e-12)",
        )
        moments_parser.add_argument(
            "--max-power", type=positive_int, default=4, help="Highest moment order (default: 4)"
        )

    def _add_pmf_command(self, subparsers, parents) -> None:
        pmf_parser = subparsers.add_parser(
            "pmf",
            parents=parents,
            help="Probability mass function P[tau_i = r]",
            description="P[tau_i = r] for r = 1..rmax with the exact tail mass P[tau_i > rmax].",
        )
        pmf_parser.add_argument(
            "--rmax", type=positive_int, help="Largest draw count listed (default: 30)"
        )

    def _add_simulate_command(self, subparsers, parents) -> None:
        simulate_parser = subparsers.add_parser(
            "simulate",
            parents=parents,
            help="Monte Carlo estimate of the distribution of tau_i",
            description="""
Draw columns uniformly with replacement until the strand is recovered.
Results depend only on the matrix, strand, trial count and seed, never on --threads.
""",
        )
        simulate_parser.add_argument("--trials", type=positive_int, help="Number of trials")
        simulate_parser.add_argument("--seed", type=int, help="Master seed (echoed in the report)")
        simulate_parser.add_argument(
            "--max-draws", type=positive_int, help="Per-trial draw limit (default: 10000000)"
        )
        simulate_parser.add_argument(
            "--no-compare",
            action="store_true",
            help="Skip z-scores against the exact distribution",
        )

    def _add_limit_command(self, subparsers, parents) -> None:
        limit_parser = subparsers.add_parser(
            "limit",
            parents=parents,
            help="Asymptotic E/k of the rate-1/2 construction",
            description="The limit (8 sqrt(3) pi - 18)/27 and the earlier published upper bound.",
        )
        limit_parser.add_argument(
            "--kmax", type=int, help="Also list l_k = E/k for k = 3..kmax"
        )
        limit_parser.add_argument(
            "--dps", type=positive_int, default=30, help="Significant digits (default: 30)"
        )
        limit_parser.add_argument(
            "--series-terms",
            type=positive_int,
            help="Also give the exact partial sum of the series form",
        )

    def _add_quasiarc_command(self, subparsers, parents) -> None:
        quasiarc_parser = subparsers.add_parser(
            "quasiarc",
            parents=parents,
            help="Expectation of the balanced quasi-arc codes",
            description="Finite formula with --x and --y, asymptotic formula with --eps.",
        )
        quasiarc_parser.add_argument("--x", type=int, help="Design parameter x")
        quasiarc_parser.add_argument("--y", type=int, help="Design parameter y")
        quasiarc_parser.add_argument("--eps", type=rational_arg, help="Ratio y/x of the limit")

    def _add_optimize_epsilon_command(self, subparsers, parents) -> None:
        optimize_parser = subparsers.add_parser(
            "optimize-epsilon",
            parents=parents,
            help="Best ratio y/x of the quasi-arc construction",
            description="Exact bisection of the derivative numerator on [0, 4].",
        )
        optimize_parser.add_argument(
            "--tol",
            type=rational_arg,
            default=Fraction(1, 10**10),
            help="Final bracket width (default: 1e-10)",
        )

    def _add_reproduce_command(self, subparsers, parents) -> None:
        reproduce_parser = subparsers.add_parser(
            "reproduce",
            parents=parents,
            help="Recompute the published tables and check them",
            description="""
Recompute a published artifact and compare every printed cell.
Exits with code 3 when any cell deviates beyond the tolerance.
""",
        )
        reproduce_parser.add_argument("target", choices=REPRODUCE_TARGETS, help="Artifact")
        reproduce_parser.add_argument(
            "--tolerance", type=rational_arg, help="Allowed deviation (default: 0.0005)"
        )
