"""
Command routing for the coverage-depth CLI.

Routes CLI commands to handlers that resolve the generator matrix, call the
exact engine, the closed forms or the simulator, and return a ``Report`` for
the CLI to emit.
"""

from __future__ import annotations

import argparse
import logging
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import mpmath
import pandas as pd

from .config import ConfigurationManager
from .constants import LOGGER_NAME
from .errors import PreconditionError
from .families import (
    family_generator,
    family_profile,
    geometric_raw_moment,
    hamming_xi_closed,
    mds_pmf_closed,
    mds_variance_closed,
)
from .matrix import GeneratorMatrix
from .matrix_file import parse_matrix_file, write_matrix_file
from .models import AlphaProfile, FamilySpec, PmfTable, QuasiArcParams, Report, SimConfig
from .moments import central_moments, moment_report, pmf_table, second_moment_closed
from .quasi_arc import quasiarc_expectation, quasiarc_limit, quasiarc_optimize
from .ratehalf import (
    PRIOR_BOUND,
    ratehalf_expectation,
    ratehalf_limit,
    ratehalf_limit_series,
    ratehalf_ratios,
)
from .recovery import (
    alpha_bruteforce,
    alpha_from_xi,
    code_expectation,
    minimal_recovery_sets,
    xi_from_minimal,
)
from .reproduce import ReproductionRunner
from .simulate import MonteCarloSimulator, compare_with_exact
from .user_output import UserOutput


def _to_mpf(value: Fraction) -> mpmath.mpf:
    return mpmath.mpf(value.numerator) / value.denominator


class CodeSource:
    """The generator matrix of one invocation and how it was obtained."""

    def __init__(self, matrix: GeneratorMatrix, family: Optional[FamilySpec], origin: str):
        self.matrix = matrix
        self.family = family
        self.origin = origin

    def describe(self) -> Dict[str, Any]:
        described: Dict[str, Any] = {
            "source": self.origin,
            "field": self.matrix.spec.describe(),
            "n": self.matrix.n,
            "k": self.matrix.k,
        }
        if self.family is not None:
            described["family"] = self.family.to_dict()
            described["label"] = self.family.label()
        return described


class CommandRouter:
    """Routes CLI commands to appropriate handlers."""

    def __init__(
        self,
        config: ConfigurationManager,
        logger: Optional[logging.Logger] = None,
        output: Optional[UserOutput] = None,
    ):
        self._config = config
        self._logger = logger or logging.getLogger(LOGGER_NAME)
        self._output = output or UserOutput(quiet=True)

    def route(self, command: str, args: argparse.Namespace) -> Report:
        """
        Route command to appropriate handler.

        Raises:
            ValueError: If command is not recognized
        """
        handlers = {
            "alpha": self.handle_alpha,
            "moments": self.handle_moments,
            "pmf": self.handle_pmf,
            "simulate": self.handle_simulate,
            "limit": self.handle_limit,
            "quasiarc": self.handle_quasiarc,
            "optimize-epsilon": self.handle_optimize_epsilon,
            "reproduce": self.handle_reproduce,
        }

        handler = handlers.get(command)
        if handler is None:
            raise ValueError(f"Unknown command: {command}")
        return handler(args)

    # ------------------------------------------------------------------ Helpers
    def _threads(self, args: argparse.Namespace) -> int:
        threads = getattr(args, "threads", None)
        return threads if threads is not None else self._config.default_threads()

    def _resolve_source(self, args: argparse.Namespace) -> CodeSource:
        if args.file:
            matrix = parse_matrix_file(args.file)
            source = CodeSource(matrix, None, str(args.file))
        else:
            spec = FamilySpec(args.family, q=args.q, n=args.n, k=args.k, m=args.m)
            spec.validate()
            source = CodeSource(family_generator(spec), spec, f"family:{spec.kind}")
        matrix = source.matrix
        self._logger.info("Using %s (n = %d, k = %d)", source.origin, matrix.n, matrix.k)
        if getattr(args, "save_matrix", None):
            path = write_matrix_file(source.matrix, args.save_matrix)
            self._output.info(f"Generator matrix written to {path}", tag="SAVED")
        return source

    def _strands(self, args: argparse.Namespace, matrix: GeneratorMatrix) -> List[int]:
        if args.strand is None:
            return list(range(1, matrix.k + 1))
        if args.strand > matrix.k:
            raise PreconditionError(f"strand index {args.strand} outside 1..{matrix.k}")
        return [args.strand]

    def _profiles(
        self, args: argparse.Namespace, source: CodeSource, method: str = "auto"
    ) -> Tuple[Dict[int, AlphaProfile], Dict[str, Any]]:
        """
        Alpha profile per requested strand plus provenance tags.

        Families use their closed form unless ``bruteforce`` is requested; when
        every strand is requested and the code is short enough, the closed form
        is also checked against enumeration on each strand.
        """
        matrix = source.matrix
        strands = self._strands(args, matrix)
        workers = self._threads(args)
        cap = self._config.bruteforce_max_columns
        if method == "closed" and source.family is None:
            raise PreconditionError("--method closed requires a --family preset")

        if source.family is not None and method != "bruteforce":
            closed = family_profile(source.family)
            provenance: Dict[str, Any] = {"alpha": "closed-form"}
            check_cap = self._config.strand_check_max_columns
            if args.strand is None and matrix.n <= check_cap:
                for strand in strands:
                    if alpha_bruteforce(matrix, strand, cap, workers).alpha != closed.alpha:
                        raise PreconditionError(
                            f"closed-form profile does not hold for strand {strand} of this matrix"
                        )
                provenance["strand_check"] = f"enumerated strands 1..{matrix.k}"
            elif args.strand is None:
                provenance["strand_check"] = f"skipped (n = {matrix.n} > {check_cap})"
            return {i: closed.with_strand(i) for i in strands}, provenance

        profiles = {i: alpha_bruteforce(matrix, i, cap, workers) for i in strands}
        return profiles, {"alpha": "bruteforce"}

    # ----------------------------------------------------------------- Commands
    def handle_alpha(self, args: argparse.Namespace) -> Report:
        source = self._resolve_source(args)
        profiles, provenance = self._profiles(args, source, args.method)
        body: Dict[str, Any] = {"profiles": [p.to_dict() for p in profiles.values()]}
        table = pd.DataFrame({"s": list(range(source.matrix.n + 1))})
        for strand, profile in profiles.items():
            table[f"alpha_{strand}"] = [str(a) for a in profile.alpha]

        if args.minimal:
            body["minimal"] = self._minimal_census(source, list(profiles))
            provenance["xi"] = "union census of minimal recovery sets"
        return Report(
            command="alpha",
            inputs=source.describe(),
            body=body,
            tables={"alpha": table},
            provenance=provenance,
        )

    def _minimal_census(self, source: CodeSource, strands: List[int]) -> List[Dict[str, Any]]:
        matrix = source.matrix
        results = []
        for strand in strands:
            sets = minimal_recovery_sets(matrix, strand, self._config.bruteforce_max_columns)
            xi = xi_from_minimal(sets, self._config.xi_max_sets)
            rebuilt = alpha_from_xi(xi, matrix.n, strand)
            entry: Dict[str, Any] = {
                "strand": strand,
                "minimal_sets": [list(members) for members in sets],
                "xi": xi.to_dict(),
                "alpha_from_xi": [str(a) for a in rebuilt.alpha],
            }
            family = source.family
            if family is not None and family.kind == "hamming":
                closed = hamming_xi_closed(int(family.q), int(family.m))  # type: ignore[arg-type]
                entry["xi_closed_form_matches"] = dict(closed.counts) == dict(xi.counts)
            results.append(entry)
        return results

    def handle_moments(self, args: argparse.Namespace) -> Report:
        source = self._resolve_source(args)
        profiles, provenance = self._profiles(args, source)
        eps = args.eps if args.eps is not None else self._config.tailsum_epsilon
        powers = tuple(range(1, args.max_power + 1))

        reports = {}
        rows = []
        for strand, profile in profiles.items():
            report = moment_report(profile, powers=powers, method=args.method, eps=eps)
            reports[strand] = report
            for p, value in sorted(report.moments.items()):
                rows.append(
                    {
                        "strand": strand,
                        "p": p,
                        "num": str(value.numerator),
                        "den": str(value.denominator),
                    }
                )

        first = next(iter(profiles.values()))
        body: Dict[str, Any] = {
            "moments": [r.to_dict(self._precision(args)) for r in reports.values()],
            "central_moments": {str(i): central_moments(r) for i, r in reports.items()},
            "second_moment_closed": second_moment_closed(first),
        }
        if args.strand is None:
            worst, argmax = code_expectation({i: r.expectation for i, r in reports.items()})
            body["code_expectation"] = {"value": worst, "strands": list(argmax)}
        closed = self._closed_form_moments(source.family)
        if closed:
            body["closed_forms"] = closed
        provenance["moments"] = args.method
        return Report(
            command="moments",
            inputs={**source.describe(), "method": args.method, "eps": eps, "powers": list(powers)},
            body=body,
            tables={"moments": pd.DataFrame(rows)},
            provenance=provenance,
        )

    def _closed_form_moments(self, family: Optional[FamilySpec]) -> Dict[str, Any]:
        """Family-specific closed forms echoed next to the generic engine's values."""
        if family is None:
            return {}
        if family.kind == "mds":
            n, k = int(family.n), int(family.k)  # type: ignore[arg-type]
            return {"variance": mds_variance_closed(n, k)}
        if family.kind == "identity":
            n = int(family.n)  # type: ignore[arg-type]
            return {f"geometric_moment_{p}": geometric_raw_moment(n, p) for p in range(1, 5)}
        if family.kind == "ratehalf":
            k = int(family.k)  # type: ignore[arg-type]
            return {"expectation_recurrence": ratehalf_expectation(k)}
        return {}

    def _precision(self, args: argparse.Namespace) -> int:
        return args.precision if args.precision is not None else self._config.precision

    def handle_pmf(self, args: argparse.Namespace) -> Report:
        source = self._resolve_source(args)
        profiles, provenance = self._profiles(args, source)
        rmax = args.rmax if args.rmax is not None else self._config.pmf_rmax
        precision = self._precision(args)

        tables: Dict[str, pd.DataFrame] = {}
        results: List[PmfTable] = []
        for strand, profile in profiles.items():
            table = pmf_table(profile, rmax)
            results.append(table)
            tables[f"pmf_strand_{strand}"] = table.to_frame(precision)
        body: Dict[str, Any] = {"pmf": results}
        family = source.family
        if family is not None and family.kind in ("mds", "identity"):
            n = int(family.n)  # type: ignore[arg-type]
            k = n if family.kind == "identity" else int(family.k)  # type: ignore[arg-type]
            body["closed_form_matches"] = all(
                mds_pmf_closed(n, k, r) == value for r, value in results[0].entries.items()
            )
        provenance["pmf"] = "alpha-weighted Stirling sums"
        return Report(
            command="pmf",
            inputs={**source.describe(), "rmax": rmax},
            body=body,
            tables=tables,
            provenance=provenance,
        )

    def handle_simulate(self, args: argparse.Namespace) -> Report:
        source = self._resolve_source(args)
        defaults = self._config.simulation_defaults()
        strand = args.strand or 1
        if strand > source.matrix.k:
            raise PreconditionError(f"strand index {strand} outside 1..{source.matrix.k}")
        config = SimConfig(
            trials=args.trials or defaults["trials"],
            master_seed=args.seed if args.seed is not None else defaults["seed"],
            max_draws=args.max_draws or defaults["max_draws"],
            parallelism=self._threads(args),
        )
        self._output.info(
            f"Simulating {config.trials} trials with seed {config.master_seed}", tag="SIMULATE"
        )
        empirical = MonteCarloSimulator(source.matrix, strand, config, self._logger).estimate()

        body: Dict[str, Any] = {"empirical": empirical}
        provenance: Dict[str, Any] = {"sampler": "Philox per trial, fixed chunking"}
        if not args.no_compare:
            exact = self._exact_for_comparison(source, strand)
            if exact is None:
                provenance["comparison"] = "skipped (no exact profile within caps)"
            else:
                body["comparison"] = compare_with_exact(empirical, exact)
                provenance["comparison"] = "exact engine"
        histogram = pd.DataFrame(
            {"r": list(empirical.histogram), "count": list(empirical.histogram.values())}
        )
        return Report(
            command="simulate",
            inputs={**source.describe(), "strand": strand, "simulation": config.to_dict()},
            body=body,
            tables={"histogram": histogram},
            provenance=provenance,
            seed=config.master_seed,
        )

    def _exact_for_comparison(self, source: CodeSource, strand: int) -> Optional[AlphaProfile]:
        if source.family is not None:
            return family_profile(source.family, strand)
        if source.matrix.n <= self._config.bruteforce_max_columns:
            return alpha_bruteforce(source.matrix, strand, self._config.bruteforce_max_columns)
        return None

    def handle_limit(self, args: argparse.Namespace) -> Report:
        with mpmath.workdps(args.dps):
            limit = ratehalf_limit(args.dps)
            prior = _to_mpf(PRIOR_BOUND)
            body: Dict[str, Any] = {
                "limit": mpmath.nstr(limit, args.dps),
                "prior_bound": PRIOR_BOUND,
                "below_prior_bound": bool(limit < prior),
                "gap_to_prior_bound": mpmath.nstr(prior - limit, 6),
            }
            tables: Dict[str, pd.DataFrame] = {}
            if args.kmax is not None:
                ratios = ratehalf_ratios(args.kmax)
                values = list(ratios.values())
                body["ratios"] = {str(k): value for k, value in ratios.items()}
                body["strictly_decreasing"] = all(a > b for a, b in zip(values, values[1:]))
                body["above_limit"] = all(_to_mpf(v) > limit for v in values)
                decimals = [mpmath.nstr(_to_mpf(v), 12) for v in values]
                tables["ratios"] = pd.DataFrame({"k": list(ratios), "ratio": decimals})
            if args.series_terms is not None:
                body["series_partial_sum"] = ratehalf_limit_series(args.series_terms)
        return Report(
            command="limit",
            inputs={"dps": args.dps, "kmax": args.kmax, "series_terms": args.series_terms},
            body=body,
            tables=tables,
            provenance={"limit": "mpmath", "ratios": "B recurrence"},
        )

    def handle_quasiarc(self, args: argparse.Namespace) -> Report:
        if args.eps is not None:
            value = quasiarc_limit(args.eps)
            return Report(
                command="quasiarc",
                inputs={"eps": args.eps},
                body={"limit": value, "ratio_to_k": value / 3},
                provenance={"formula": "asymptotic"},
            )
        if args.x is None or args.y is None:
            raise PreconditionError("quasiarc requires --x and --y, or --eps")
        params = QuasiArcParams(args.x, args.y)
        params.validate()
        value = quasiarc_expectation(params.x, params.y)
        asymptotic = quasiarc_limit(params.epsilon)
        return Report(
            command="quasiarc",
            inputs=params.to_dict(),
            body={
                "expectation": value,
                "ratio_to_k": value / params.k,
                "limit_at_ratio": asymptotic,
                "difference_to_limit": value - asymptotic,
            },
            provenance={"formula": "finite"},
        )

    def handle_optimize_epsilon(self, args: argparse.Namespace) -> Report:
        optimum = quasiarc_optimize(args.tol)
        return Report(
            command="optimize-epsilon",
            inputs={"tolerance": args.tol},
            body={"optimum": optimum},
            provenance={"root": "exact rational bisection on [0, 4]"},
        )

    def handle_reproduce(self, args: argparse.Namespace) -> Report:
        tolerance = args.tolerance if args.tolerance is not None else self._config.tolerance
        runner = ReproductionRunner(
            tolerance=Fraction(tolerance), workers=self._threads(args), logger=self._logger
        )
        report = runner.run(args.target)
        self._output.check(f"reproduce {args.target}", report.passed)
        return report
