"""
Monte Carlo estimation of the retrieval time.

Every trial owns a Philox stream keyed by the master seed with the trial index
in the top word of the 256-bit counter, and column indices are raw 64-bit
outputs reduced modulo n. Trials are grouped into fixed-size chunks whose
histograms are merged by integer addition, so a report depends only on the
matrix, the strand, the trial count and the seed.
"""

from __future__ import annotations

import logging
import math
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor, as_completed
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from .constants import LOGGER_NAME
from .errors import SimulationError
from .matrix import EliminationState, GeneratorMatrix
from .models import AlphaProfile, EmpiricalReport, SimConfig
from .moments import central_moments, moment_report, pmf
from .signal_handler import get_cancellation_manager

__all__ = [
    "CHUNK_TRIALS",
    "MonteCarloSimulator",
    "compare_with_exact",
    "estimate",
    "sample_tau",
    "trial_stream",
]

CHUNK_TRIALS = 10_000
_BATCH = 64


def trial_stream(master_seed: int, trial_index: int) -> np.random.Philox:
    """Independent stream of trial ``trial_index`` under ``master_seed``."""
    return np.random.Philox(key=master_seed, counter=trial_index << 192)


def sample_tau(
    matrix: GeneratorMatrix,
    strand: int,
    stream: np.random.Philox,
    max_draws: int = 10_000_000,
) -> int:
    """Number of uniform column draws until e_strand is spanned."""
    n = matrix.n
    state = EliminationState.for_matrix(matrix, strand)
    seen = set()
    draws = 0
    while draws < max_draws:
        batch = stream.random_raw(min(_BATCH, max_draws - draws)) % np.uint64(n)
        for column in batch.tolist():
            draws += 1
            if column in seen:
                continue
            seen.add(column)
            if state.insert(column):
                return draws
    raise SimulationError(
        f"strand {strand} not recovered after {max_draws} draws; is the matrix of full rank?"
    )


def _run_chunk(
    matrix: GeneratorMatrix, strand: int, seed: int, start: int, stop: int, max_draws: int
) -> Dict[int, int]:
    histogram: Counter = Counter()
    for trial in range(start, stop):
        histogram[sample_tau(matrix, strand, trial_stream(seed, trial), max_draws)] += 1
    return dict(histogram)


def _summarise(histogram: Dict[int, int], trials: int, seed: int) -> EmpiricalReport:
    """Sample moments from exact power sums; the variance uses N - 1."""
    sums = {p: sum(r**p * c for r, c in histogram.items()) for p in range(1, 9)}
    raw = {p: Fraction(sums[p], trials) for p in range(1, 9)}
    mean = raw[1]
    spread = Fraction(sums[2]) - Fraction(sums[1] ** 2, trials)
    sample_variance = spread / (trials - 1) if trials > 1 else Fraction(0)

    def se(value: Fraction) -> float:
        return math.sqrt(max(float(value), 0.0) / trials)

    fourth_central = raw[4] - 4 * mean * raw[3] + 6 * mean**2 * raw[2] - 3 * mean**4
    standard_errors = {
        "mean": se(sample_variance),
        "variance": se(fourth_central - sample_variance**2),
    }
    for p in range(1, 5):
        standard_errors[f"moment_{p}"] = se(raw[2 * p] - raw[p] ** 2)
    pmf_errors = {
        r: se(Fraction(c, trials) * (1 - Fraction(c, trials))) for r, c in histogram.items()
    }
    return EmpiricalReport(
        trials=trials,
        seed=seed,
        histogram=dict(sorted(histogram.items())),
        mean=float(mean),
        raw_moments={p: float(raw[p]) for p in range(1, 5)},
        variance=float(sample_variance),
        standard_errors=standard_errors,
        pmf_standard_errors=pmf_errors,
    )


class MonteCarloSimulator:
    """Runs the trials of one (matrix, strand, config) triple, optionally across processes."""

    def __init__(
        self,
        matrix: GeneratorMatrix,
        strand: int,
        config: SimConfig,
        logger: Optional[logging.Logger] = None,
    ) -> None:
        config.validate(matrix.n)
        EliminationState.for_matrix(matrix, strand)
        self.matrix = matrix
        self.strand = strand
        self.config = config
        self.logger = logger or logging.getLogger(LOGGER_NAME)

    def chunks(self) -> List[Tuple[int, int]]:
        trials = self.config.trials
        starts = range(0, trials, CHUNK_TRIALS)
        return [(start, min(start + CHUNK_TRIALS, trials)) for start in starts]

    def estimate(self) -> EmpiricalReport:
        config = self.config
        cancellation = get_cancellation_manager()
        started = time.perf_counter()
        self.logger.info(
            "Simulating %d trials for strand %d (seed %d, %d workers)",
            config.trials,
            self.strand,
            config.master_seed,
            config.parallelism,
        )
        merged: Counter = Counter()
        args: Tuple[Any, ...] = (self.matrix, self.strand, config.master_seed)
        chunks = self.chunks()
        if config.parallelism <= 1 or len(chunks) == 1:
            for start, stop in chunks:
                cancellation.checkpoint("simulation")
                merged.update(_run_chunk(*args, start, stop, config.max_draws))
                self.logger.debug("Trials %d..%d done", start, stop)
        else:
            with ProcessPoolExecutor(max_workers=config.parallelism) as executor:
                futures = [
                    executor.submit(_run_chunk, *args, start, stop, config.max_draws)
                    for start, stop in chunks
                ]
                for done, future in enumerate(as_completed(futures), start=1):
                    merged.update(future.result())
                    self.logger.debug("Chunk %d of %d done", done, len(chunks))
                    if cancellation.is_cancelled():
                        for pending in futures:
                            pending.cancel()
                        cancellation.checkpoint("simulation")
        report = _summarise(dict(merged), config.trials, config.master_seed)
        self.logger.info("Simulation finished in %.2fs", time.perf_counter() - started)
        return report


def estimate(matrix: GeneratorMatrix, strand: int, config: SimConfig) -> EmpiricalReport:
    return MonteCarloSimulator(matrix, strand, config).estimate()


def compare_with_exact(report: EmpiricalReport, profile: AlphaProfile) -> Dict[str, Any]:
    """z-scores of the sample mean, variance and pmf against the exact distribution."""
    exact = moment_report(profile, powers=(1, 2, 3, 4))
    central = central_moments(exact)
    trials = report.trials
    mean_se = math.sqrt(float(exact.variance) / trials)
    variance_se = math.sqrt(max(float(central[4] - exact.variance**2), 0.0) / trials)

    def z(observed: float, expected: Fraction, se: float) -> float:
        if se == 0.0:
            return 0.0 if observed == float(expected) else math.inf
        return (observed - float(expected)) / se

    pmf_z = {}
    for r in range(1, max(report.histogram, default=0) + 1):
        expected = pmf(profile, r)
        observed = report.histogram.get(r, 0) / trials
        pmf_z[r] = z(observed, expected, math.sqrt(float(expected * (1 - expected)) / trials))
    scores = {
        "mean": z(report.mean, exact.moments[1], mean_se),
        "variance": z(report.variance, exact.variance, variance_se),
    }
    worst = max([abs(v) for v in scores.values()] + [abs(v) for v in pmf_z.values()])
    return {**scores, "pmf": pmf_z, "max_abs_z": worst}
