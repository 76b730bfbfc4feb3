"""
Coverage-depth CLI package.

Exact distribution of the number of uniform strand reads needed to recover an
information strand of a linear code: recovery-set counts, moments, mass
functions, family closed forms and a reproducible Monte Carlo oracle.
"""

# Version is managed by setuptools-scm
try:
    from ._version import version as __version__
except ImportError:
    # Fallback for development installations without build
    __version__ = "0.0.0.dev0+unknown"

from .cli import main, run, setup_logging  # noqa: E402
from .errors import (  # noqa: E402
    CapExceededError,
    CoverageDepthError,
    InconsistentDataError,
    MatrixError,
    MatrixFileError,
    PreconditionError,
)
from .field import field_arith, field_make  # noqa: E402
from .matrix import GeneratorMatrix, mat_rank, span_contains  # noqa: E402
from .models import AlphaProfile, FamilySpec, MomentReport, PmfTable, Report  # noqa: E402
from .moments import expectation, moment, pmf, variance  # noqa: E402
from .recovery import alpha_bruteforce, alpha_from_beta, beta_of  # noqa: E402

__all__ = [
    "__version__",
    # Entry points
    "main",
    "run",
    "setup_logging",
    # Errors
    "CapExceededError",
    "CoverageDepthError",
    "InconsistentDataError",
    "MatrixError",
    "MatrixFileError",
    "PreconditionError",
    # Engine
    "GeneratorMatrix",
    "alpha_bruteforce",
    "alpha_from_beta",
    "beta_of",
    "expectation",
    "field_arith",
    "field_make",
    "mat_rank",
    "moment",
    "pmf",
    "span_contains",
    "variance",
    # Data models
    "AlphaProfile",
    "FamilySpec",
    "MomentReport",
    "PmfTable",
    "Report",
]
