"""
Core data models used by the coverage-depth CLI.

The dataclasses defined in this module are containers for the domain values
that flow between the computation modules and the report layer: recovery-set
profiles, moment and mass-function tables, family and simulation parameters,
and the report document itself.

Each dataclass includes minimal helper behaviour such as validation or
serialisation where that keeps consumers concise. Exact rationals are kept as
``fractions.Fraction`` until ``to_dict`` renders them as
``{"num", "den", "approx"}`` triples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping, Optional, Tuple

import pandas as pd

from .combinat import binom
from .constants import MAX_COLUMNS
from .errors import InconsistentDataError, PreconditionError
from .field import field_for_order


def format_decimal(value: Fraction, precision: int) -> str:
    """Render ``value`` with ``precision`` decimals, correctly rounded half-to-even."""
    value = Fraction(value)
    scaled, remainder = divmod(abs(value.numerator) * 10**precision, value.denominator)
    twice = 2 * remainder
    if twice > value.denominator or (twice == value.denominator and scaled % 2 == 1):
        scaled += 1
    digits = str(scaled).rjust(precision + 1, "0")
    text = digits if precision == 0 else f"{digits[:-precision]}.{digits[-precision:]}"
    sign = "-" if value < 0 and scaled else ""
    return sign + text


def rational_to_dict(value: Fraction, precision: int) -> dict[str, str]:
    """Serialise an exact rational as numerator, denominator and rounded decimal."""
    value = Fraction(value)
    return {
        "num": str(value.numerator),
        "den": str(value.denominator),
        "approx": format_decimal(value, precision),
    }


def serialise(value: Any, precision: int) -> Any:
    """Recursively convert report payloads to JSON-friendly primitives."""
    if isinstance(value, Fraction):
        return rational_to_dict(value, precision)
    if isinstance(value, bool) or value is None or isinstance(value, (str, float)):
        return value
    if isinstance(value, int):
        return value
    if hasattr(value, "to_dict"):
        return serialise(value.to_dict(precision), precision)
    if isinstance(value, Mapping):
        return {str(key): serialise(item, precision) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [serialise(item, precision) for item in value]
    if isinstance(value, Path):
        return str(value)
    if hasattr(value, "item"):  # numpy scalar
        return value.item()
    return str(value)


@dataclass(frozen=True)
class AlphaProfile:
    """
    Recovery-set counts alpha[s] for s = 0..n for one strand.

    ``strand`` is ``None`` for closed-form profiles that hold for every strand.
    The complement counts are derived on demand, never stored.
    """

    n: int
    alpha: Tuple[int, ...]
    strand: Optional[int] = None

    def __post_init__(self) -> None:
        values = tuple(int(a) for a in self.alpha)
        if len(values) != self.n + 1:
            raise InconsistentDataError(
                f"alpha profile for n = {self.n} needs {self.n + 1} entries, got {len(values)}"
            )
        object.__setattr__(self, "alpha", values)

    def __getitem__(self, s: int) -> int:
        return self.alpha[s]

    def complement(self, s: int) -> int:
        """Number of s-subsets that are not recovery sets."""
        return binom(self.n, s) - self.alpha[s]

    @property
    def complements(self) -> Tuple[int, ...]:
        return tuple(self.complement(s) for s in range(self.n + 1))

    def superset_growth_holds(self) -> bool:
        n, a = self.n, self.alpha
        return all((s + 1) * a[s + 1] >= (n - s) * a[s] for s in range(n))

    def check_invariants(self) -> None:
        """Raise ``InconsistentDataError`` unless the profile is realisable by a rank-k matrix."""
        if self.alpha[0] != 0:
            raise InconsistentDataError("alpha[0] must be 0: the empty span misses e_i")
        if self.alpha[self.n] != 1:
            raise InconsistentDataError("alpha[n] must be 1 for a rank-k matrix")
        for s, value in enumerate(self.alpha):
            if not 0 <= value <= binom(self.n, s):
                raise InconsistentDataError(f"alpha[{s}] = {value} outside [0, C({self.n},{s})]")
        if not self.superset_growth_holds():
            raise InconsistentDataError("alpha profile violates the superset-growth inequality")

    def with_strand(self, strand: Optional[int]) -> AlphaProfile:
        return AlphaProfile(self.n, self.alpha, strand)

    def to_dict(self, precision: int = 3) -> dict[str, Any]:  # noqa: ARG002
        return {
            "n": self.n,
            "strand": self.strand,
            "alpha": [str(a) for a in self.alpha],
            "alpha_complement": [str(a) for a in self.complements],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> AlphaProfile:
        return cls(
            n=int(data["n"]),
            alpha=tuple(int(a) for a in data["alpha"]),
            strand=data.get("strand"),
        )


@dataclass(frozen=True)
class XiTable:
    """Census of unions of minimal recovery sets: counts[(j, s)]."""

    size: int
    counts: Mapping[Tuple[int, int], int] = field(default_factory=dict)

    def get(self, j: int, s: int) -> int:
        return int(self.counts.get((j, s), 0))

    def row_total(self, j: int) -> int:
        return sum(c for (jj, _), c in self.counts.items() if jj == j)

    def check_invariants(self) -> None:
        for j in range(1, self.size + 1):
            total = self.row_total(j)
            if total != binom(self.size, j):
                raise InconsistentDataError(
                    f"xi row j = {j} sums to {total}, expected C({self.size},{j})"
                )

    def to_dict(self, precision: int = 3) -> dict[str, Any]:  # noqa: ARG002
        return {
            "L": self.size,
            "xi": [
                {"j": j, "s": s, "count": str(count)}
                for (j, s), count in sorted(self.counts.items())
                if count
            ],
        }


@dataclass
class MomentReport:
    """
    Raw moments E[tau^p] with their method tags and any tail-sum remainders.

    ``variance`` is always ``moments[2] - moments[1]**2``. In tail-sum mode it is
    therefore a truncated value too, and ``variance_bound`` bounds its distance
    from the exact variance.
    """

    n: int
    strand: Optional[int]
    moments: dict[int, Fraction]
    variance: Fraction
    methods: dict[int, str] = field(default_factory=dict)
    tail_bounds: dict[int, Fraction] = field(default_factory=dict)
    variance_bound: Optional[Fraction] = None

    @property
    def expectation(self) -> Fraction:
        return self.moments[1]

    def to_dict(self, precision: int = 3) -> dict[str, Any]:
        return {
            "n": self.n,
            "strand": self.strand,
            "moments": {
                str(p): {
                    "value": rational_to_dict(value, precision),
                    "method": self.methods.get(p, "closed-form"),
                    **(
                        {"tail_bound": rational_to_dict(self.tail_bounds[p], precision)}
                        if p in self.tail_bounds
                        else {}
                    ),
                }
                for p, value in sorted(self.moments.items())
            },
            "variance": rational_to_dict(self.variance, precision),
            **(
                {"variance_bound": rational_to_dict(self.variance_bound, precision)}
                if self.variance_bound is not None
                else {}
            ),
        }


@dataclass
class PmfTable:
    """P[tau = r] for r = 1..rmax together with the exact tail mass P[tau > rmax]."""

    n: int
    strand: Optional[int]
    entries: dict[int, Fraction]
    tail: Fraction

    @property
    def rmax(self) -> int:
        return max(self.entries) if self.entries else 0

    def total(self) -> Fraction:
        return sum(self.entries.values(), Fraction(0)) + self.tail

    def to_frame(self, precision: int = 3) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "r": list(self.entries),
                "num": [str(v.numerator) for v in self.entries.values()],
                "den": [str(v.denominator) for v in self.entries.values()],
                "pmf": [format_decimal(v, precision) for v in self.entries.values()],
            }
        )

    def to_dict(self, precision: int = 3) -> dict[str, Any]:
        return {
            "n": self.n,
            "strand": self.strand,
            "pmf": {str(r): rational_to_dict(v, precision) for r, v in self.entries.items()},
            "tail": rational_to_dict(self.tail, precision),
        }


FAMILY_KINDS = ("identity", "mds", "hamming", "simplex", "ratehalf")


@dataclass(frozen=True)
class FamilySpec:
    """A named code family and its parameters."""

    kind: str
    q: Optional[int] = None
    n: Optional[int] = None
    k: Optional[int] = None
    m: Optional[int] = None

    def _require(self, **values: Optional[int]) -> None:
        missing = [name for name, value in values.items() if value is None]
        if missing:
            flags = ", ".join(f"--{name}" for name in missing)
            raise PreconditionError(f"family '{self.kind}' requires {flags}")

    def validate(self) -> None:
        """Raise ``PreconditionError`` naming the violated family precondition."""
        if self.kind not in FAMILY_KINDS:
            raise PreconditionError(
                f"unknown family '{self.kind}'; expected one of {', '.join(FAMILY_KINDS)}"
            )
        if self.kind == "identity":
            self._require(n=self.n)
        elif self.kind == "mds":
            self._require(q=self.q, n=self.n, k=self.k)
            field_for_order(int(self.q))  # type: ignore[arg-type]
            if not 1 <= self.k <= self.n <= self.q:  # type: ignore[operator]
                raise PreconditionError(
                    f"mds requires 1 <= k <= n <= q, got q = {self.q}, n = {self.n}, k = {self.k}"
                )
        elif self.kind == "hamming":
            self._require(q=self.q, m=self.m)
            field_for_order(int(self.q))  # type: ignore[arg-type]
            if self.m < 2:  # type: ignore[operator]
                raise PreconditionError(f"hamming requires redundancy m >= 2, got m = {self.m}")
        elif self.kind == "simplex":
            self._require(q=self.q, k=self.k)
            field_for_order(int(self.q))  # type: ignore[arg-type]
            if self.k < 2:  # type: ignore[operator]
                raise PreconditionError(f"simplex requires k >= 2, got k = {self.k}")
        elif self.kind == "ratehalf":
            self._require(k=self.k)
            if self.k < 3:  # type: ignore[operator]
                raise PreconditionError(
                    f"ratehalf requires k >= 3, got k = {self.k} "
                    "(at k = 2 the last two columns coincide)"
                )
        if self.length < 1 or self.length > MAX_COLUMNS:
            raise PreconditionError(
                f"family '{self.kind}' has length n = {self.length}, outside 1..{MAX_COLUMNS}"
            )

    @property
    def field_order(self) -> int:
        return 2 if self.kind in ("identity", "ratehalf") else int(self.q)  # type: ignore[arg-type]

    @property
    def length(self) -> int:
        if self.kind in ("identity", "mds"):
            return int(self.n)  # type: ignore[arg-type]
        if self.kind == "ratehalf":
            return 2 * int(self.k)  # type: ignore[arg-type]
        q = int(self.q)  # type: ignore[arg-type]
        r = int(self.m if self.kind == "hamming" else self.k)  # type: ignore[arg-type]
        return (q**r - 1) // (q - 1)

    @property
    def dimension(self) -> int:
        if self.kind == "identity":
            return int(self.n)  # type: ignore[arg-type]
        if self.kind == "hamming":
            return self.length - int(self.m)  # type: ignore[arg-type]
        return int(self.k)  # type: ignore[arg-type]

    def label(self) -> str:
        names = {
            "identity": "Identity",
            "mds": "MDS",
            "hamming": "Hamming",
            "simplex": "Simplex",
            "ratehalf": "Rate-1/2",
        }
        return f"{names[self.kind]} [{self.length},{self.dimension}]_{self.field_order}"

    def to_dict(self, precision: int = 3) -> dict[str, Any]:  # noqa: ARG002
        payload: dict[str, Any] = {"kind": self.kind}
        for name in ("q", "n", "k", "m"):
            value = getattr(self, name)
            if value is not None:
                payload[name] = value
        payload["length"] = self.length
        payload["dimension"] = self.dimension
        return payload


@dataclass(frozen=True)
class QuasiArcParams:
    """Balanced quasi-arc parameters: length 3x + 3y, dimension 3."""

    x: int
    y: int

    def validate(self) -> None:
        if self.x < 1:
            raise PreconditionError(f"quasi-arc requires x >= 1, got x = {self.x}")
        if self.y < 0:
            raise PreconditionError(f"quasi-arc requires y >= 0, got y = {self.y}")

    @property
    def n(self) -> int:
        return 3 * self.x + 3 * self.y

    @property
    def k(self) -> int:
        return 3

    @property
    def epsilon(self) -> Fraction:
        return Fraction(self.y, self.x)

    def to_dict(self, precision: int = 3) -> dict[str, Any]:
        return {
            "x": self.x,
            "y": self.y,
            "n": self.n,
            "k": self.k,
            "epsilon": rational_to_dict(self.epsilon, precision),
        }


@dataclass(frozen=True)
class SimConfig:
    """Monte Carlo parameters; the report is a pure function of these and the matrix."""

    trials: int
    master_seed: int
    max_draws: int = 10_000_000
    parallelism: int = 1

    def validate(self, n: Optional[int] = None) -> None:
        if self.trials < 1:
            raise PreconditionError(f"trials must be positive, got {self.trials}")
        if not 0 <= self.master_seed < 2**64:
            raise PreconditionError("seed must be a 64-bit unsigned integer")
        if self.parallelism < 1:
            raise PreconditionError(f"parallelism must be positive, got {self.parallelism}")
        if n is not None and self.max_draws < n:
            raise PreconditionError(f"max_draws = {self.max_draws} must be at least n = {n}")

    def to_dict(self, precision: int = 3) -> dict[str, Any]:  # noqa: ARG002
        return {
            "trials": self.trials,
            "seed": self.master_seed,
            "max_draws": self.max_draws,
            "parallelism": self.parallelism,
        }


@dataclass
class EmpiricalReport:
    """Sample statistics of tau over independent trials."""

    trials: int
    seed: int
    histogram: dict[int, int]
    mean: float
    raw_moments: dict[int, float]
    variance: float
    standard_errors: dict[str, float] = field(default_factory=dict)
    pmf_standard_errors: dict[int, float] = field(default_factory=dict)

    @property
    def pmf(self) -> dict[int, float]:
        return {r: count / self.trials for r, count in sorted(self.histogram.items())}

    def to_dict(self, precision: int = 3) -> dict[str, Any]:
        digits = max(precision, 6)
        return {
            "trials": self.trials,
            "seed": self.seed,
            "mean": round(self.mean, digits),
            "variance": round(self.variance, digits),
            "raw_moments": {str(p): round(v, digits) for p, v in sorted(self.raw_moments.items())},
            "standard_errors": {k: round(v, digits) for k, v in self.standard_errors.items()},
            "histogram": {str(r): c for r, c in sorted(self.histogram.items())},
            "pmf": {str(r): round(v, digits) for r, v in self.pmf.items()},
            "pmf_standard_errors": {
                str(r): round(v, digits) for r, v in sorted(self.pmf_standard_errors.items())
            },
        }


@dataclass
class Report:
    """A command's structured output document plus any tabular views."""

    command: str
    inputs: dict[str, Any] = field(default_factory=dict)
    body: dict[str, Any] = field(default_factory=dict)
    tables: dict[str, pd.DataFrame] = field(default_factory=dict)
    provenance: dict[str, Any] = field(default_factory=dict)
    version: str = ""
    seed: Optional[int] = None
    passed: bool = True

    def to_dict(self, precision: int = 3) -> dict[str, Any]:
        document: dict[str, Any] = {
            "tool": {"name": "coverage-depth-cli", "version": self.version},
            "command": self.command,
            "inputs": serialise(self.inputs, precision),
        }
        if self.seed is not None:
            document["seed"] = self.seed
        document.update(serialise(self.body, precision))
        document["provenance"] = serialise(self.provenance, precision)
        if not self.passed:
            document["status"] = "mismatch"
        return document


@dataclass
class WriteResult:
    """Result of persisting a rendered report to disk."""

    success: bool
    output_file: Path
    bytes_written: int
    format: str
    error: Optional[str] = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "success": bool(self.success),
            "output_file": str(self.output_file),
            "bytes_written": int(self.bytes_written),
            "format": self.format,
            "error": self.error,
        }
