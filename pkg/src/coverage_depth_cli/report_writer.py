"""
Report rendering and writing for the coverage-depth CLI.

JSON carries the whole document. CSV and TSV carry the report's tables, one
block per table preceded by a ``# <name>`` line; a report without tables is
flattened into a single row.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Optional, Union

import pandas as pd

from .constants import LOGGER_NAME
from .models import Report, WriteResult

__all__ = ["FORMATS", "ReportWriter", "emit"]

FORMATS = ("json", "csv", "tsv")
_SEPARATORS = {"csv": ",", "tsv": "\t"}


class ReportWriter:
    """Renders ``Report`` documents and writes them to disk."""

    def __init__(self, logger: Optional[logging.Logger] = None) -> None:
        self.logger = logger or logging.getLogger(LOGGER_NAME)

    def render(self, report: Report, fmt: str = "json", precision: int = 3) -> str:
        """
        Serialise ``report`` deterministically.

        Raises:
            ValueError: If ``fmt`` is not one of json, csv or tsv
        """
        if fmt == "json":
            return json.dumps(report.to_dict(precision), indent=2) + "\n"
        if fmt in _SEPARATORS:
            return self._render_tables(report, _SEPARATORS[fmt], precision)
        raise ValueError(f"Unsupported format '{fmt}'. Supported formats: {', '.join(FORMATS)}")

    def _render_tables(self, report: Report, sep: str, precision: int) -> str:
        if not report.tables:
            frame = pd.json_normalize(report.to_dict(precision), sep=".")
            return frame.to_csv(sep=sep, index=False, lineterminator="\n")
        blocks = []
        for name, frame in report.tables.items():
            body = frame.to_csv(sep=sep, index=False, lineterminator="\n")
            blocks.append(f"# {name}\n{body}")
        return "\n".join(blocks)

    def write(
        self,
        report: Report,
        output_file: Union[str, Path],
        fmt: Optional[str] = None,
        precision: int = 3,
    ) -> WriteResult:
        """
        Write ``report`` to ``output_file``.

        The format is inferred from the extension when ``fmt`` is None. Failures
        are reported through the returned ``WriteResult`` rather than raised.
        """
        output_path = Path(output_file)
        if fmt is None:
            fmt = output_path.suffix.lower().lstrip(".")
            if fmt not in FORMATS:
                return WriteResult(
                    success=False,
                    output_file=output_path,
                    bytes_written=0,
                    format="unknown",
                    error=f"Cannot infer format from extension '{fmt}'. Please specify format explicitly.",
                )
        try:
            text = self.render(report, fmt, precision)
            output_path.parent.mkdir(parents=True, exist_ok=True)
            data = text.encode("utf-8")
            output_path.write_bytes(data)
        except (OSError, ValueError) as exc:
            self.logger.error("Failed to write report: %s", exc)
            return WriteResult(
                success=False, output_file=output_path, bytes_written=0, format=fmt, error=str(exc)
            )
        self.logger.info("Saved %s report to %s (%d bytes)", fmt, output_path, len(data))
        return WriteResult(
            success=True, output_file=output_path, bytes_written=len(data), format=fmt
        )


def emit(report: Report, fmt: str = "json", precision: int = 3) -> str:
    """Render ``report`` as text without touching the filesystem."""
    return ReportWriter().render(report, fmt, precision)
