"""
User-facing status output for the coverage-depth CLI.

Status lines go to stderr so that stdout carries nothing but the emitted
report. Technical detail stays in the log file.
"""

from __future__ import annotations

import json
import sys
from abc import ABC, abstractmethod
from typing import Any, Optional, TextIO


class OutputFormatter(ABC):
    """Abstract base class for status formatters."""

    @abstractmethod
    def section_header(self, title: str) -> str:
        """Format a section header."""

    @abstractmethod
    def info(self, message: str, tag: Optional[str] = None) -> str:
        """Format an info message with optional tag."""

    @abstractmethod
    def warning(self, message: str) -> str:
        """Format a warning message."""

    @abstractmethod
    def error(self, message: str) -> str:
        """Format an error message."""

    @abstractmethod
    def check(self, name: str, passed: bool, detail: str = "") -> str:
        """Format the outcome of one reproduction check."""


class HumanFormatter(OutputFormatter):
    """Human-readable terminal output formatter."""

    def section_header(self, title: str) -> str:
        separator = "=" * 70
        return f"\n{separator}\n{title}\n{separator}"

    def info(self, message: str, tag: Optional[str] = None) -> str:
        if tag:
            return f"[{tag}] {message}"
        return message

    def warning(self, message: str) -> str:
        return f"[WARNING] {message}"

    def error(self, message: str) -> str:
        return f"[ERROR] {message}"

    def check(self, name: str, passed: bool, detail: str = "") -> str:
        status = "PASS" if passed else "FAIL"
        return f"[{status}] {name}" + (f" ({detail})" if detail else "")


class JsonFormatter(OutputFormatter):
    """JSON Lines status formatter for machine-readable logs of a run."""

    def _to_json(self, data: dict[str, Any]) -> str:
        return json.dumps(data, default=str)

    def section_header(self, title: str) -> str:
        return self._to_json({"type": "section_header", "title": title})

    def info(self, message: str, tag: Optional[str] = None) -> str:
        data: dict[str, Any] = {"type": "info", "message": message}
        if tag:
            data["tag"] = tag
        return self._to_json(data)

    def warning(self, message: str) -> str:
        return self._to_json({"type": "warning", "message": message})

    def error(self, message: str) -> str:
        return self._to_json({"type": "error", "message": message})

    def check(self, name: str, passed: bool, detail: str = "") -> str:
        return self._to_json({"type": "check", "name": name, "passed": passed, "detail": detail})


class UserOutput:
    """
    User-facing output orchestrator.

    Delegates formatting to the provided formatter (HumanFormatter by default)
    and writes to ``stream``, stderr unless told otherwise.
    """

    def __init__(
        self,
        formatter: Optional[OutputFormatter] = None,
        quiet: bool = False,
        stream: Optional[TextIO] = None,
    ):
        self.formatter = formatter or HumanFormatter()
        self.quiet = quiet
        self._stream = stream

    @property
    def stream(self) -> TextIO:
        # resolved lazily so pytest's capsys replacement is honoured
        return self._stream or sys.stderr

    def _print(self, message: str) -> None:
        if not self.quiet:
            print(message, file=self.stream)

    def section_header(self, title: str) -> None:
        self._print(self.formatter.section_header(title))

    def info(self, message: str, tag: Optional[str] = None) -> None:
        self._print(self.formatter.info(message, tag))

    def warning(self, message: str) -> None:
        self._print(self.formatter.warning(message))

    def error(self, message: str) -> None:
        """Errors are printed even in quiet mode."""
        print(self.formatter.error(message), file=self.stream)

    def check(self, name: str, passed: bool, detail: str = "") -> None:
        self._print(self.formatter.check(name, passed, detail))

    def blank_line(self) -> None:
        if not self.quiet:
            print(file=self.stream)
