"""
Cooperative cancellation for long enumerations and simulations.

Subset enumeration and Monte Carlo loops poll ``checkpoint()`` between
partitions and chunks. The first Ctrl+C requests a graceful stop; a second one
terminates the process.
"""

from __future__ import annotations

import logging
import signal
import sys
import threading
from typing import Any, Optional


class CancellationManager:
    """Thread-safe, process-wide cancellation flag wired to SIGINT."""

    _instance: Optional[CancellationManager] = None
    _lock = threading.Lock()

    def __new__(cls) -> CancellationManager:
        if cls._instance is None:
            with cls._lock:
                if cls._instance is None:
                    cls._instance = super().__new__(cls)
                    cls._instance._initialized = False
        return cls._instance

    def __init__(self) -> None:
        if self._initialized:
            return
        self._cancelled = False
        self._original_sigint_handler: Any = None
        self._state_lock = threading.Lock()
        self._logger: Optional[logging.Logger] = None
        self._initialized = True

    def set_logger(self, logger: Optional[logging.Logger]) -> None:
        self._logger = logger

    def is_cancelled(self) -> bool:
        with self._state_lock:
            return self._cancelled

    def cancel(self) -> None:
        with self._state_lock:
            self._cancelled = True

    def reset(self) -> None:
        with self._state_lock:
            self._cancelled = False

    def checkpoint(self, stage: str = "computation") -> None:
        """Raise ``KeyboardInterrupt`` if a stop was requested."""
        if self.is_cancelled():
            if self._logger:
                self._logger.info("Stopping %s at a cancellation checkpoint", stage)
            raise KeyboardInterrupt(f"{stage} cancelled")

    def _signal_handler(self, _signum: int, _frame: Any) -> None:
        with self._state_lock:
            if self._cancelled:
                if self._logger:
                    self._logger.warning("Second interrupt received, exiting immediately")
                print("\n[CANCELLED] Forced exit", file=sys.stderr)
                sys.exit(1)
            self._cancelled = True
        if self._logger:
            self._logger.warning("Cancellation requested, stopping at the next checkpoint")
        print(
            "\n[CANCELLED] Stopping after the current partition (Ctrl+C again to force exit)",
            file=sys.stderr,
        )

    def register_signal_handler(self) -> None:
        self._original_sigint_handler = signal.signal(signal.SIGINT, self._signal_handler)

    def unregister_signal_handler(self) -> None:
        if self._original_sigint_handler is not None:
            signal.signal(signal.SIGINT, self._original_sigint_handler)
            self._original_sigint_handler = None

    def __enter__(self) -> CancellationManager:
        self.reset()
        self.register_signal_handler()
        return self

    def __exit__(self, exc_type: Any, exc_val: Any, exc_tb: Any) -> bool:
        self.unregister_signal_handler()
        return False


_cancellation_manager = CancellationManager()


def get_cancellation_manager() -> CancellationManager:
    return _cancellation_manager
