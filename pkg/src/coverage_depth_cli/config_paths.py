"""
Platform paths for configuration, environment and log files.

- Linux/Mac: ~/.config/coverage-cli/ for settings, ~/.cache/coverage-cli/logs/ for logs
- Windows: %APPDATA%/coverage-cli/ and %LOCALAPPDATA%/coverage-cli/logs/
"""

from __future__ import annotations

import os
import sys
from datetime import datetime, timedelta
from pathlib import Path
from typing import List, Optional

from .constants import CONFIG_DIR_NAME, LOG_FILE_PREFIX


class ConfigPathManager:
    """
    Resolves where settings are read from and logs are written to.

    Lookup order for both ``config.json`` and ``.env``: an explicit path, the
    working directory, then the per-user configuration directory.
    """

    def __init__(self) -> None:
        self._user_config_dir: Optional[Path] = None

    def get_user_config_dir(self) -> Path:
        """
        Per-user configuration directory, created on first use.

        Returns:
            ``$XDG_CONFIG_HOME/coverage-cli`` (``~/.config/coverage-cli`` when unset)
            on Linux/Mac, ``%APPDATA%/coverage-cli`` on Windows
        """
        if self._user_config_dir is not None:
            return self._user_config_dir
        if sys.platform == "win32":
            base = os.environ.get("APPDATA") or os.environ.get("USERPROFILE", str(Path.home()))
            config_dir = Path(base) / CONFIG_DIR_NAME
        else:
            xdg_config = os.environ.get("XDG_CONFIG_HOME")
            base_dir = Path(xdg_config) if xdg_config else Path.home() / ".config"
            config_dir = base_dir / CONFIG_DIR_NAME
        config_dir.mkdir(parents=True, exist_ok=True)
        self._user_config_dir = config_dir
        return config_dir

    def get_user_config_file(self) -> Path:
        """Per-user ``config.json``; may not exist."""
        return self.get_user_config_dir() / "config.json"

    def get_user_env_file(self) -> Path:
        """Per-user ``.env``; may not exist."""
        return self.get_user_config_dir() / ".env"

    def get_local_config_file(self) -> Path:
        """``config.json`` in the working directory."""
        return Path.cwd() / "config.json"

    def get_local_env_file(self) -> Path:
        """``.env`` in the working directory."""
        return Path.cwd() / ".env"

    def candidate_config_files(self) -> List[Path]:
        return [self.get_local_config_file(), self.get_user_config_file()]

    def find_config_file(self, config_arg: Optional[str] = None) -> Optional[Path]:
        """
        Locate the active configuration file.

        Priority:
            1. ``config_arg`` (``--config``), returned only if it exists
            2. ./config.json
            3. the per-user config.json

        Args:
            config_arg: Path given on the command line, if any

        Returns:
            The file to load, or None when the embedded defaults apply
        """
        if config_arg:
            explicit = Path(config_arg)
            return explicit if explicit.exists() else None
        return next((path for path in self.candidate_config_files() if path.exists()), None)

    def find_env_file(self) -> Optional[Path]:
        """
        Locate the ``.env`` file loaded at start-up.

        Returns:
            ./.env if present, else the per-user .env if present, else None
        """
        for path in (self.get_local_env_file(), self.get_user_env_file()):
            if path.exists():
                return path
        return None

    def get_log_dir(self) -> Path:
        """
        Directory for run logs, created on first use.

        Returns:
            ``$XDG_CACHE_HOME/coverage-cli/logs`` (``~/.cache/...`` when unset) on
            Linux/Mac, ``%LOCALAPPDATA%/coverage-cli/logs`` (or ``%TEMP%``) on Windows
        """
        if sys.platform == "win32":
            base = os.environ.get("LOCALAPPDATA") or os.environ.get(
                "TEMP", str(Path.home() / "AppData" / "Local")
            )
            log_dir = Path(base) / CONFIG_DIR_NAME / "logs"
        else:
            xdg_cache = os.environ.get("XDG_CACHE_HOME")
            cache_dir = Path(xdg_cache) if xdg_cache else Path.home() / ".cache"
            log_dir = cache_dir / CONFIG_DIR_NAME / "logs"
        log_dir.mkdir(parents=True, exist_ok=True)
        return log_dir

    def _log_files(self) -> List[Path]:
        return list(self.get_log_dir().glob(f"{LOG_FILE_PREFIX}_*.log"))

    def cleanup_old_logs(self, days: int = 30) -> int:
        """
        Delete run logs older than ``days``.

        Only files matching the run-log name pattern are considered; files that
        vanish or cannot be inspected are skipped.

        Args:
            days: Age threshold in days (default 30)

        Returns:
            Number of log files removed
        """
        cutoff = datetime.now() - timedelta(days=days)
        removed = 0
        for log_file in self._log_files():
            try:
                if datetime.fromtimestamp(log_file.stat().st_mtime) < cutoff:
                    log_file.unlink()
                    removed += 1
            except (OSError, ValueError):
                continue
        return removed
