"""Subprocess runner for the ``powerspace`` CLI.

The CLI runs as ``python -m powerspace`` with the repository root on
PYTHONPATH, so tests work from a plain checkout without an install.
"""

from __future__ import annotations

import json
import os
import subprocess
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any

REPO_ROOT = Path(__file__).resolve().parents[2]


@dataclass(frozen=True)
class CliResult:
    """Result from a CLI subprocess invocation."""

    exit_code: int
    stdout: str
    stderr: str

    @property
    def ok(self) -> bool:
        return self.exit_code == 0

    def json(self) -> Any:
        """Parse stdout, which carries exactly one JSON document."""
        return json.loads(self.stdout)


def run_cli(
    *args: str | Path,
    timeout: float = 120.0,
    env: dict[str, str] | None = None,
) -> CliResult:
    """Run a ``powerspace`` CLI command as a subprocess.

    Args:
        args: Command arguments (e.g., "order", xi_path, eta_path, "--space", poset_path).
        timeout: Subprocess timeout in seconds.
        env: Extra environment variables (e.g., {"POWERSPACE_ENUM_CAP": "3"}).

    Returns:
        CliResult with exit_code, stdout, stderr.
    """
    merged = {**os.environ, **(env or {})}
    merged.setdefault("PYTHONIOENCODING", "utf-8")
    merged["PYTHONPATH"] = os.pathsep.join(
        p for p in (str(REPO_ROOT), merged.get("PYTHONPATH", "")) if p
    )
    cmd = [sys.executable, "-m", "powerspace", *(str(a) for a in args)]
    try:
        proc = subprocess.run(
            cmd,
            capture_output=True,
            text=True,
            timeout=timeout,
            env=merged,
            encoding="utf-8",
        )
        return CliResult(exit_code=proc.returncode, stdout=proc.stdout, stderr=proc.stderr)
    except subprocess.TimeoutExpired:
        return CliResult(exit_code=-1, stdout="", stderr=f"Timeout after {timeout}s")
