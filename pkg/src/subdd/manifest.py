"""Run manifests: one JSON record per CLI run."""

import json
import subprocess
import time
from datetime import UTC, datetime
from pathlib import Path

from . import __version__
from .logger import warn


def git_describe() -> str:
    """`git describe` of the source checkout, or the package version outside one."""
    try:
        result = subprocess.run(
            ["git", "describe", "--always", "--dirty", "--tags"],
            capture_output=True,
            text=True,
            check=False,
            cwd=Path(__file__).parent,
        )
        if result.returncode == 0 and result.stdout.strip():
            return result.stdout.strip()
    except (OSError, subprocess.SubprocessError):
        pass
    return f"subdd {__version__}"


class RunManifest:
    """Records what a run did so that every number it reports can be re-derived."""

    def __init__(self, command: str, config=None):
        """Initialize a manifest.

        Args:
            command: Subcommand name
            config: Effective config dict with saveRunManifests and manifestLocation
        """
        self.enabled = config.get("saveRunManifests", True) if config else False
        folder = config.get("manifestLocation", "~/.config/subdd/runs") if config else None
        self.folder = Path(folder).expanduser() if folder else None
        self.path: Path | None = None

        self.data = {
            "command": command,
            "arguments": {},
            "n": None,
            "order": None,
            "seed": None,
            "budgets": {},
            "inputs": [],
            "outputs": [],
            "version": git_describe() if self.enabled else None,
            "start_time": time.time(),
            "start_time_iso": datetime.now(UTC).isoformat(),
            "exit_reason": None,
            "results": {},
        }

    def set_run_info(self, arguments: dict, n=None, order=None, seed=None, budgets=None):
        self.data["arguments"] = {
            k: (str(v) if isinstance(v, Path) else v)
            for k, v in arguments.items()
            if not callable(v)
        }
        self.data["n"] = n
        self.data["order"] = order
        self.data["seed"] = seed
        self.data["budgets"] = dict(budgets or {})

    def add_input(self, path) -> None:
        if path is not None and str(path) != "-":
            self.data["inputs"].append(str(path))

    def add_output(self, path) -> None:
        if path is not None and str(path) != "-":
            self.data["outputs"].append(str(path))

    def record(self, **results) -> None:
        self.data["results"].update(results)

    def target_path(self) -> Path | None:
        """<first output>.manifest.json, else a timestamped file in the manifest folder."""
        if self.data["outputs"]:
            return Path(self.data["outputs"][0] + ".manifest.json").expanduser()
        if self.folder:
            stamp = datetime.now(UTC).strftime("%Y%m%d_%H%M%S_%f")
            return self.folder / f"{self.data['command']}_{stamp}.json"
        return None

    def finalize(self, exit_reason: str) -> Path | None:
        """Stamp the end of the run and write the manifest.

        Args:
            exit_reason: 'complete', 'budget_exhausted', 'error' or 'user_interrupt'
        """
        if not self.enabled:
            return None

        self.data["exit_reason"] = exit_reason
        self.data["end_time"] = time.time()
        self.data["end_time_iso"] = datetime.now(UTC).isoformat()
        self.data["duration_seconds"] = self.data["end_time"] - self.data["start_time"]

        path = self.target_path()
        if path is None:
            return None
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "w") as f:
                json.dump(self.data, f, indent=2, default=str)
        except OSError as e:
            warn(f"Failed to write run manifest: {e}")
            return None
        self.path = path
        return path
