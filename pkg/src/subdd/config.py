"""Configuration management for subdd."""

import json
import os
import re
from pathlib import Path
from typing import Any, ClassVar

from .logger import error, warn

INTEGER_BACKENDS = ("exact", "int64")
ADJACENCY_TESTS = ("halfgraph", "combinatorial", "algebraic")


class SubddConfig:
    """Configuration manager for subdd following the XDG Base Directory Specification."""

    DEFAULTS: ClassVar[dict[str, Any]] = {
        "threads": 0,  # 0 = all available cores
        "integerBackend": "exact",  # "exact" (Python ints) or "int64" (checked)
        "adjacencyTest": "halfgraph",
        "defaultOrder": "topt",
        "maxRays": 0,  # 0 = unlimited
        "maxProbes": 0,
        "maxWeight": 0,
        "neighborDepth": 1,
        "incidenceCheckRate": 0.01,  # fraction of rays rechecked after each DD step
        "saveRunManifests": True,
        "manifestLocation": "~/.config/subdd/runs",
    }

    # Budget limits that may be overridden from the environment
    ENV_OVERRIDES: ClassVar[dict[str, str]] = {
        "SUBDD_MAX_RAYS": "maxRays",
        "SUBDD_MAX_PROBES": "maxProbes",
        "SUBDD_MAX_WEIGHT": "maxWeight",
        "SUBDD_THREADS": "threads",
    }

    def __init__(self):
        """Initialize configuration with defaults, the user config file and the environment."""
        self.config = self.DEFAULTS.copy()
        self._load_config()
        self._apply_env_overrides()

    def _get_config_path(self) -> Path:
        """Return $XDG_CONFIG_HOME/subdd/subdd.json, falling back to ~/.config/subdd."""
        xdg_config_home = os.environ.get("XDG_CONFIG_HOME")
        if xdg_config_home:
            config_dir = Path(xdg_config_home) / "subdd"
        else:
            config_dir = Path.home() / ".config" / "subdd"
        return config_dir / "subdd.json"

    def _expand_vars(self, value: str) -> str:
        """Expand ${VAR} references to environment variables; unknown names stay literal."""
        if isinstance(value, str):

            def replacer(match):
                var_name = match.group(1)
                return os.environ.get(var_name, match.group(0))

            return re.sub(r"\$\{(\w+)\}", replacer, value)
        return value

    def _load_config(self):
        """Merge the user config file over the defaults.

        Unknown keys are ignored with a warning; a file that cannot be read or parsed
        leaves the defaults in place.
        """
        config_path = self._get_config_path()
        if not config_path.exists():
            return

        try:
            user_config = json.loads(config_path.read_text())
        except json.JSONDecodeError as e:
            error(f"invalid JSON in config file {config_path}: {e}")
            warn("using default configuration")
            return
        except OSError as e:
            warn(f"could not load config from {config_path}: {e}")
            return

        if not isinstance(user_config, dict):
            warn(f"{config_path} does not hold a JSON object (ignored)")
            return
        for key in sorted(set(user_config) - set(self.DEFAULTS)):
            warn(f"unknown config key '{key}' in {config_path} (ignored)")
        self.config.update(
            (key, self._expand_vars(value))
            for key, value in user_config.items()
            if key in self.DEFAULTS
        )

    def _apply_env_overrides(self):
        """Apply integer budget overrides such as SUBDD_MAX_RAYS=500000."""
        for env_name, key in self.ENV_OVERRIDES.items():
            raw = os.environ.get(env_name, "")
            if not raw:
                continue
            try:
                self.config[key] = int(raw)
            except ValueError:
                warn(f"{env_name}={raw!r} is not an integer (ignored)")

    def get(self, key: str, default: Any = None) -> Any:
        return self.config.get(key, default)

    def get_config_path(self) -> Path:
        """Get the path to the config file (public accessor)."""
        return self._get_config_path()


def effective_threads(value: int | None) -> int:
    """Resolve a thread setting: 0 or None means every available core."""
    if value:
        return max(1, int(value))
    return os.cpu_count() or 1


def budget(value: int | None) -> int | None:
    """Translate the config convention (0 = unlimited) into None."""
    if not value:
        return None
    return int(value)


# Singleton instance
_config = None


def get_config() -> SubddConfig:
    """Return the process-wide SubddConfig, loading it on first use."""
    global _config
    if _config is None:
        _config = SubddConfig()
    return _config
