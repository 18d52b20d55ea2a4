"""
Configuration management for morseframe.
"""
import dataclasses
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional

from .exceptions import ConfigurationError

logger = logging.getLogger(__name__)

ENV_PREFIX = "MORSEFRAME_"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass
class Config:
    """Numerical tolerances and runtime settings."""

    # Application Settings
    log_level: str = "WARNING"
    seed: int = 0

    # Polytope tolerances
    tie_tol: float = 1e-9
    tol_kkt: float = 1e-9
    membership_tol: float = 1e-9

    # Reparametrization
    inverse_tol: float = 1e-12
    merge_tol: float = 1e-12

    # Surface backend
    delta_ext: float = 0.15
    r_capture: float = 0.05
    launch_offset: float = 1e-3
    max_arc_length: float = 60.0
    newton_tol: float = 1e-10
    newton_max_iter: int = 60
    degenerate_tol: float = 1e-8

    # Internal settings
    _project_root: Optional[Path] = field(default=None, init=False, repr=False)

    def __post_init__(self) -> None:
        """Initialize derived settings."""
        self._project_root = self._find_project_root()

    @classmethod
    def from_env(cls) -> "Config":
        """Create configuration from environment variables."""
        values: Dict[str, Any] = {}
        for f in dataclasses.fields(cls):
            if not f.init:
                continue
            raw = os.getenv(ENV_PREFIX + f.name.upper())
            if raw is None:
                continue
            values[f.name] = _parse_env_value(f.name, raw, f.default)
        return cls(**values)

    @classmethod
    def from_dotenv(cls, env_file: Optional[Path] = None) -> "Config":
        """Create configuration from .env file."""
        try:
            from dotenv import load_dotenv

            if env_file:
                load_dotenv(env_file)
            else:
                project_root = cls._find_project_root()
                if project_root:
                    env_file = project_root / ".env"
                    if env_file.exists():
                        load_dotenv(env_file)

            return cls.from_env()

        except ImportError:
            raise ConfigurationError(
                "python-dotenv is required to load .env files. "
                "Install it with: pip install python-dotenv"
            )

    @staticmethod
    def _find_project_root() -> Optional[Path]:
        """Find the project root directory."""
        current = Path.cwd()

        markers = [".git", "pyproject.toml", "setup.py", "requirements.txt"]

        for parent in [current] + list(current.parents):
            if any((parent / marker).exists() for marker in markers):
                return parent

        return current

    def setup_logging(self, level: Optional[str] = None) -> None:
        """Set up logging configuration; ``level`` overrides ``log_level``."""
        name = (level or self.log_level).upper()
        log_level = getattr(logging, name, logging.WARNING)

        formatter = logging.Formatter(
            "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
        )

        root_logger = logging.getLogger()
        root_logger.setLevel(log_level)

        for handler in root_logger.handlers[:]:
            root_logger.removeHandler(handler)

        console_handler = logging.StreamHandler()
        console_handler.setFormatter(formatter)
        root_logger.addHandler(console_handler)

        # matplotlib is chatty at DEBUG
        logging.getLogger("matplotlib").setLevel(logging.WARNING)

    def validate(self) -> None:
        """Validate the configuration."""
        errors = []

        for name in ("tie_tol", "tol_kkt", "membership_tol"):
            if getattr(self, name) < 0:
                errors.append(f"{name.upper()} must be >= 0")

        for name in ("inverse_tol", "newton_tol", "degenerate_tol"):
            if getattr(self, name) <= 0:
                errors.append(f"{name.upper()} must be > 0")

        if self.merge_tol < 0:
            errors.append("MERGE_TOL must be >= 0")

        if self.delta_ext <= 0:
            errors.append("DELTA_EXT must be > 0")

        if self.r_capture <= 0:
            errors.append("R_CAPTURE must be > 0")

        if not 0 < self.launch_offset < self.r_capture:
            errors.append("LAUNCH_OFFSET must lie in (0, R_CAPTURE)")

        if self.max_arc_length <= 0:
            errors.append("MAX_ARC_LENGTH must be > 0")

        if self.newton_max_iter < 1:
            errors.append("NEWTON_MAX_ITER must be >= 1")

        if self.seed < 0:
            errors.append("SEED must be an unsigned integer")

        if self.log_level.upper() not in LOG_LEVELS:
            errors.append(f"LOG_LEVEL must be one of {', '.join(LOG_LEVELS)}")

        if errors:
            raise ConfigurationError(f"Configuration errors: {', '.join(errors)}")

    def with_overrides(self, **overrides: Any) -> "Config":
        """Return a copy with the given non-None fields replaced."""
        known = {f.name for f in dataclasses.fields(self) if f.init}
        unknown = sorted(set(overrides) - known)
        if unknown:
            raise ConfigurationError(f"Unknown tolerance(s): {', '.join(unknown)}")
        changes = {k: v for k, v in overrides.items() if v is not None}
        updated = dataclasses.replace(self, **changes)
        updated.validate()
        return updated

    @property
    def project_root(self) -> Path:
        """Get the project root directory."""
        if self._project_root is None:
            raise ConfigurationError("Could not determine project root directory")
        return self._project_root

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to dictionary (excluding private fields)."""
        return {
            key: value
            for key, value in self.__dict__.items()
            if not key.startswith("_")
        }

    def tolerances(self) -> Dict[str, Any]:
        """Numerical settings echoed into reports."""
        data = self.to_dict()
        data.pop("log_level", None)
        return data

    def __str__(self) -> str:
        return f"Config({self.to_dict()})"


def _parse_env_value(name: str, raw: str, default: Any) -> Any:
    """Coerce an environment string to the type of the field default."""
    if isinstance(default, bool):
        return raw.lower() == "true"
    if isinstance(default, int):
        if name == "seed" and not raw.strip().isdigit():
            raise ConfigurationError(
                f"{ENV_PREFIX}SEED must be a decimal unsigned integer, got {raw!r}"
            )
        return int(raw)
    if isinstance(default, float):
        return float(raw)
    return raw
