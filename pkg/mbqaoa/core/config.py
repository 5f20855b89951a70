"""
Configuration management for mbqaoa.

Loads tolerances, size guards and run defaults from a JSON file. The file only
overrides what it names; everything else keeps the model defaults below, so a
partial profile is valid.
"""

import json
from pathlib import Path
from typing import Any, Dict, Optional

from loguru import logger
from pydantic import BaseModel, Field
from pydantic_settings import BaseSettings, SettingsConfigDict

DEFAULT_CONFIG_PATH = Path(__file__).parent.parent.parent / "config" / "defaults.json"


class Tolerances(BaseModel):
    """Numeric acceptance thresholds."""
    tvd: float = 1e-9
    state_deviation: float = 1e-9
    leakage: float = 1e-12
    scalar_equality: float = 1e-10
    norm: float = 1e-10


class Guards(BaseModel):
    """Size limits for the dense oracles."""
    contraction_ports: int = 12
    statevector_qubits: int = 14
    brute_force_vars: int = 24
    pattern_window: int = 22
    branch_bits: int = 22
    exhaustive_bits: int = 12  # verify_pattern enumerates every branch up to here
    mixer_degree: int = 10
    mis_qubits: int = 12


class SweepDefaults(BaseModel):
    """Default angle grid, as multiples of pi with half-open ranges."""
    gamma_start_pi: float = 0.0
    gamma_stop_pi: float = 1.0
    gamma_points: int = Field(default=16, ge=1)
    beta_start_pi: float = 0.0
    beta_stop_pi: float = 0.5
    beta_points: int = Field(default=16, ge=1)


class SamplingDefaults(BaseModel):
    """Shot counts and seeds used when the caller gives none."""
    shots: int = Field(default=1000, ge=1)
    seed: int = 0
    verify_branches: int = Field(default=64, ge=1)  # sampled-mode verification paths


class RunDefaults(BaseModel):
    """Validated content of a config file."""
    name: str = "built-in defaults"
    description: str = ""
    version: str = "1.0"
    tolerances: Tolerances = Field(default_factory=Tolerances)
    guards: Guards = Field(default_factory=Guards)
    sweep: SweepDefaults = Field(default_factory=SweepDefaults)
    sampling: SamplingDefaults = Field(default_factory=SamplingDefaults)


class Settings(BaseSettings):
    """Environment overrides (MBQAOA_CONFIG, MBQAOA_LOG_LEVEL), also read from .env."""
    model_config = SettingsConfigDict(env_prefix="MBQAOA_", env_file=".env", extra="ignore")

    config: Optional[str] = None
    log_level: str = "INFO"


class Config:
    """Configuration manager for tolerances, guards and run defaults."""

    def __init__(self, config_path: Optional[str] = None):
        """
        Initialize configuration.

        Args:
            config_path: Path to JSON config file. If None, uses config/defaults.json
                         when present and the built-in defaults otherwise.

        Raises:
            FileNotFoundError: If an explicit config_path does not exist
        """
        self.config_path: Optional[Path] = None
        self.defaults = RunDefaults()

        if config_path is not None:
            self.config_path = Path(config_path)
            if not self.config_path.exists():
                raise FileNotFoundError(f"Config file not found: {self.config_path}")
        elif DEFAULT_CONFIG_PATH.exists():
            self.config_path = DEFAULT_CONFIG_PATH

        if self.config_path is not None:
            self._load_config()
        else:
            logger.debug("No config file found, using built-in defaults")

    def _load_config(self) -> None:
        """Load and validate configuration from JSON file."""
        assert self.config_path is not None
        with open(self.config_path, "r") as f:
            raw: Dict[str, Any] = json.load(f)

        self.defaults = RunDefaults.model_validate(raw)
        logger.info(f"Loaded config: {self.defaults.name}")

    @property
    def tolerances(self) -> Tolerances:
        return self.defaults.tolerances

    @property
    def guards(self) -> Guards:
        return self.defaults.guards

    def tolerance(self, name: str) -> float:
        """
        Get a tolerance value.

        Args:
            name: Tolerance name ('tvd', 'state_deviation', 'leakage', ...)

        Returns:
            Tolerance value

        Raises:
            KeyError: If the tolerance is unknown
        """
        if name not in Tolerances.model_fields:
            raise KeyError(f"Unknown tolerance: {name}")
        return float(getattr(self.defaults.tolerances, name))

    def guard(self, name: str) -> int:
        """
        Get a size guard.

        Args:
            name: Guard name ('statevector_qubits', 'pattern_window', ...)

        Returns:
            Guard limit

        Raises:
            KeyError: If the guard is unknown
        """
        if name not in Guards.model_fields:
            raise KeyError(f"Unknown guard: {name}")
        return int(getattr(self.defaults.guards, name))

    def sweep_default(self, name: str, default: Any = None) -> Any:
        """Get a sweep grid default, or `default` if unknown."""
        return getattr(self.defaults.sweep, name, default)

    def sampling_default(self, name: str, default: Any = None) -> Any:
        """Get a sampling default, or `default` if unknown."""
        return getattr(self.defaults.sampling, name, default)


# Global default config instance
_default_config: Optional[Config] = None


def get_default_config() -> Config:
    """Get the default global configuration instance (honours MBQAOA_CONFIG)."""
    global _default_config
    if _default_config is None:
        _default_config = Config(Settings().config)
    return _default_config


def set_default_config(config: Optional[Config]) -> None:
    """Replace (or with None, reset) the global configuration instance."""
    global _default_config
    _default_config = config


def load_config(config_path: str) -> Config:
    """
    Load configuration from a specific file.

    Args:
        config_path: Path to JSON config file

    Returns:
        Config instance
    """
    return Config(config_path)
