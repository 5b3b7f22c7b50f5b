"""
Configuration management for banachkit.
Centralized loading of numeric defaults plus environment overrides.
"""
import json
from pathlib import Path
from typing import Any, Dict, Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Environment overrides (BANACHKIT_*), also read from a local .env file"""

    model_config = SettingsConfigDict(env_prefix="BANACHKIT_", env_file=".env", extra="ignore")

    cache_dir: Optional[Path] = None
    config_path: Optional[Path] = None
    log_level: Optional[str] = None


class Config:
    """Configuration manager for the library and CLI"""

    def __init__(self, config_path: Optional[str] = None, settings: Optional[Settings] = None):
        self.settings = settings or Settings()
        if config_path is None:
            config_path = self.settings.config_path or Path(__file__).parent / "config.json"

        self._config = self._load_config(config_path)

    def _load_config(self, config_path) -> Dict[str, Any]:
        """Load configuration from JSON file"""
        try:
            with open(config_path, 'r') as f:
                return json.load(f)
        except FileNotFoundError:
            raise FileNotFoundError(f"Config file not found: {config_path}")
        except json.JSONDecodeError as e:
            raise ValueError(f"Invalid JSON in config file: {e}")

    @property
    def gauge_tol(self) -> float:
        """Relative accuracy of the gauge solvers"""
        return float(self.get("gauge.tol", 1e-8))

    @property
    def max_bisections(self) -> int:
        return int(self.get("gauge.max_bisections", 200))

    @property
    def max_newton(self) -> int:
        return int(self.get("gauge.max_newton", 100))

    @property
    def force_generic(self) -> bool:
        """Skip the flat closed form and always run the generic solver"""
        return bool(self.get("gauge.force_generic", False))

    @property
    def exhaustive_cap(self) -> int:
        return int(self.get("schreier.exhaustive_cap", 12))

    @property
    def schreier_mode(self) -> str:
        return self.get("schreier.mode", "exact")

    @property
    def cache_dir(self) -> Optional[Path]:
        return self.settings.cache_dir

    @property
    def log_level(self) -> str:
        return self.settings.log_level or self.get("logging.level", "INFO")

    def get(self, key: str, default: Any = None) -> Any:
        """Get a configuration value using dot notation (e.g., 'gauge.tol')"""
        keys = key.split('.')
        value = self._config

        for k in keys:
            if isinstance(value, dict) and k in value:
                value = value[k]
            else:
                return default

        return value

# Global configuration instance
config = Config()
