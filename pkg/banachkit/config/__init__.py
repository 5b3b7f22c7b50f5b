from .config import Config, Settings, config

__all__ = ["Config", "Settings", "config"]
