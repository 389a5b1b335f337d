"""Settings for the amoeba toolkit: YAML file, built-in fallbacks, environment overrides"""

import copy
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml

logger = logging.getLogger(__name__)

SETTINGS_FILE = Path(__file__).parent / "settings.yaml"

# Used for keys missing from the settings file
FALLBACKS: Dict[str, Dict[str, Any]] = {
    'amoeba': {'threads': None, 'chunk_size': 65536},
    'sampling': {'seed': 42, 'samples': 100000, 'grid': 256},
    'logging': {'level': 'WARNING', 'file_path': 'logs/amoeba.log'},
}

_TRUE = ('true', '1', 'yes', 'on')


def _merge(base: Dict, override: Dict) -> Dict:
    merged = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def _coerce(raw: str, like: Any) -> Any:
    """Convert an environment string to the type of the value it replaces"""
    if isinstance(like, bool):
        return raw.strip().lower() in _TRUE
    try:
        if isinstance(like, int):
            return int(raw)
        if isinstance(like, float):
            return float(raw)
    except ValueError:
        logger.warning(f"Ignoring non-numeric override {raw!r}")
        return like
    return raw


class Config:
    """Process-wide settings; `AMOEBA_CONFIG` may point at another YAML file"""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._settings = None
        return cls._instance

    def __init__(self):
        if self._settings is None:
            self.load_config()

    def load_config(self, config_path: Optional[Union[str, Path]] = None):
        """
        Read the settings file over the built-in fallbacks

        Args:
            config_path: YAML file (default: $AMOEBA_CONFIG or config/settings.yaml)
        """
        path = Path(config_path or os.getenv('AMOEBA_CONFIG') or SETTINGS_FILE)
        try:
            with open(path, 'r') as f:
                loaded = yaml.safe_load(f) or {}
        except FileNotFoundError:
            logger.warning(f"Settings file {path} not found, using built-in values")
            loaded = {}
        self._settings = _merge(FALLBACKS, loaded)

    def get(self, key: str, default: Any = None) -> Any:
        """
        Look up a dotted key such as 'tolerances.rank'

        The environment variable named by the upper-cased path ('amoeba.threads'
        -> AMOEBA_THREADS) wins over the file. When the file holds null the
        override takes the type of `default`.
        """
        parts = key.split('.')
        node: Any = self._settings
        for part in parts:
            node = node.get(part) if isinstance(node, dict) else None

        raw = os.getenv('_'.join(parts).upper())
        if raw is not None:
            return _coerce(raw, node if node is not None else default)
        return default if node is None else node

    def get_all(self) -> Dict:
        return copy.deepcopy(self._settings)


config = Config()


def get_config(key: str, default: Any = None) -> Any:
    """Get a configuration value"""
    return config.get(key, default)
