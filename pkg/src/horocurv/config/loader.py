"""
Run Configuration Loader

Resolves the effective RunConfig: CLI flags override a key-value config file
(one ``key = value`` per line, ``#`` comments), which overrides the built-in
defaults. The file is named by ``--config`` or by the HOROCURV_CONFIG
environment variable.
"""

import logging
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from dotenv import dotenv_values
from pydantic import ValidationError

from horocurv.config.settings import settings
from horocurv.core.errors import ConfigError
from horocurv.models.config import RunConfig

logger = logging.getLogger(__name__)


def _normalize_key(key: str) -> str:
    return key.strip().lower().replace("-", "_")


def read_config_file(path: str) -> Dict[str, str]:
    """Parse a key-value config file.

    Raises:
        ConfigError: File missing, unreadable, has an empty value or an unknown key
    """
    file_path = Path(path)
    if not file_path.is_file():
        raise ConfigError(f"Config file not found: {path}")
    try:
        raw = dotenv_values(file_path)
    except (OSError, UnicodeDecodeError) as e:
        raise ConfigError(f"Cannot read config file {path}: {e}")

    known = set(RunConfig.model_fields)
    values: Dict[str, str] = {}
    for key, value in raw.items():
        name = _normalize_key(key)
        if name not in known:
            raise ConfigError(f"Unknown key '{key}' in config file {path}")
        if value is None or value.strip() == "":
            raise ConfigError(f"Key '{key}' in config file {path} has no value")
        values[name] = value.strip()
    logger.debug(f"Loaded {len(values)} keys from {path}")
    return values


def load_run_config(
    overrides: Optional[Mapping[str, Any]] = None,
    config_file: Optional[str] = None,
) -> RunConfig:
    """Effective run configuration.

    Args:
        overrides: CLI values; None entries are ignored
        config_file: Config file path (falls back to HOROCURV_CONFIG)

    Returns:
        Validated RunConfig

    Raises:
        ConfigError: Unknown key or invalid value
    """
    merged: Dict[str, Any] = {}
    path = config_file or settings.config_file
    if path:
        merged.update(read_config_file(path))
    if "workers" not in merged:
        merged["workers"] = settings.workers
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[_normalize_key(key)] = value
    try:
        return RunConfig(**merged)
    except ValidationError as e:
        raise ConfigError(f"Invalid run configuration: {e}")
