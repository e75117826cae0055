"""YAML configuration loader for sinr-region."""

from __future__ import annotations

import os
from collections.abc import Iterator
from pathlib import Path
from typing import Any

import yaml
from pydantic import ValidationError

from sinr_region.config.models import AppConfig, VerifyConfig
from sinr_region.constants import CONFIG_DIR_NAME, DEFAULT_CONFIG_CANDIDATES, ENV_VERIFY_TOL
from sinr_region.exceptions import ConfigError
from sinr_region.logging import get_logger

logger = get_logger(__name__)


def _read_yaml(path: Path) -> dict[str, Any]:
    """Read a YAML file into a mapping."""
    logger.debug("config_read_start", path=str(path))
    try:
        payload = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"Failed to read config file: {path}") from exc

    try:
        data = yaml.safe_load(payload)
    except yaml.YAMLError as exc:
        raise ConfigError(f"Invalid YAML in config file: {path}") from exc

    if data is None:
        return {}

    if not isinstance(data, dict):
        raise ConfigError(f"Config file must be a YAML mapping: {path}")

    return data


def _xdg_config_home() -> Path:
    """Return the XDG config directory."""
    xdg_config_home = os.environ.get("XDG_CONFIG_HOME")

    if xdg_config_home:
        return Path(xdg_config_home).expanduser()

    return Path.home() / ".config"


def _iter_config_paths() -> Iterator[Path]:
    """Return candidate config paths in priority order."""
    roots = (_xdg_config_home() / CONFIG_DIR_NAME, Path.cwd(), Path("/etc") / CONFIG_DIR_NAME)
    for root in roots:
        for name in DEFAULT_CONFIG_CANDIDATES:
            yield (root / name).expanduser().resolve()


def find_config_file(config_path: Path | None = None) -> Path | None:
    """
    Return the configuration file to use, or None when the defaults apply.

    An explicit path must exist; searched locations are optional.
    """
    if config_path is not None:
        resolved = config_path.expanduser().resolve()
        if resolved.is_file():
            logger.debug("config_file_found", path=str(resolved), source="explicit")
            return resolved
        if resolved.exists():
            raise ConfigError(f"Config path is not a file: {resolved}")
        raise ConfigError(f"Config file does not exist: {resolved}")

    for path in _iter_config_paths():
        if path.is_file():
            logger.debug("config_file_found", path=str(path), source="search")
            return path

    logger.debug("config_defaults_used")
    return None


def _apply_env_overrides(config: AppConfig) -> AppConfig:
    """Apply environment variable overrides to configuration."""
    raw_tol = os.environ.get(ENV_VERIFY_TOL)
    if not raw_tol:
        return config

    try:
        verify = VerifyConfig.model_validate({"relative_tolerance": raw_tol})
    except ValidationError as exc:
        raise ConfigError(f"Invalid {ENV_VERIFY_TOL} value: {exc}") from exc

    logger.info("config_env_override", key=ENV_VERIFY_TOL, value=verify.relative_tolerance)
    return config.model_copy(update={"verify": verify})


def load_config(config_path: Path | None = None) -> AppConfig:
    """Load the sinr-region configuration, falling back to defaults."""
    resolved_path = find_config_file(config_path)
    data = _read_yaml(resolved_path) if resolved_path is not None else {}

    try:
        config = AppConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(f"Invalid configuration in {resolved_path}: {exc}") from exc

    return _apply_env_overrides(config)
