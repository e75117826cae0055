"""Configuration helpers for sinr-region."""

from sinr_region.config.loader import find_config_file, load_config
from sinr_region.config.models import (
    DEFAULT_TOLERANCES,
    AppConfig,
    RunConfig,
    SweepConfig,
    Tolerances,
    VerifyConfig,
)

__all__ = [
    "DEFAULT_TOLERANCES",
    "AppConfig",
    "RunConfig",
    "SweepConfig",
    "Tolerances",
    "VerifyConfig",
    "find_config_file",
    "load_config",
]
