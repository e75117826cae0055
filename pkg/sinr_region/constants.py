"""
Shared constants for sinr-region.
"""

CLI_ENV_PREFIX: str = "SINR_REGION"
ENV_VERIFY_TOL: str = "SINR_REGION_TOL"

DEFAULT_CONFIG_CANDIDATES: tuple[str, ...] = ("config.yaml", "config.yml")
CONFIG_DIR_NAME: str = "sinr-region"

DEFAULT_SWEEP_POINTS: int = 181
DEFAULT_SWEEP_WORKERS: int = 1
DEFAULT_VERIFY_RELATIVE_TOL: float = 1e-7

DEFAULT_RANDOM_USERS: int = 3
RANDOM_GAIN_DECADES: tuple[float, float] = (-2.0, 0.0)
RANDOM_DIRECT_GAIN_DECADES: tuple[float, float] = (-0.5, 0.5)

NUMBER_FORMAT: str = ".12g"

UNCONSTRAINED_LABEL: str = "unconstrained"
COMBINED_LABEL: str = "combined"

# Exit codes of the CLI.
EXIT_OK: int = 0
EXIT_FAILURE: int = 1
EXIT_UNBOUNDED: int = 2
