"""
Configuration models for sinr-region.
"""

from pathlib import Path
from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, field_validator, model_validator

from sinr_region.constants import DEFAULT_SWEEP_POINTS, DEFAULT_SWEEP_WORKERS, DEFAULT_VERIFY_RELATIVE_TOL


class Tolerances(BaseModel):
    """
    Every numerical tolerance used by the kernels, solvers and oracles.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    # Spectral radius by shifted power iteration.
    power_shift: PositiveFloat = 1e-12
    power_tol: PositiveFloat = 1e-13
    power_max_iter: Annotated[int, Field(ge=1)] = 100_000
    residual_tol: PositiveFloat = 1e-10
    charpoly_fallback_max_n: Annotated[int, Field(ge=0)] = 3
    charpoly_samples: Annotated[int, Field(ge=16)] = 4096

    # Dense LU.
    singular_pivot: PositiveFloat = 1e-14

    # Power recovery and feasibility.
    negative_power: PositiveFloat = 1e-10
    feasibility_slack: PositiveFloat = 1e-10
    singular_guard: Annotated[float, Field(gt=0, lt=1)] = 1e-12
    bound_slack: Annotated[float, Field(ge=0)] = 1e-9
    tie_rel: Annotated[float, Field(ge=0)] = 1e-12

    # Oracles.
    bisect_cap_exponent: Annotated[int, Field(ge=1, le=1000)] = 60
    bisect_width: PositiveFloat = 1e-12
    grid_coarse_rel: PositiveFloat = 0.05


DEFAULT_TOLERANCES = Tolerances()


class SweepConfig(BaseModel):
    """
    Defaults for boundary sweeps.
    """

    points: Annotated[int, Field(ge=2)] = DEFAULT_SWEEP_POINTS
    workers: Annotated[int, Field(ge=1)] = DEFAULT_SWEEP_WORKERS


class VerifyConfig(BaseModel):
    """
    Acceptance threshold for closed-form versus oracle comparisons.
    """

    relative_tolerance: PositiveFloat = DEFAULT_VERIFY_RELATIVE_TOL


class AppConfig(BaseModel):
    """
    Root configuration.
    """

    model_config = ConfigDict(extra="forbid")

    tolerances: Tolerances = Field(default_factory=Tolerances)
    sweep: SweepConfig = Field(default_factory=SweepConfig)
    verify: VerifyConfig = Field(default_factory=VerifyConfig)


Command = Literal["solve", "sweep", "tv-solve", "verify"]
OutputFormat = Literal["csv", "json"]


class RunConfig(BaseModel):
    """
    One CLI invocation, validated before any solver runs.
    """

    model_config = ConfigDict(frozen=True)

    command: Command
    input: Path | None = None
    output: Path | None = None
    mu: tuple[Annotated[float, Field(allow_inf_nan=False)], ...] | None = None
    directions: Path | None = None
    points: Annotated[int, Field(ge=2)] | None = None
    workers: Annotated[int, Field(ge=1)] | None = None
    per_constraint: bool = False
    include_axes: bool = False
    format: OutputFormat = "csv"
    seed: int | None = None
    users: Annotated[int, Field(ge=1, le=64)] | None = None
    corrupt: Annotated[float, Field(gt=-1, allow_inf_nan=False)] | None = None

    @field_validator("mu", mode="before")
    @classmethod
    def _split_mu(cls, value: object) -> object:
        # "--mu 1,0.5" arrives as one string.
        if isinstance(value, str):
            return tuple(part.strip() for part in value.split(",") if part.strip())
        return value

    @model_validator(mode="after")
    def _check_command_fields(self) -> "RunConfig":
        if self.command in ("solve", "sweep", "tv-solve") and self.input is None:
            raise ValueError(f"{self.command} requires --input")
        if self.command == "verify" and self.input is None and self.seed is None:
            raise ValueError("verify requires --input or --seed")
        if self.mu is not None and any(value < 0 for value in self.mu):
            raise ValueError("--mu entries must be nonnegative")
        if self.directions is not None and self.command != "sweep":
            raise ValueError("--directions is only valid for sweep")
        if self.command == "sweep" and self.mu is not None:
            raise ValueError("sweep takes its weights from --directions or the angle grid, not --mu")
        return self
