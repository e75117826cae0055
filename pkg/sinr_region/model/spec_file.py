"""
Channel spec files: schema, loading and serialisation.

A spec is JSON (or YAML) with keys ``gains``, ``noise``, ``constraints`` and,
for time-varying channels, ``states`` entries of ``{gains, prob}``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Annotated, Any, NamedTuple

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError, field_validator, model_validator

from sinr_region.exceptions import ChannelSpecError, ModelError
from sinr_region.logging import get_logger
from sinr_region.model.models import (
    PROBABILITY_SUM_TOL,
    ChannelModel,
    Direction,
    PowerConstraint,
    TimeVaryingChannel,
)

logger = get_logger(__name__)

Gain = Annotated[float, Field(ge=0, allow_inf_nan=False)]
Positive = Annotated[float, Field(gt=0, allow_inf_nan=False)]
GainRows = list[list[Gain]]


def _check_square(rows: GainRows) -> GainRows:
    n = len(rows)
    if n == 0:
        raise ValueError("gain matrix must not be empty")
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ValueError(f"row {i} has {len(row)} entries, expected {n}")
    for i in range(n):
        if rows[i][i] <= 0:
            raise ValueError(f"direct gain at [{i}][{i}] (user {i + 1}) must be positive")
    return rows


class ConstraintItem(BaseModel):
    users: list[int] = Field(min_length=1)
    bound: Positive
    name: str | None = None

    model_config = ConfigDict(extra="forbid")

    @field_validator("users")
    @classmethod
    def _unique_users(cls, value: list[int]) -> list[int]:
        if len(set(value)) != len(value):
            raise ValueError(f"duplicate users in {value}")
        return value

    def into(self) -> PowerConstraint:
        return PowerConstraint(omega=tuple(self.users), bound=self.bound, name=self.name)


class StateItem(BaseModel):
    gains: GainRows
    prob: Positive

    model_config = ConfigDict(extra="forbid")

    @field_validator("gains")
    @classmethod
    def _square_gains(cls, value: GainRows) -> GainRows:
        return _check_square(value)


class ChannelSpecFile(BaseModel):
    """
    On-disk representation of a channel spec.
    """

    gains: GainRows | None = None
    noise: list[Positive] = Field(min_length=1)
    constraints: list[ConstraintItem] = Field(default_factory=list)
    states: list[StateItem] | None = Field(default=None, min_length=1)

    model_config = ConfigDict(extra="forbid")

    @field_validator("gains")
    @classmethod
    def _square_gains(cls, value: GainRows | None) -> GainRows | None:
        return None if value is None else _check_square(value)

    @model_validator(mode="after")
    def _check_dimensions(self) -> ChannelSpecFile:
        if self.gains is None and self.states is None:
            raise ValueError("one of 'gains' or 'states' is required")
        n = len(self.noise)
        if self.gains is not None and len(self.gains) != n:
            raise ValueError(f"gains: {len(self.gains)} users but noise has {n} entries")
        for index, state in enumerate(self.states or []):
            if len(state.gains) != n:
                raise ValueError(f"states.{index}.gains: {len(state.gains)} users but noise has {n} entries")
        if self.states is not None:
            total = sum(state.prob for state in self.states)
            if abs(total - 1.0) > PROBABILITY_SUM_TOL:
                raise ValueError(f"states.prob: probabilities sum to {total!r}, expected 1")
        for index, constraint in enumerate(self.constraints):
            for user in constraint.users:
                if not 1 <= user <= n:
                    raise ValueError(f"constraints.{index}.users: user {user} out of range 1..{n}")
        return self

    def into(self) -> ChannelSpec:
        noise = np.asarray(self.noise)
        time_varying = None
        if self.states is not None:
            time_varying = TimeVaryingChannel(
                states=tuple(ChannelModel(gains=np.asarray(state.gains), sigma2=noise) for state in self.states),
                rho=np.asarray([state.prob for state in self.states]),
            )
        channel = (
            ChannelModel(gains=np.asarray(self.gains), sigma2=noise)
            if self.gains is not None
            else time_varying.states[0]  # type: ignore[union-attr]
        )
        return ChannelSpec(
            channel=channel,
            constraints=tuple(item.into() for item in self.constraints),
            time_varying=time_varying,
        )


class ChannelSpec(NamedTuple):
    """
    Validated contents of a spec file.

    When the file only lists states, ``channel`` is the first state.
    """

    channel: ChannelModel
    constraints: tuple[PowerConstraint, ...]
    time_varying: TimeVaryingChannel | None = None


def _format_validation_error(exc: ValidationError) -> str:
    parts = []
    for error in exc.errors():
        path = ".".join(str(part) for part in error["loc"]) or "<root>"
        parts.append(f"{path}: {error['msg']}")
    return "; ".join(parts)


def _parse_text(path: Path, payload: str) -> Any:
    try:
        if path.suffix.lower() == ".json":
            return json.loads(payload)
        return yaml.safe_load(payload)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ChannelSpecError(f"Failed to parse spec file {path}: {exc}") from exc


def parse_channel_spec(data: Any, *, source: str = "<memory>") -> ChannelSpec:
    """
    Validate an already-decoded spec mapping.
    """
    if not isinstance(data, dict):
        raise ChannelSpecError(f"Spec {source} must be a mapping")
    try:
        parsed = ChannelSpecFile.model_validate(data)
        return parsed.into()
    except ValidationError as exc:
        raise ChannelSpecError(f"Invalid spec {source}: {_format_validation_error(exc)}") from exc
    except ModelError as exc:
        raise ChannelSpecError(f"Invalid spec {source}: {exc}") from exc


def load_channel_spec(path: Path) -> ChannelSpec:
    """
    Read, parse and validate a channel spec file.
    """
    logger.debug("spec_read_start", path=str(path))
    try:
        payload = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ChannelSpecError(f"Failed to read spec file: {path}") from exc

    spec = parse_channel_spec(_parse_text(Path(path), payload), source=str(path))
    logger.info(
        "spec_loaded",
        path=str(path),
        users=spec.channel.n,
        constraints=len(spec.constraints),
        states=spec.time_varying.num_states if spec.time_varying else 0,
    )
    return spec


def spec_to_dict(spec: ChannelSpec) -> dict[str, Any]:
    """
    Convert a spec back to its file mapping; floats keep their exact value.
    """
    data: dict[str, Any] = {"noise": spec.channel.sigma2.tolist()}
    if spec.time_varying is None:
        data["gains"] = spec.channel.gains.tolist()
    else:
        data["states"] = [
            {"gains": state.gains.tolist(), "prob": float(prob)}
            for state, prob in zip(spec.time_varying.states, spec.time_varying.rho, strict=True)
        ]
    data["constraints"] = [
        {"users": list(c.omega), "bound": c.bound, **({"name": c.name} if c.name else {})} for c in spec.constraints
    ]
    return data


def dump_channel_spec(spec: ChannelSpec) -> str:
    """
    Serialise a spec as JSON text.
    """
    return json.dumps(spec_to_dict(spec), indent=2) + "\n"


_DirectionRows = TypeAdapter(list[Annotated[list[Gain], Field(min_length=1)]])


def load_directions(path: Path, *, users: int) -> tuple[Direction, ...]:
    """
    Read a list of weight vectors (JSON or YAML) for sweeps with more than two users.
    """
    try:
        payload = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ChannelSpecError(f"Failed to read directions file: {path}") from exc
    try:
        rows = _DirectionRows.validate_python(_parse_text(Path(path), payload))
    except ValidationError as exc:
        raise ChannelSpecError(f"Invalid directions {path}: {_format_validation_error(exc)}") from exc

    directions = []
    for index, row in enumerate(rows):
        if len(row) != users:
            raise ChannelSpecError(f"Invalid directions {path}: {index}: {len(row)} weights, expected {users}")
        try:
            directions.append(Direction(np.asarray(row)))
        except ModelError as exc:
            raise ChannelSpecError(f"Invalid directions {path}: {index}: {exc}") from exc
    if not directions:
        raise ChannelSpecError(f"Directions file {path} lists no directions")
    return tuple(directions)
