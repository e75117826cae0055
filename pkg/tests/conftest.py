"""
Shared fixtures: two 2-user reference channels and seeded random instances.
"""

import json
from pathlib import Path

import numpy as np
import pytest

from sinr_region.model import ChannelModel, PowerConstraint

MODERATE_GAINS = [[0.6791, 0.0999], [0.0411, 0.6864]]
WEAK_GAINS = [[2.0430, 0.0359], [0.0134, 1.3313]]
NOISE = [0.1, 0.1]

MODERATE_BOUNDS = (((1,), 0.8), ((2,), 1.0), ((1, 2), 1.4))
WEAK_BOUNDS = (((1,), 1.0), ((2,), 1.0), ((1, 2), 1.5))


def make_constraints(bounds) -> tuple[PowerConstraint, ...]:
    return tuple(PowerConstraint(omega=omega, bound=bound) for omega, bound in bounds)


def spec_mapping(gains, bounds, noise=NOISE) -> dict:
    return {
        "gains": gains,
        "noise": noise,
        "constraints": [{"users": list(omega), "bound": bound} for omega, bound in bounds],
    }


@pytest.fixture
def moderate_channel() -> ChannelModel:
    return ChannelModel(gains=np.array(MODERATE_GAINS), sigma2=np.array(NOISE))


@pytest.fixture
def moderate_constraints() -> tuple[PowerConstraint, ...]:
    return make_constraints(MODERATE_BOUNDS)


@pytest.fixture
def weak_channel() -> ChannelModel:
    return ChannelModel(gains=np.array(WEAK_GAINS), sigma2=np.array(NOISE))


@pytest.fixture
def weak_constraints() -> tuple[PowerConstraint, ...]:
    return make_constraints(WEAK_BOUNDS)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def moderate_spec_file(tmp_path: Path) -> Path:
    path = tmp_path / "moderate.json"
    path.write_text(json.dumps(spec_mapping(MODERATE_GAINS, MODERATE_BOUNDS)), encoding="utf-8")
    return path
