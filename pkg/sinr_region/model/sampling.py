"""
Seeded random channel instances for verification runs and tests.
"""

import numpy as np

from sinr_region.constants import RANDOM_DIRECT_GAIN_DECADES, RANDOM_GAIN_DECADES
from sinr_region.model.models import ChannelModel, Direction, PowerConstraint, TimeVaryingChannel
from sinr_region.model.spec_file import ChannelSpec


def _log_uniform(rng: np.random.Generator, decades: tuple[float, float], size: int | tuple[int, ...]) -> np.ndarray:
    low, high = decades
    return 10.0 ** rng.uniform(low, high, size=size)


def random_channel(
    rng: np.random.Generator,
    n: int,
    *,
    cross_decades: tuple[float, float] = RANDOM_GAIN_DECADES,
    direct_decades: tuple[float, float] = RANDOM_DIRECT_GAIN_DECADES,
) -> ChannelModel:
    """
    Channel with log-uniform cross and direct gains and noise in [0.05, 0.2].
    """
    gains = _log_uniform(rng, cross_decades, (n, n))
    np.fill_diagonal(gains, _log_uniform(rng, direct_decades, n))
    return ChannelModel(gains=gains, sigma2=rng.uniform(0.05, 0.2, size=n))


def random_direction(rng: np.random.Generator, n: int) -> Direction:
    """
    Strictly positive weights bounded away from zero.
    """
    return Direction(rng.uniform(0.2, 1.0, size=n))


def random_constraint(rng: np.random.Generator, n: int) -> PowerConstraint:
    """
    Sum constraint over a random nonempty subset of users.
    """
    size = int(rng.integers(1, n + 1))
    omega = sorted(int(i) + 1 for i in rng.choice(n, size=size, replace=False))
    return PowerConstraint(omega=tuple(omega), bound=float(rng.uniform(0.5, 2.0)))


def random_time_varying(rng: np.random.Generator, n: int, num_states: int) -> TimeVaryingChannel:
    """
    States sharing one noise vector, with probabilities drawn from a flat Dirichlet.
    """
    sigma2 = rng.uniform(0.05, 0.2, size=n)
    states = []
    for _ in range(num_states):
        channel = random_channel(rng, n)
        states.append(ChannelModel(gains=channel.gains, sigma2=sigma2))
    rho = rng.dirichlet(np.ones(num_states))
    rho[-1] = 1.0 - float(np.sum(rho[:-1]))
    return TimeVaryingChannel(states=tuple(states), rho=rho)


def random_spec(seed: int, n: int) -> ChannelSpec:
    """
    Reproducible spec for verification: a random subset bound plus a total-power bound.
    """
    rng = np.random.default_rng(seed)
    channel = random_channel(rng, n)
    constraints = (
        random_constraint(rng, n),
        PowerConstraint(omega=tuple(range(1, n + 1)), bound=float(rng.uniform(1.0, 3.0)), name="total"),
    )
    return ChannelSpec(channel=channel, constraints=constraints)
