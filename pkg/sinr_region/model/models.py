"""
Domain models for interference channels, directions and power constraints.

Users are 1-based wherever they cross the package boundary (files, reports,
constraint definitions) and 0-based inside array code.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from sinr_region.constants import NUMBER_FORMAT
from sinr_region.exceptions import ModelError

FloatArray = NDArray[np.float64]

PROBABILITY_SUM_TOL = 1e-12


def _readonly(values: ArrayLike, *, name: str, ndim: int) -> FloatArray:
    """
    Copy values into a read-only float64 array of the given rank.
    """
    try:
        array = np.array(values, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ModelError(f"{name} must be numeric") from exc
    if array.ndim != ndim:
        raise ModelError(f"{name} must have {ndim} dimension(s), got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise ModelError(f"{name} must be finite")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class ChannelModel:
    """
    Gain matrix and receiver noise of an n-user interference channel.

    gains[i, j] is the power attenuation from transmitter j to receiver i.
    """

    gains: FloatArray
    sigma2: FloatArray

    def __post_init__(self) -> None:
        gains = _readonly(self.gains, name="gains", ndim=2)
        sigma2 = _readonly(self.sigma2, name="sigma2", ndim=1)
        n = gains.shape[0]
        if n < 1 or gains.shape != (n, n):
            raise ModelError(f"gains must be a nonempty square matrix, got shape {gains.shape}")
        if np.any(gains < 0):
            raise ModelError("gains must be nonnegative")
        diagonal = np.diag(gains)
        if np.any(diagonal <= 0):
            bad = int(np.argmax(diagonal <= 0)) + 1
            raise ModelError(f"direct gain g_{bad}{bad} must be positive")
        if sigma2.shape != (n,):
            raise ModelError(f"sigma2 must have length {n}, got {sigma2.shape[0]}")
        if np.any(sigma2 <= 0):
            raise ModelError("sigma2 must be strictly positive")
        object.__setattr__(self, "gains", gains)
        object.__setattr__(self, "sigma2", sigma2)

    @property
    def n(self) -> int:
        return int(self.gains.shape[0])

    @property
    def direct_gains(self) -> FloatArray:
        return np.diag(self.gains)

    def restrict(self, users: Sequence[int]) -> ChannelModel:
        """
        Return the sub-channel seen by the given 0-based users.
        """
        index = np.asarray(users, dtype=np.intp)
        return ChannelModel(gains=self.gains[np.ix_(index, index)], sigma2=self.sigma2[index])


@dataclass(frozen=True, eq=False)
class NormalizedGain:
    """
    Cross gains divided by the direct gain of the receiving link; zero diagonal.
    """

    matrix: FloatArray

    @property
    def n(self) -> int:
        return int(self.matrix.shape[0])


@dataclass(frozen=True, eq=False)
class Direction:
    """
    Nonnegative weights defining a ray in SINR space.

    The weights are kept as given; the achieved SINR vector mu * gamma does not
    depend on their scale.
    """

    mu: FloatArray

    def __post_init__(self) -> None:
        mu = _readonly(self.mu, name="mu", ndim=1)
        if mu.size == 0:
            raise ModelError("mu must not be empty")
        if np.any(mu < 0):
            raise ModelError("mu must be nonnegative")
        if not np.any(mu > 0):
            raise ModelError("mu must have at least one positive entry")
        object.__setattr__(self, "mu", mu)

    @classmethod
    def uniform(cls, n: int) -> Direction:
        return cls(np.ones(n))

    @classmethod
    def from_angle(cls, theta: float) -> Direction:
        """
        Two-user direction (cos theta, sin theta); exact zeros on the axes.
        """
        if math.isclose(theta, 0.0, abs_tol=1e-15):
            return cls(np.array([1.0, 0.0]))
        if math.isclose(theta, math.pi / 2, abs_tol=1e-15):
            return cls(np.array([0.0, 1.0]))
        return cls(np.array([math.cos(theta), math.sin(theta)]))

    @property
    def n(self) -> int:
        return int(self.mu.shape[0])

    @property
    def support(self) -> tuple[int, ...]:
        """
        0-based users with a positive weight.
        """
        return tuple(int(i) for i in np.flatnonzero(self.mu > 0))

    def is_strictly_positive(self) -> bool:
        return bool(np.all(self.mu > 0))

    def normalized(self) -> Direction:
        return Direction(self.mu / np.linalg.norm(self.mu))

    def scaled(self, factor: float) -> Direction:
        if factor <= 0:
            raise ModelError("scale factor must be positive")
        return Direction(self.mu * factor)

    def restrict(self, users: Sequence[int]) -> Direction:
        return Direction(self.mu[np.asarray(users, dtype=np.intp)])


@dataclass(frozen=True)
class PowerConstraint:
    """
    Sum-power bound over a subset of users: sum(p_i for i in omega) <= bound.

    omega holds 1-based user indices.
    """

    omega: tuple[int, ...]
    bound: float
    name: str | None = None

    def __post_init__(self) -> None:
        omega = tuple(int(i) for i in self.omega)
        if not omega:
            raise ModelError("constraint users must not be empty")
        if len(set(omega)) != len(omega):
            raise ModelError(f"constraint users contain duplicates: {list(omega)}")
        if min(omega) < 1:
            raise ModelError(f"constraint users are 1-based, got {min(omega)}")
        bound = float(self.bound)
        if not math.isfinite(bound) or bound <= 0:
            raise ModelError(f"constraint bound must be positive and finite, got {self.bound}")
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "bound", bound)

    @property
    def indices(self) -> tuple[int, ...]:
        """
        0-based user indices.
        """
        return tuple(i - 1 for i in self.omega)

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        users = "+".join(f"p{i}" for i in self.omega)
        return f"{users}<={self.bound:{NUMBER_FORMAT}}"

    def check_users(self, n: int) -> None:
        """
        Raise unless every user index lies in 1..n.
        """
        if max(self.omega) > n:
            raise ModelError(f"constraint {self.label} names user {max(self.omega)} but the channel has {n} users")

    def scaled(self, factor: float) -> PowerConstraint:
        return PowerConstraint(omega=self.omega, bound=self.bound * factor, name=self.name)


@dataclass(frozen=True, eq=False)
class TimeVaryingChannel:
    """
    Channel whose gain matrix is drawn from a finite set of states.
    """

    states: tuple[ChannelModel, ...]
    rho: FloatArray

    def __post_init__(self) -> None:
        states = tuple(self.states)
        rho = _readonly(self.rho, name="rho", ndim=1)
        if not states:
            raise ModelError("a time-varying channel needs at least one state")
        if rho.shape != (len(states),):
            raise ModelError(f"rho must have one entry per state ({len(states)}), got {rho.shape[0]}")
        if np.any(rho <= 0):
            raise ModelError("state probabilities must be strictly positive")
        if abs(float(np.sum(rho)) - 1.0) > PROBABILITY_SUM_TOL:
            raise ModelError(f"state probabilities must sum to 1, got {float(np.sum(rho)):{NUMBER_FORMAT}}")
        n = states[0].n
        for index, state in enumerate(states, start=1):
            if state.n != n or state.sigma2.shape != states[0].sigma2.shape:
                raise ModelError(f"state {index} has {state.n} users, expected {n}")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "rho", rho)

    @property
    def n(self) -> int:
        return self.states[0].n

    @property
    def num_states(self) -> int:
        return len(self.states)


@dataclass(frozen=True, eq=False)
class SolveReport:
    """
    Outcome of a max-min SINR solve along one direction.

    Static solves carry n powers; time-varying solves carry l*n powers ordered
    state by state, plus the per-state matrix and the rho-weighted average.
    """

    direction: Direction
    gamma_star: float
    power: FloatArray | None
    sinr: FloatArray | None
    binding: str
    unbounded: bool = False
    ties: tuple[str, ...] = ()
    candidates: tuple[tuple[str, float], ...] = ()
    state_power: FloatArray | None = None
    average_power: FloatArray | None = None
    state_sinr: FloatArray | None = None

    @property
    def rate(self) -> FloatArray | None:
        if self.sinr is None:
            return None
        return rate_from_sinr(self.sinr)


def normalize(channel: ChannelModel) -> NormalizedGain:
    """
    Divide every cross gain by the direct gain of its receiver.
    """
    matrix = channel.gains / channel.direct_gains[:, np.newaxis]
    np.fill_diagonal(matrix, 0.0)
    matrix.setflags(write=False)
    return NormalizedGain(matrix)


def eta(channel: ChannelModel, direction: Direction) -> FloatArray:
    """
    Weighted noise-to-direct-gain ratios mu_i * sigma_i^2 / g_ii.
    """
    if direction.n != channel.n:
        raise ModelError(f"direction has {direction.n} weights but the channel has {channel.n} users")
    return direction.mu * channel.sigma2 / channel.direct_gains


def achieved_sinr(channel: ChannelModel, power: ArrayLike) -> FloatArray:
    """
    SINR of every user for the given transmit powers.
    """
    p = np.asarray(power, dtype=np.float64)
    cross = channel.gains - np.diag(channel.direct_gains)
    return channel.direct_gains * p / (channel.sigma2 + cross @ p)


def rate_from_sinr(sinr: ArrayLike) -> FloatArray:
    """
    Gaussian-channel rate in bits per channel use.
    """
    return np.log2(1.0 + np.asarray(sinr, dtype=np.float64))


def check_constraints(constraints: Iterable[PowerConstraint], n: int) -> tuple[PowerConstraint, ...]:
    """
    Validate user indices of every constraint against an n-user channel.
    """
    materialized = tuple(constraints)
    for constraint in materialized:
        constraint.check_users(n)
    return materialized
