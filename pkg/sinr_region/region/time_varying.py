"""
Max-min SINR for channels that switch between states, under average power bounds.

Each (state, user) pair becomes one link of an expanded system of l*n links
with no coupling between states. A bound on the rho-weighted average power
of a user subset couples the states through the added columns.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from sinr_region.config.models import DEFAULT_TOLERANCES, Tolerances
from sinr_region.constants import UNCONSTRAINED_LABEL
from sinr_region.exceptions import ModelError
from sinr_region.linalg import FloatArray, psi, spectral_radius
from sinr_region.logging import get_logger
from sinr_region.model.models import (
    Direction,
    PowerConstraint,
    SolveReport,
    TimeVaryingChannel,
    achieved_sinr,
    check_constraints,
    eta,
    normalize,
)
from sinr_region.region.static import balanced_power, pick_binding, require_positive, unconstrained_max_sinr

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class ExpandedSystem:
    """
    Block-diagonal normalized gains, noise terms and weights of all states.

    Link j of state i (both 0-based) sits at index i * n + j.
    """

    num_states: int
    n: int
    a_exp: FloatArray
    eta_exp: FloatArray
    mu_exp: FloatArray
    rho: FloatArray

    @property
    def size(self) -> int:
        return self.num_states * self.n

    @property
    def weighted_gain(self) -> FloatArray:
        """
        diag(1 kron mu) A_exp.
        """
        return self.mu_exp[:, np.newaxis] * self.a_exp

    def block(self, state: int) -> slice:
        return slice(state * self.n, (state + 1) * self.n)

    def state_columns(self, state: int, users: Sequence[int]) -> list[int]:
        return [state * self.n + j for j in users]

    def constraint_weights(self, constraint: PowerConstraint) -> FloatArray:
        """
        rho_i on every (state i, user in omega) link, zero elsewhere.
        """
        weights = np.zeros(self.size)
        for state, prob in enumerate(self.rho):
            weights[self.state_columns(state, constraint.indices)] = prob
        return weights

    def unconstrained_radius(self, *, tolerances: Tolerances = DEFAULT_TOLERANCES) -> float:
        """
        Spectral radius of the weighted gain, taken block by block.
        """
        weighted = self.weighted_gain
        return max(
            spectral_radius(weighted[self.block(i), self.block(i)], tolerances=tolerances).lambda_star
            for i in range(self.num_states)
        )


def expand(tv: TimeVaryingChannel, direction: Direction) -> ExpandedSystem:
    """
    Build the expanded l*n link system for one direction.
    """
    if direction.n != tv.n:
        raise ModelError(f"direction has {direction.n} weights but the channel has {tv.n} users")
    require_positive(direction)
    return ExpandedSystem(
        num_states=tv.num_states,
        n=tv.n,
        a_exp=scipy.linalg.block_diag(*(normalize(state).matrix for state in tv.states)),
        eta_exp=np.concatenate([eta(state, direction) for state in tv.states]),
        mu_exp=np.kron(np.ones(tv.num_states), direction.mu),
        rho=np.array(tv.rho),
    )


def average_constraint_matrix(system: ExpandedSystem, constraint: PowerConstraint) -> FloatArray:
    """
    Weighted gain plus rho_i * eta_exp / bound on the omega columns of every state i.
    """
    constraint.check_users(system.n)
    added = system.eta_exp / constraint.bound
    matrix = system.weighted_gain
    for state, prob in enumerate(system.rho):
        matrix = psi(matrix, prob * added, system.state_columns(state, constraint.indices))
    return matrix


def _constrained_gamma(system: ExpandedSystem, constraint: PowerConstraint, tolerances: Tolerances) -> float:
    result = spectral_radius(average_constraint_matrix(system, constraint), tolerances=tolerances)
    if not result.converged:
        logger.warning("perron_estimate_used", matrix=constraint.label, method=result.method)
    gamma = 1.0 / result.lambda_star
    logger.debug("average_constraint_solved", constraint=constraint.label, gamma_star=gamma, states=system.num_states)
    return gamma


def _report(
    tv: TimeVaryingChannel,
    system: ExpandedSystem,
    direction: Direction,
    gamma: float,
    binding: str,
    ties: tuple[str, ...],
    candidates: tuple[tuple[str, float], ...],
    tolerances: Tolerances,
) -> SolveReport:
    power = balanced_power(
        system.weighted_gain,
        system.eta_exp,
        gamma,
        radius=system.unconstrained_radius(tolerances=tolerances),
        tolerances=tolerances,
    )
    state_power = power.reshape(system.num_states, system.n)
    state_sinr = np.vstack([achieved_sinr(state, row) for state, row in zip(tv.states, state_power, strict=True)])
    logger.info("tv_solve_complete", states=system.num_states, users=system.n, gamma_star=gamma, binding=binding)
    return SolveReport(
        direction=direction,
        gamma_star=gamma,
        power=power,
        sinr=state_sinr.reshape(-1),
        binding=binding,
        ties=ties,
        candidates=candidates,
        state_power=state_power,
        average_power=system.rho @ state_power,
        state_sinr=state_sinr,
    )


def tv_constrained_max_sinr(
    tv: TimeVaryingChannel,
    direction: Direction,
    constraint: PowerConstraint,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> SolveReport:
    """
    Max-min SINR over all states under one average sum-power bound.
    """
    return tv_multi(tv, direction, [constraint], tolerances=tolerances)


def tv_multi(
    tv: TimeVaryingChannel,
    direction: Direction,
    constraints: Sequence[PowerConstraint],
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> SolveReport:
    """
    Max-min SINR over all states under every average bound at once.

    With no constraints the states decouple and the value is the smallest
    unconstrained value over the states.
    """
    constraints = check_constraints(constraints, tv.n)
    system = expand(tv, direction)

    if not constraints:
        gamma = min(
            unconstrained_max_sinr(normalize(state), direction, tolerances=tolerances) for state in tv.states
        )
        candidates: tuple[tuple[str, float], ...] = ((UNCONSTRAINED_LABEL, gamma),)
        if math.isinf(gamma):
            logger.info("tv_solve_unbounded", states=system.num_states, users=system.n)
            return SolveReport(
                direction=direction,
                gamma_star=gamma,
                power=None,
                sinr=None,
                binding=UNCONSTRAINED_LABEL,
                unbounded=True,
                ties=(UNCONSTRAINED_LABEL,),
                candidates=candidates,
            )
        return _report(
            tv, system, direction, gamma, UNCONSTRAINED_LABEL, (UNCONSTRAINED_LABEL,), candidates, tolerances
        )

    candidates = tuple((c.label, _constrained_gamma(system, c, tolerances)) for c in constraints)
    gamma, binding, ties = pick_binding(candidates, tolerances=tolerances)
    return _report(tv, system, direction, gamma, binding, ties, candidates, tolerances)
