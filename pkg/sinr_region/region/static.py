"""
Closed-form max-min SINR for fixed channels.

Along a direction mu the largest common SINR scale is the reciprocal of a
Perron eigenvalue: of diag(mu) A without power bounds, and of
psi(diag(mu) A, eta / bound, omega) under a sum-power bound on omega.
Several bounds combine by taking the smallest value.
"""

from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np

from sinr_region.config.models import DEFAULT_TOLERANCES, Tolerances
from sinr_region.constants import UNCONSTRAINED_LABEL
from sinr_region.exceptions import ModelError, PowerRecoveryError, SingularMatrixError, ZeroWeightError
from sinr_region.linalg import FloatArray, PerronResult, psi, solve, spectral_radius
from sinr_region.logging import get_logger
from sinr_region.model.models import (
    ChannelModel,
    Direction,
    NormalizedGain,
    PowerConstraint,
    SolveReport,
    achieved_sinr,
    check_constraints,
    eta,
    normalize,
)

logger = get_logger(__name__)


def weighted_gain(normalized: NormalizedGain, direction: Direction) -> FloatArray:
    """
    diag(mu) A.
    """
    if direction.n != normalized.n:
        raise ModelError(f"direction has {direction.n} weights but the channel has {normalized.n} users")
    return direction.mu[:, np.newaxis] * normalized.matrix


def require_positive(direction: Direction) -> None:
    if not direction.is_strictly_positive():
        zeros = [i + 1 for i in range(direction.n) if direction.mu[i] == 0]
        raise ZeroWeightError(
            f"direction has zero weights for users {zeros}; solve the reduced system with solve_on_support"
        )


def _radius(matrix: FloatArray, tolerances: Tolerances, *, what: str) -> PerronResult:
    result = spectral_radius(matrix, tolerances=tolerances)
    if not result.converged:
        logger.warning("perron_estimate_used", matrix=what, method=result.method, lambda_star=result.lambda_star)
    return result


def unconstrained_max_sinr(
    normalized: NormalizedGain, direction: Direction, *, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> float:
    """
    1 / lambda*(diag(mu) A); infinite when the spectral radius is zero.
    """
    result = _radius(weighted_gain(normalized, direction), tolerances, what="unconstrained")
    if result.lambda_star == 0.0:
        return math.inf
    return 1.0 / result.lambda_star


def constraint_matrix(channel: ChannelModel, direction: Direction, constraint: PowerConstraint) -> FloatArray:
    """
    psi(diag(mu) A, eta / bound, omega).
    """
    constraint.check_users(channel.n)
    weighted = weighted_gain(normalize(channel), direction)
    return psi(weighted, eta(channel, direction) / constraint.bound, constraint.indices)


def constrained_max_sinr(
    channel: ChannelModel,
    direction: Direction,
    constraint: PowerConstraint,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> float:
    """
    Largest common SINR scale under a single sum-power bound.
    """
    require_positive(direction)
    result = _radius(constraint_matrix(channel, direction, constraint), tolerances, what=constraint.label)
    gamma = 1.0 / result.lambda_star
    logger.debug("constraint_solved", constraint=constraint.label, gamma_star=gamma, iterations=result.iterations)
    return gamma


def balanced_power(
    weighted: FloatArray,
    noise_terms: FloatArray,
    gamma: float,
    *,
    radius: float,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> FloatArray:
    """
    Solve (I - gamma W) p = gamma eta for the powers giving SINR mu_i * gamma.

    gamma may not exceed 1 / radius (radius = lambda*(W)); within
    singular_guard of that bound it is pulled back so the system stays
    solvable.
    """
    if gamma < 0 or math.isnan(gamma):
        raise PowerRecoveryError(f"SINR target must be nonnegative, got {gamma}")
    n = weighted.shape[0]
    if gamma == 0.0:
        return np.zeros(n)
    if math.isinf(gamma):
        raise PowerRecoveryError("no finite power reaches an unbounded SINR target")

    target = gamma
    if radius > 0.0:
        limit = 1.0 / radius
        if gamma > limit * (1.0 + tolerances.bound_slack):
            raise PowerRecoveryError(
                f"SINR target {gamma:.6g} exceeds the unconstrained bound {limit:.6g}; no nonnegative power exists"
            )
        target = min(gamma, (1.0 - tolerances.singular_guard) * limit)

    try:
        power = solve(np.eye(n) - target * weighted, target * noise_terms, tolerances=tolerances)
    except SingularMatrixError as exc:
        raise PowerRecoveryError(f"power system is singular at SINR target {gamma:.6g}") from exc

    lowest = float(power.min())
    if lowest < -tolerances.negative_power:
        raise PowerRecoveryError(f"recovered power has a negative entry ({lowest:.3e}) at SINR target {gamma:.6g}")
    return np.maximum(power, 0.0)


def recover_power(
    channel: ChannelModel,
    direction: Direction,
    gamma: float,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> FloatArray:
    """
    Powers that give every user the SINR mu_i * gamma.
    """
    weighted = weighted_gain(normalize(channel), direction)
    radius = _radius(weighted, tolerances, what="unconstrained").lambda_star
    return balanced_power(weighted, eta(channel, direction), gamma, radius=radius, tolerances=tolerances)


def pick_binding(
    candidates: Sequence[tuple[str, float]], *, tolerances: Tolerances = DEFAULT_TOLERANCES
) -> tuple[float, str, tuple[str, ...]]:
    """
    Minimum value, the first constraint attaining it and every constraint tied with it.
    """
    gamma = min(value for _, value in candidates)
    ties = tuple(label for label, value in candidates if value <= gamma * (1.0 + tolerances.tie_rel))
    return gamma, ties[0], ties


def multi_constrained_max_sinr(
    channel: ChannelModel,
    direction: Direction,
    constraints: Sequence[PowerConstraint],
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> SolveReport:
    """
    Max-min SINR under every constraint at once, with the powers achieving it.

    Without constraints this is the unconstrained value; the reported powers
    are then taken just below the bound, where they grow without limit.
    """
    constraints = check_constraints(constraints, channel.n)
    if direction.n != channel.n:
        raise ModelError(f"direction has {direction.n} weights but the channel has {channel.n} users")

    if not constraints:
        gamma = unconstrained_max_sinr(normalize(channel), direction, tolerances=tolerances)
        candidates: tuple[tuple[str, float], ...] = ((UNCONSTRAINED_LABEL, gamma),)
        binding, ties = UNCONSTRAINED_LABEL, (UNCONSTRAINED_LABEL,)
        if math.isinf(gamma):
            logger.info("solve_unbounded", users=channel.n)
            return SolveReport(
                direction=direction,
                gamma_star=gamma,
                power=None,
                sinr=None,
                binding=binding,
                unbounded=True,
                ties=ties,
                candidates=candidates,
            )
    else:
        require_positive(direction)
        candidates = tuple(
            (c.label, constrained_max_sinr(channel, direction, c, tolerances=tolerances)) for c in constraints
        )
        gamma, binding, ties = pick_binding(candidates, tolerances=tolerances)

    power = recover_power(channel, direction, gamma, tolerances=tolerances)
    logger.info("solve_complete", users=channel.n, gamma_star=gamma, binding=binding, ties=len(ties))
    return SolveReport(
        direction=direction,
        gamma_star=gamma,
        power=power,
        sinr=achieved_sinr(channel, power),
        binding=binding,
        ties=ties,
        candidates=candidates,
    )


def solve_on_support(
    channel: ChannelModel,
    direction: Direction,
    constraints: Sequence[PowerConstraint],
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> SolveReport:
    """
    Solve for a direction with zero weights by dropping the zero-weight users.

    Users outside the support of mu transmit nothing. Each constraint keeps
    its bound over the remaining users; constraints left without users are
    dropped. Results are reported for all n users.
    """
    constraints = check_constraints(constraints, channel.n)
    support = direction.support
    if len(support) == channel.n:
        return multi_constrained_max_sinr(channel, direction, constraints, tolerances=tolerances)

    position = {user: k for k, user in enumerate(support)}
    reduced_constraints = []
    for constraint in constraints:
        kept = tuple(position[i] + 1 for i in constraint.indices if i in position)
        if kept:
            reduced_constraints.append(PowerConstraint(omega=kept, bound=constraint.bound, name=constraint.label))

    reduced = multi_constrained_max_sinr(
        channel.restrict(support), direction.restrict(support), reduced_constraints, tolerances=tolerances
    )

    def widen(values: FloatArray | None) -> FloatArray | None:
        if values is None:
            return None
        full = np.zeros(channel.n)
        full[list(support)] = values
        return full

    return SolveReport(
        direction=direction,
        gamma_star=reduced.gamma_star,
        power=widen(reduced.power),
        sinr=widen(reduced.sinr),
        binding=reduced.binding,
        unbounded=reduced.unbounded,
        ties=reduced.ties,
        candidates=reduced.candidates,
    )
