"""
Closed-form-free checks of the max-min SINR: feasibility bisection, exhaustive
power grids and the power-sum polynomial whose smallest root is the optimum.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from sinr_region.config.models import DEFAULT_TOLERANCES, Tolerances
from sinr_region.exceptions import LinalgError, ModelError, SingularMatrixError, SolverError
from sinr_region.linalg import ROOT_RTOL, FloatArray, determinant, psi, solve
from sinr_region.logging import get_logger
from sinr_region.model.models import ChannelModel, Direction, PowerConstraint, check_constraints, eta, normalize
from sinr_region.region.static import require_positive, weighted_gain
from sinr_region.region.time_varying import ExpandedSystem

logger = get_logger(__name__)

NONNEGATIVE_LABEL = "p>=0"
MAX_GRID_USERS = 3


@dataclass(frozen=True)
class ConstraintSlack:
    label: str
    slack: float


@dataclass(frozen=True, eq=False)
class FeasibilityVerdict:
    """
    Whether the balanced power point for a target SINR scale meets every bound.

    ``violated`` lists the constraints with negative slack; a negative power
    shows up as the pseudo-constraint "p>=0".
    """

    feasible: bool
    witness_power: FloatArray | None
    violated: tuple[ConstraintSlack, ...] = ()
    reason: str | None = None


@dataclass(frozen=True, eq=False)
class _LinearSystem:
    """
    W, eta and one weight vector per constraint: sum(weights * p) <= bound.
    """

    weighted: FloatArray
    noise_terms: FloatArray
    bounds: tuple[tuple[str, FloatArray, float], ...]


def _linear_system(
    system: ChannelModel | ExpandedSystem, direction: Direction, constraints: Sequence[PowerConstraint]
) -> _LinearSystem:
    require_positive(direction)
    if isinstance(system, ExpandedSystem):
        if direction.n != system.n or not np.array_equal(np.tile(direction.mu, system.num_states), system.mu_exp):
            raise ModelError("direction does not match the weights the expanded system was built with")
        constraints = check_constraints(constraints, system.n)
        return _LinearSystem(
            weighted=system.weighted_gain,
            noise_terms=system.eta_exp,
            bounds=tuple((c.label, system.constraint_weights(c), c.bound) for c in constraints),
        )

    constraints = check_constraints(constraints, system.n)
    bounds = []
    for c in constraints:
        weights = np.zeros(system.n)
        weights[list(c.indices)] = 1.0
        bounds.append((c.label, weights, c.bound))
    return _LinearSystem(
        weighted=weighted_gain(normalize(system), direction),
        noise_terms=eta(system, direction),
        bounds=tuple(bounds),
    )


def _verdict(problem: _LinearSystem, gamma: float, tolerances: Tolerances) -> FeasibilityVerdict:
    if gamma < 0 or math.isnan(gamma):
        raise SolverError(f"SINR target must be nonnegative, got {gamma}")
    size = problem.noise_terms.shape[0]
    try:
        power = solve(np.eye(size) - gamma * problem.weighted, gamma * problem.noise_terms, tolerances=tolerances)
    except SingularMatrixError as exc:
        return FeasibilityVerdict(feasible=False, witness_power=None, reason=str(exc))

    violated = []
    lowest = float(power.min())
    if lowest < -tolerances.negative_power:
        violated.append(ConstraintSlack(NONNEGATIVE_LABEL, lowest))
    for label, weights, bound in problem.bounds:
        slack = bound - float(weights @ power)
        if slack < -tolerances.feasibility_slack * bound:
            violated.append(ConstraintSlack(label, slack))

    if violated:
        return FeasibilityVerdict(
            feasible=False,
            witness_power=None,
            violated=tuple(violated),
            reason="violated: " + ", ".join(item.label for item in violated),
        )
    return FeasibilityVerdict(feasible=True, witness_power=np.maximum(power, 0.0))


def check_feasible(
    system: ChannelModel | ExpandedSystem,
    direction: Direction,
    constraints: Sequence[PowerConstraint],
    gamma: float,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> FeasibilityVerdict:
    """
    Test the SINR targets mu_i * gamma at the balanced power point.

    That point solves (I - gamma W) p = gamma eta; it is feasible when the
    solve succeeds, no power is negative and every sum (or average-sum)
    bound holds up to feasibility_slack relative.
    """
    return _verdict(_linear_system(system, direction, constraints), gamma, tolerances)


def bisect_max_sinr(
    system: ChannelModel | ExpandedSystem,
    direction: Direction,
    constraints: Sequence[PowerConstraint],
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> float:
    """
    Largest feasible SINR scale by bracketing and bisection.

    The upper end doubles from 1 until infeasible; when it passes
    2**bisect_cap_exponent while still feasible the result is infinite.
    """
    problem = _linear_system(system, direction, constraints)

    def feasible(gamma: float) -> bool:
        return _verdict(problem, gamma, tolerances).feasible

    lo, hi = 0.0, 1.0
    cap = 2.0**tolerances.bisect_cap_exponent
    while feasible(hi):
        lo, hi = hi, 2.0 * hi
        if hi > cap:
            logger.info("bisect_unbounded", cap=cap)
            return math.inf

    steps = 0
    while hi - lo > tolerances.bisect_width * max(1.0, lo):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if feasible(mid):
            lo = mid
        else:
            hi = mid
        steps += 1
    gamma = 0.5 * (lo + hi)
    logger.debug("bisect_complete", gamma=gamma, steps=steps)
    return gamma


@dataclass(frozen=True)
class GridSearchResult:
    """
    Best grid value, the widest grid spacing and whether it strays from bisection.
    """

    gamma: float
    step: float
    reference: float
    coarse: bool


def _power_box(channel: ChannelModel, constraints: Sequence[PowerConstraint]) -> FloatArray:
    box = np.full(channel.n, np.inf)
    for c in constraints:
        for i in c.indices:
            box[i] = min(box[i], c.bound)
    if np.any(np.isinf(box)):
        missing = [int(i) + 1 for i in np.flatnonzero(np.isinf(box))]
        raise SolverError(f"grid search needs a power bound on every user; users {missing} have none")
    return box


def grid_search_max_sinr(
    channel: ChannelModel,
    constraints: Sequence[PowerConstraint],
    direction: Direction,
    resolution: int,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> GridSearchResult:
    """
    Maximise min_i SINR_i / mu_i over a uniform grid of feasible powers.

    Each axis runs from 0 to the tightest bound on that user in resolution
    steps, so the bound itself is a grid point. No power balancing is
    assumed, so the result never exceeds the true optimum.
    """
    if channel.n > MAX_GRID_USERS:
        raise SolverError(f"grid search supports at most {MAX_GRID_USERS} users, got {channel.n}")
    if resolution < 1:
        raise SolverError(f"grid resolution must be positive, got {resolution}")
    constraints = check_constraints(constraints, channel.n)
    require_positive(direction)
    if direction.n != channel.n:
        raise ModelError(f"direction has {direction.n} weights but the channel has {channel.n} users")

    box = _power_box(channel, constraints)
    axes = [np.linspace(0.0, bound, resolution + 1) for bound in box]
    cross = channel.gains - np.diag(channel.direct_gains)
    best = 0.0
    # One slab per value of the first power keeps memory at resolution**(n-1) points.
    for first in axes[0]:
        mesh = np.meshgrid(np.array([first]), *axes[1:], indexing="ij")
        power = np.stack([m.reshape(-1) for m in mesh], axis=1)
        mask = np.ones(power.shape[0], dtype=bool)
        for c in constraints:
            mask &= power[:, list(c.indices)].sum(axis=1) <= c.bound * (1.0 + tolerances.feasibility_slack)
        if not mask.any():
            continue
        candidates = power[mask]
        sinr = channel.direct_gains * candidates / (channel.sigma2 + candidates @ cross.T)
        best = max(best, float(np.max(np.min(sinr / direction.mu, axis=1))))

    reference = bisect_max_sinr(channel, direction, constraints, tolerances=tolerances)
    coarse = abs(best - reference) > tolerances.grid_coarse_rel * reference
    if coarse:
        logger.warning("grid_too_coarse", resolution=resolution, grid=best, bisection=reference)
    return GridSearchResult(gamma=best, step=float(box.max()) / resolution, reference=reference, coarse=coarse)


def _balanced_system(channel: ChannelModel, direction: Direction, gamma: float) -> tuple[FloatArray, FloatArray]:
    """
    F = I - gamma diag(mu) A and the right-hand side gamma eta.
    """
    weighted = weighted_gain(normalize(channel), direction)
    return np.eye(channel.n) - gamma * weighted, gamma * eta(channel, direction)


def power_sum_polynomial(
    channel: ChannelModel, direction: Direction, constraint: PowerConstraint, gamma: float
) -> float:
    """
    bound * det(F) - sum over omega of det(F with column i replaced by gamma eta).

    By Cramer's rule this is det(F) * (bound - sum of balanced powers on omega).
    """
    constraint.check_users(channel.n)
    system, rhs = _balanced_system(channel, direction, gamma)
    total = 0.0
    for i in constraint.indices:
        replaced = system.copy()
        replaced[:, i] = rhs
        total += determinant(replaced)
    return constraint.bound * determinant(system) - total


def psi_power_sum_polynomial(
    channel: ChannelModel, direction: Direction, constraint: PowerConstraint, gamma: float
) -> float:
    """
    The same polynomial written as bound * det(psi(F, -gamma eta / bound, omega)).
    """
    constraint.check_users(channel.n)
    system, rhs = _balanced_system(channel, direction, gamma)
    return constraint.bound * determinant(psi(system, -rhs / constraint.bound, constraint.indices))


def smallest_positive_root(func: Callable[[float], float], upper: float, *, samples: int = 2000) -> float | None:
    """
    First sign change of func on (0, upper], refined with brentq.
    """
    if upper <= 0 or samples < 2:
        raise LinalgError("root search needs a positive upper end and at least 2 samples")
    grid = np.linspace(0.0, upper, samples + 1)[1:]
    values = np.array([func(float(u)) for u in grid])
    hits = np.flatnonzero(values == 0.0)
    changes = np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)
    first_hit = int(hits[0]) if hits.size else None
    first_change = int(changes[0]) if changes.size else None
    if first_change is None or (first_hit is not None and first_hit <= first_change):
        return None if first_hit is None else float(grid[first_hit])
    return float(brentq(func, grid[first_change], grid[first_change + 1], xtol=1e-15, rtol=ROOT_RTOL))


@dataclass(frozen=True)
class VerificationResult:
    """
    Closed-form value next to the bisection value and their gap.
    """

    closed_form: float
    bisection: float
    abs_gap: float
    rel_gap: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.rel_gap <= self.tolerance


def compare(closed_form: float, bisection: float, tolerance: float) -> VerificationResult:
    """
    Gap between two values; two infinite values agree, one infinite value never does.
    """
    if math.isinf(closed_form) and math.isinf(bisection):
        abs_gap = rel_gap = 0.0
    elif math.isinf(closed_form) or math.isinf(bisection):
        abs_gap = rel_gap = math.inf
    else:
        abs_gap = abs(closed_form - bisection)
        rel_gap = abs_gap / abs(bisection) if bisection else math.inf
    return VerificationResult(
        closed_form=closed_form,
        bisection=bisection,
        abs_gap=abs_gap,
        rel_gap=rel_gap,
        tolerance=tolerance,
    )
