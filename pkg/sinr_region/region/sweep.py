"""
SINR and rate region boundaries traced by sweeping the direction vector.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from sinr_region.config.models import DEFAULT_TOLERANCES, Tolerances
from sinr_region.constants import COMBINED_LABEL, DEFAULT_SWEEP_WORKERS, UNCONSTRAINED_LABEL
from sinr_region.exceptions import LinalgError, ModelError, SolverError
from sinr_region.linalg import FloatArray
from sinr_region.logging import get_logger
from sinr_region.model.models import ChannelModel, Direction, PowerConstraint, SolveReport, rate_from_sinr
from sinr_region.region.static import multi_constrained_max_sinr, solve_on_support

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class BoundaryPoint:
    """
    One boundary point: the direction, its max-min scale and the SINR and rate it yields.

    theta is set for two-user angle sweeps and None for explicit directions.
    A failed point keeps its direction, carries NaN values and the error text.
    """

    mu: Direction
    theta: float | None
    gamma_star: float
    sinr: FloatArray
    rate: FloatArray
    binding: str
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def angle_directions(points: int, *, include_axes: bool = False) -> list[tuple[float, Direction]]:
    """
    Two-user directions (cos theta, sin theta) at points interior angles of (0, pi/2).

    theta_k = k * (pi/2) / (points + 1) for k = 1..points; with include_axes
    the two axis directions are added at each end.
    """
    if points < 2:
        raise ModelError(f"a sweep needs at least 2 points, got {points}")
    step = (math.pi / 2) / (points + 1)
    thetas = [k * step for k in range(1, points + 1)]
    if include_axes:
        thetas = [0.0, *thetas, math.pi / 2]
    return [(theta, Direction.from_angle(theta)) for theta in thetas]


def _boundary_point(direction: Direction, theta: float | None, report: SolveReport) -> BoundaryPoint:
    gamma = report.gamma_star
    # mu_i * gamma, with off-support users at zero even when gamma is unbounded.
    support = direction.mu > 0
    sinr = np.zeros(direction.n)
    sinr[support] = direction.mu[support] * gamma
    return BoundaryPoint(
        mu=direction,
        theta=theta,
        gamma_star=gamma,
        sinr=sinr,
        rate=rate_from_sinr(sinr),
        binding=report.binding,
    )


def _failed_point(direction: Direction, theta: float | None, exc: Exception) -> BoundaryPoint:
    nan = np.full(direction.n, np.nan)
    return BoundaryPoint(
        mu=direction,
        theta=theta,
        gamma_star=math.nan,
        sinr=nan,
        rate=nan,
        binding="",
        error=str(exc),
    )


def _solve_points(
    channel: ChannelModel,
    constraints: Sequence[PowerConstraint],
    targets: Sequence[tuple[float | None, Direction]],
    *,
    workers: int,
    tolerances: Tolerances,
) -> list[BoundaryPoint]:
    def solve_one(target: tuple[float | None, Direction]) -> BoundaryPoint:
        theta, direction = target
        # Only axis angles reach the reduced solve; explicit directions must be strictly positive.
        solver = solve_on_support if theta is not None else multi_constrained_max_sinr
        try:
            report = solver(channel, direction, constraints, tolerances=tolerances)
        except (ModelError, LinalgError, SolverError) as exc:
            logger.warning("sweep_point_failed", theta=theta, mu=direction.mu.tolist(), error=str(exc))
            return _failed_point(direction, theta, exc)
        return _boundary_point(direction, theta, report)

    if workers <= 1 or len(targets) < 2:
        return [solve_one(target) for target in targets]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # map keeps input order.
        return list(pool.map(solve_one, targets))


def _targets(
    channel: ChannelModel, directions: int | Sequence[Direction], include_axes: bool
) -> list[tuple[float | None, Direction]]:
    if isinstance(directions, int):
        if channel.n != 2:
            raise ModelError(f"angle sweeps need a 2-user channel, got {channel.n} users; pass explicit directions")
        return list(angle_directions(directions, include_axes=include_axes))
    if not directions:
        raise ModelError("an explicit sweep needs at least one direction")
    for direction in directions:
        if direction.n != channel.n:
            raise ModelError(f"direction has {direction.n} weights but the channel has {channel.n} users")
    return [(None, direction) for direction in directions]


def sweep_boundary(
    channel: ChannelModel,
    constraints: Sequence[PowerConstraint],
    directions: int | Sequence[Direction],
    *,
    include_axes: bool = False,
    workers: int = DEFAULT_SWEEP_WORKERS,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> list[BoundaryPoint]:
    """
    Solve every direction independently, returning points in input order.

    An integer asks for that many interior angles of a 2-user channel.
    Points that fail carry their error instead of being dropped.
    """
    targets = _targets(channel, directions, include_axes)
    points = _solve_points(channel, constraints, targets, workers=workers, tolerances=tolerances)
    failed = sum(1 for point in points if not point.ok)
    logger.info("sweep_complete", points=len(points), failed=failed, constraints=len(constraints))
    return points


def combine_curves(curves: Sequence[Sequence[BoundaryPoint]], labels: Sequence[str]) -> list[BoundaryPoint]:
    """
    Pointwise minimum of gamma_star over curves sampled at the same directions.

    The first curve attaining the minimum names the binding constraint. A
    failure in any curve fails the combined point.
    """
    combined = []
    for row in zip(*curves, strict=True):
        failure = next((point for point in row if not point.ok), None)
        if failure is not None:
            combined.append(failure)
            continue
        best = min(range(len(row)), key=lambda k: row[k].gamma_star)
        point = row[best]
        combined.append(
            BoundaryPoint(
                mu=point.mu,
                theta=point.theta,
                gamma_star=point.gamma_star,
                sinr=point.sinr,
                rate=point.rate,
                binding=labels[best],
            )
        )
    return combined


def per_constraint_sweep(
    channel: ChannelModel,
    constraints: Sequence[PowerConstraint],
    directions: int | Sequence[Direction],
    *,
    include_axes: bool = False,
    workers: int = DEFAULT_SWEEP_WORKERS,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> dict[str, list[BoundaryPoint]]:
    """
    The unconstrained curve, one curve per constraint and their pointwise minimum.

    Keys are "unconstrained", each constraint label in input order and
    "combined".
    """

    def curve(subset: Sequence[PowerConstraint]) -> list[BoundaryPoint]:
        return sweep_boundary(
            channel, subset, directions, include_axes=include_axes, workers=workers, tolerances=tolerances
        )

    curves = {UNCONSTRAINED_LABEL: curve([])}
    for constraint in constraints:
        curves[constraint.label] = curve([constraint])
    if constraints:
        labels = [c.label for c in constraints]
        curves[COMBINED_LABEL] = combine_curves([curves[label] for label in labels], labels)
    else:
        curves[COMBINED_LABEL] = curves[UNCONSTRAINED_LABEL]
    return curves
