"""
Command orchestration: load the spec, run a solver, write the results.

Each runner returns the process exit code.
"""

from __future__ import annotations

import numpy as np

from sinr_region.config import AppConfig, RunConfig
from sinr_region.constants import DEFAULT_RANDOM_USERS, EXIT_OK, EXIT_UNBOUNDED
from sinr_region.exceptions import ChannelSpecError, ModelError, VerificationError
from sinr_region.file_utils import emit
from sinr_region.logging import get_logger
from sinr_region.model import ChannelSpec, Direction, load_channel_spec, load_directions
from sinr_region.model.sampling import random_spec
from sinr_region.oracle import bisect_max_sinr, compare
from sinr_region.region.static import multi_constrained_max_sinr, solve_on_support
from sinr_region.region.sweep import per_constraint_sweep, sweep_boundary
from sinr_region.region.time_varying import expand, tv_multi
from sinr_region.reporting import render_boundary, render_curves, render_report, render_verification

logger = get_logger(__name__)


def _load_spec(run: RunConfig) -> ChannelSpec:
    if run.input is None:
        raise ChannelSpecError(f"{run.command} requires an input spec")
    return load_channel_spec(run.input)


def _direction(run: RunConfig, n: int) -> Direction:
    if run.mu is None:
        return Direction.uniform(n)
    if len(run.mu) != n:
        raise ModelError(f"--mu has {len(run.mu)} weights but the channel has {n} users")
    return Direction(np.asarray(run.mu))


def run_solve(config: AppConfig, run: RunConfig) -> int:
    """
    Max-min SINR of a static channel along one direction.
    """
    spec = _load_spec(run)
    direction = _direction(run, spec.channel.n)
    report = solve_on_support(spec.channel, direction, spec.constraints, tolerances=config.tolerances)
    emit(render_report(report, run.format), run.output)
    return EXIT_UNBOUNDED if report.unbounded else EXIT_OK


def run_sweep(config: AppConfig, run: RunConfig) -> int:
    """
    Region boundary over many directions, optionally with one curve per constraint.
    """
    spec = _load_spec(run)
    channel = spec.channel
    directions: int | tuple[Direction, ...]
    if run.directions is not None:
        directions = load_directions(run.directions, users=channel.n)
    else:
        directions = run.points or config.sweep.points
    workers = run.workers or config.sweep.workers

    logger.info(
        "sweep_start",
        users=channel.n,
        directions=directions if isinstance(directions, int) else len(directions),
        per_constraint=run.per_constraint,
        workers=workers,
    )
    if run.per_constraint:
        curves = per_constraint_sweep(
            channel,
            spec.constraints,
            directions,
            include_axes=run.include_axes,
            workers=workers,
            tolerances=config.tolerances,
        )
        content = render_curves(curves, run.format)
    else:
        points = sweep_boundary(
            channel,
            spec.constraints,
            directions,
            include_axes=run.include_axes,
            workers=workers,
            tolerances=config.tolerances,
        )
        content = render_boundary(points, run.format)
    emit(content, run.output)
    return EXIT_OK


def run_tv_solve(config: AppConfig, run: RunConfig) -> int:
    """
    Max-min SINR of a time-varying channel under average power bounds.
    """
    spec = _load_spec(run)
    if spec.time_varying is None:
        raise ChannelSpecError(f"Spec {run.input} has no 'states'; use solve for a static channel")
    direction = _direction(run, spec.time_varying.n)
    report = tv_multi(spec.time_varying, direction, spec.constraints, tolerances=config.tolerances)
    emit(render_report(report, run.format), run.output)
    return EXIT_UNBOUNDED if report.unbounded else EXIT_OK


def run_verify(config: AppConfig, run: RunConfig) -> int:
    """
    Compare the closed form with bisection and fail when they disagree.
    """
    if run.input is not None:
        spec = _load_spec(run)
    else:
        users = run.users or DEFAULT_RANDOM_USERS
        spec = random_spec(run.seed or 0, users)
        logger.info("verify_random_spec", seed=run.seed, users=users)

    tolerances = config.tolerances
    direction = _direction(run, spec.channel.n)
    if spec.time_varying is not None:
        closed_form = tv_multi(spec.time_varying, direction, spec.constraints, tolerances=tolerances).gamma_star
        system = expand(spec.time_varying, direction)
        bisection = bisect_max_sinr(system, direction, spec.constraints, tolerances=tolerances)
    else:
        closed_form = multi_constrained_max_sinr(
            spec.channel, direction, spec.constraints, tolerances=tolerances
        ).gamma_star
        bisection = bisect_max_sinr(spec.channel, direction, spec.constraints, tolerances=tolerances)

    if run.corrupt is not None:
        logger.warning("verify_corrupted", factor=1.0 + run.corrupt)
        closed_form *= 1.0 + run.corrupt

    result = compare(closed_form, bisection, config.verify.relative_tolerance)
    emit(render_verification(result, run.format), run.output)
    if not result.passed:
        logger.error(
            "verify_gap_breach",
            closed_form=result.closed_form,
            bisection=result.bisection,
            rel_gap=result.rel_gap,
            tolerance=result.tolerance,
        )
        raise VerificationError(
            f"closed form {result.closed_form:.12g} and bisection {result.bisection:.12g} differ by "
            f"{result.rel_gap:.3e} relative (tolerance {result.tolerance:.3e})"
        )
    logger.info("verify_passed", rel_gap=result.rel_gap)
    return EXIT_OK
