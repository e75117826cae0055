"""
Command-line interface for sinr-region.
"""

from collections.abc import Callable
from pathlib import Path
from typing import Any, NoReturn, Protocol

import click
from pydantic import ValidationError

from sinr_region.config import AppConfig, RunConfig, find_config_file, load_config
from sinr_region.constants import CLI_ENV_PREFIX, EXIT_FAILURE, EXIT_OK
from sinr_region.exceptions import (
    ChannelSpecError,
    ConfigError,
    LinalgError,
    ModelError,
    SolverError,
    VerificationError,
)
from sinr_region.logging import LOG_FORMATS, LOG_LEVELS, configure_logging, get_logger
from sinr_region.region.runner import run_solve, run_sweep, run_tv_solve, run_verify

logger = get_logger(__name__)

LOG_LEVEL_CHOICES = list(LOG_LEVELS)

HANDLED_ERRORS = (ConfigError, ChannelSpecError, ModelError, LinalgError, SolverError, VerificationError)


class CommandAction(Protocol):
    """
    Callable protocol for CLI actions.
    """

    def __call__(self, config: AppConfig, run: RunConfig) -> int: ...


def _fail(command: str, exc: Exception) -> NoReturn:
    logger.error("cli_error", command=command, error=str(exc))
    click.echo(f"error: {exc}", err=True)
    raise SystemExit(EXIT_FAILURE) from exc


def _execute_command(action: CommandAction, config: AppConfig, command: str, options: dict[str, Any]) -> None:
    """
    Validate the invocation, run it and map failures to exit codes.
    """
    try:
        run = RunConfig.model_validate({"command": command, **options})
    except ValidationError as exc:
        _fail(command, exc)

    try:
        code = action(config, run)
    except HANDLED_ERRORS as exc:
        _fail(command, exc)
    except SystemExit:
        raise
    except Exception as exc:
        logger.exception("cli_unhandled_exception", exc_info=exc)
        raise SystemExit(EXIT_FAILURE) from exc

    if code != EXIT_OK:
        raise SystemExit(code)


def _load_config(ctx: click.Context, config_file: Path | None) -> None:
    """
    Resolve, load, and store configuration on a CLI context.
    """
    resolved_config = find_config_file(config_file)
    ctx.ensure_object(dict)
    ctx.obj["config"] = load_config(resolved_config)


def _common_options(func: Callable[..., Any]) -> Callable[..., Any]:
    options = [
        click.option(
            "--input",
            "input_path",
            type=click.Path(dir_okay=False, path_type=Path),
            default=None,
            help="Channel spec file (JSON or YAML).",
        ),
        click.option("--mu", default=None, help="Direction weights, comma separated (default: all ones)."),
        click.option(
            "--format",
            "output_format",
            type=click.Choice(["csv", "json"]),
            default="csv",
            show_default=True,
            help="Output encoding.",
        ),
        click.option(
            "--output",
            type=click.Path(dir_okay=False, path_type=Path),
            default=None,
            help="Write results here instead of stdout.",
        ),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _base_options(input_path: Path | None, mu: str | None, output_format: str, output: Path | None) -> dict[str, Any]:
    return {"input": input_path, "mu": mu, "format": output_format, "output": output}


@click.group(context_settings={"auto_envvar_prefix": CLI_ENV_PREFIX})
@click.option(
    "--config",
    "config_file",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Path to the YAML configuration file.",
)
@click.option(
    "--log-level",
    type=click.Choice(LOG_LEVEL_CHOICES, case_sensitive=False),
    default="WARNING",
    show_default=True,
    help="Logging level (logs go to stderr).",
)
@click.option(
    "--log-format",
    type=click.Choice(LOG_FORMATS),
    default="console",
    show_default=True,
    help="Render log lines for people or as JSON objects.",
)
@click.pass_context
def cli(ctx: click.Context, log_level: str, log_format: str, config_file: Path | None) -> None:
    """
    Max-min SINR and rate regions of Gaussian interference channels.
    """
    try:
        configure_logging(log_level, log_format)
        _load_config(ctx, config_file)
    except (ConfigError, ValueError) as exc:
        _fail("config", exc)
    except SystemExit:
        raise
    except Exception as exc:
        logger.exception("cli_unhandled_exception", exc_info=exc)
        raise SystemExit(EXIT_FAILURE) from exc


@cli.command()
@_common_options
@click.pass_context
def solve(ctx: click.Context, input_path: Path | None, mu: str | None, output_format: str, output: Path | None) -> None:
    """
    Max-min SINR, powers and binding constraint of a static channel.

    Exits with 2 when the SINR is unbounded.
    """
    _execute_command(run_solve, ctx.obj["config"], "solve", _base_options(input_path, mu, output_format, output))


@cli.command()
@_common_options
@click.option("--points", type=int, default=None, help="Interior angles for a 2-user sweep [config: 181].")
@click.option(
    "--directions",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="File listing weight vectors, for channels with more than two users.",
)
@click.option("--per-constraint", is_flag=True, help="Also emit the unconstrained and per-constraint curves.")
@click.option("--include-axes", is_flag=True, help="Add the single-user axis points.")
@click.option("--workers", type=int, default=None, help="Threads solving sweep points [config: 1].")
@click.pass_context
def sweep(
    ctx: click.Context,
    input_path: Path | None,
    mu: str | None,
    output_format: str,
    output: Path | None,
    points: int | None,
    directions: Path | None,
    per_constraint: bool,
    include_axes: bool,
    workers: int | None,
) -> None:
    """
    Boundary of the SINR and rate region.
    """
    options = _base_options(input_path, mu, output_format, output) | {
        "points": points,
        "directions": directions,
        "per_constraint": per_constraint,
        "include_axes": include_axes,
        "workers": workers,
    }
    _execute_command(run_sweep, ctx.obj["config"], "sweep", options)


@cli.command("tv-solve")
@_common_options
@click.pass_context
def tv_solve(
    ctx: click.Context, input_path: Path | None, mu: str | None, output_format: str, output: Path | None
) -> None:
    """
    Max-min SINR of a time-varying channel under average power bounds.
    """
    options = _base_options(input_path, mu, output_format, output)
    _execute_command(run_tv_solve, ctx.obj["config"], "tv-solve", options)


@cli.command()
@_common_options
@click.option("--seed", type=int, default=None, help="Verify a random spec generated from this seed.")
@click.option("--users", type=int, default=None, help="Users in the random spec [default: 3].")
@click.option("--corrupt", type=float, default=None, hidden=True, help="Scale the closed form by 1 + x.")
@click.pass_context
def verify(
    ctx: click.Context,
    input_path: Path | None,
    mu: str | None,
    output_format: str,
    output: Path | None,
    seed: int | None,
    users: int | None,
    corrupt: float | None,
) -> None:
    """
    Compare the closed form with bisection; exits nonzero when they disagree.
    """
    options = _base_options(input_path, mu, output_format, output) | {"seed": seed, "users": users, "corrupt": corrupt}
    _execute_command(run_verify, ctx.obj["config"], "verify", options)


if __name__ == "__main__":
    cli()
