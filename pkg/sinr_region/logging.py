"""
Structured logging for sinr-region.

Results own stdout, so every log line goes to stderr. Solver events carry
numpy scalars and small arrays (gamma, powers, Perron estimates); they are
turned into plain floats and lists before rendering so both the console and
the JSON renderer print them the same way.
"""

import logging
import sys
from collections.abc import MutableMapping
from typing import Any, Literal

import numpy as np
import structlog

LogFormat = Literal["console", "json"]

LOG_LEVELS = {
    "DEBUG": logging.DEBUG,
    "INFO": logging.INFO,
    "WARNING": logging.WARNING,
    "ERROR": logging.ERROR,
    "CRITICAL": logging.CRITICAL,
}
LOG_FORMATS: tuple[LogFormat, ...] = ("console", "json")

_PACKAGE_LOGGER = "sinr_region"


def plain_numbers(_logger: Any, _method: str, event_dict: MutableMapping[str, Any]) -> MutableMapping[str, Any]:
    """
    Replace numpy scalars and arrays in an event with Python floats, ints and lists.
    """
    for key, value in event_dict.items():
        if isinstance(value, np.ndarray):
            event_dict[key] = value.tolist()
        elif isinstance(value, np.generic):
            event_dict[key] = value.item()
    return event_dict


def _renderer(log_format: LogFormat) -> structlog.typing.Processor:
    if log_format == "json":
        return structlog.processors.JSONRenderer(sort_keys=True)
    return structlog.dev.ConsoleRenderer(colors=False)


def configure_logging(log_level_str: str = "WARNING", log_format: str = "console") -> None:
    """
    Route the sinr_region logger tree to stderr at the given level.

    Third-party loggers are held at WARNING.
    """
    level_key = log_level_str.upper()
    if level_key not in LOG_LEVELS:
        raise ValueError(f"Invalid log level: {log_level_str}")
    if log_format not in LOG_FORMATS:
        raise ValueError(f"Invalid log format: {log_format}")

    logging.basicConfig(format="%(message)s", stream=sys.stderr, level=LOG_LEVELS[level_key], force=True)
    for logger_name in logging.root.manager.loggerDict:
        if not logger_name.startswith(_PACKAGE_LOGGER):
            logging.getLogger(logger_name).setLevel(logging.WARNING)

    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.processors.TimeStamper(fmt="iso" if log_format == "json" else "%Y-%m-%d %H:%M:%S"),
            plain_numbers,
            structlog.processors.format_exc_info,
            _renderer(log_format),
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=False,
    )


def get_logger(name: str) -> structlog.stdlib.BoundLogger:
    return structlog.get_logger(name)
