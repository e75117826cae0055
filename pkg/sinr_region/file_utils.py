"""
File utilities for writing result artifacts.
"""

from pathlib import Path

import click

from sinr_region.logging import get_logger

logger = get_logger(__name__)


def write_text_file(path: Path, content: str, *, encoding: str = "utf-8") -> Path:
    """
    Write text content to the target path, creating parent directories if needed.
    """
    p = Path(path)
    logger.debug("file_write_start", path=str(p), encoding=encoding)

    try:
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(content, encoding=encoding)
    except OSError as exc:
        logger.exception("file_write_error", exc_info=exc, path=str(p))
        raise

    logger.info("file_write_success", path=str(p), size=len(content))
    return p


def emit(content: str, path: Path | None) -> None:
    """
    Send results to a file, or to stdout when no path is given.
    """
    if path is None:
        click.echo(content, nl=False)
        return
    write_text_file(path, content)
