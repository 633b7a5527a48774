"""
structlog configuration.

Logs are rendered to stderr so that stdout and result artifacts stay
deterministic.
"""

from __future__ import annotations

import logging
import sys
from typing import Optional

import structlog

from .config import get_settings


def configure_logging(level: Optional[str] = None, fmt: Optional[str] = None) -> None:
    """Install the console or JSON renderer.

    Args:
        level: Log level name (default from settings)
        fmt: ``console`` or ``json`` (default from settings)
    """
    settings = get_settings()
    level_name = (level or settings.log_level).upper()
    renderer_name = (fmt or settings.log_format).lower()

    numeric_level = getattr(logging, level_name, logging.INFO)
    logging.basicConfig(stream=sys.stderr, level=numeric_level, format="%(message)s")

    renderer: structlog.types.Processor
    if renderer_name == "json":
        renderer = structlog.processors.JSONRenderer(sort_keys=True)
    else:
        renderer = structlog.dev.ConsoleRenderer(colors=False)

    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso", utc=True),
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(numeric_level),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )
