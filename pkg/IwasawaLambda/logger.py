import logging
import os
import sys

import structlog

DEFAULT_LEVEL = "INFO"


def _level_number(name: str) -> int:
    return getattr(logging, name.upper(), logging.INFO)


def configure_logging(level: str | None = None) -> None:
    """Configure structlog for the CLI; logs go to stderr so JSON output on stdout stays clean."""
    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.add_log_level,
            structlog.processors.StackInfoRenderer(),
            structlog.dev.set_exc_info,
            structlog.processors.TimeStamper(fmt="%Y-%m-%d %H:%M:%S", utc=False),
            structlog.dev.ConsoleRenderer(colors=False),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(
            _level_number(level or os.environ.get("LOG_LEVEL", DEFAULT_LEVEL))
        ),
        context_class=dict,
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )


configure_logging()
log = structlog.get_logger()
