import json
import logging
import os
import sys
from datetime import datetime, timezone

UTC = timezone.utc

LOG_LEVEL_ENV = "BOUSTRO_LOG"

_LEVELS = {
    "debug": logging.DEBUG,
    "info": logging.INFO,
    "warning": logging.WARNING,
    "error": logging.ERROR,
}


class JsonFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        log_data: dict[str, object] = {
            "timestamp": datetime.fromtimestamp(record.created, UTC).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "context": record.args if isinstance(record.args, dict) else {},
        }
        if record.exc_info:
            log_data["exception"] = self.formatException(record.exc_info)
        return json.dumps(log_data, default=str)


def resolve_level() -> int:
    """Reads the verbosity from BOUSTRO_LOG, defaulting to INFO."""
    return _LEVELS.get(os.environ.get(LOG_LEVEL_ENV, "info").strip().lower(), logging.INFO)


def get_logger(name: str) -> logging.Logger:
    logger = logging.getLogger(name)
    logger.setLevel(resolve_level())

    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(JsonFormatter())
        logger.addHandler(handler)
        logger.propagate = False  # Prevent duplicate logs in parent loggers

    return logger
