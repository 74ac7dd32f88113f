import json
import logging
import os
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel

LOG_FORMAT = (
    "%(asctime)s - [%(levelname)s] - %(name)s::%(funcName)s(%(lineno)d) - %(message)s"
)


class VerdictLog(BaseModel):
    tag: Literal["config", "check", "summary"]
    subcommand: str
    name: str
    passed: bool
    detail: dict[str, Any] = {}


class JsonFormatter(logging.Formatter):
    """Custom formatter to output verdict logs in JSON format."""

    _date_format = "%Y-%m-%dT%H:%M:%SZ"

    def format(self, record: logging.LogRecord):
        if isinstance(record.msg, BaseModel):
            model_dict = record.msg.model_dump()
        else:
            model_dict = {"message": record.getMessage()}
        model_dict["time"] = self.formatTime(record, self._date_format)
        return json.dumps(model_dict)


class TextFormatter(logging.Formatter):
    def __init__(self):
        super().__init__(LOG_FORMAT)


LOG_FORMATTER_FACTORY = {
    "json": JsonFormatter,
    "log": TextFormatter,
}


def _has_handler(logger: logging.Logger, kind: type, target: str | None = None) -> bool:
    for handler in logger.handlers:
        if type(handler) is not kind:
            continue
        if target is None or getattr(handler, "baseFilename", None) == target:
            return True
    return False


def file_logger(
    name: str,
    file_path: str | Path,
    level: int | str | None = None,
    log_format: Literal["json", "log"] | None = None,
) -> logging.Logger:
    """Sets up a logger that logs messages to a file."""
    logger = logging.getLogger(name)
    log_format = log_format or "log"
    formatter = LOG_FORMATTER_FACTORY[log_format]

    resolved_level = level or os.getenv("LOG_LEVEL", "INFO")
    logger.setLevel(resolved_level)
    logger.propagate = False

    file_path = Path(file_path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    file_path.touch(exist_ok=True)

    target = str(file_path.resolve())
    if not _has_handler(logger, logging.FileHandler, target):
        file_handler = logging.FileHandler(target)
        file_handler.setFormatter(formatter())
        logger.addHandler(file_handler)

    return logger


def standard_logger(
    name: str,
    level: int | str | None = None,
    log_format: Literal["json", "log"] | None = None,
) -> logging.Logger:
    """Sets up a logger that logs messages to the console (stderr)."""
    logger = logging.getLogger(name)
    log_format = log_format or "log"
    formatter = LOG_FORMATTER_FACTORY[log_format]

    resolved_level = level or os.getenv("LOG_LEVEL", "INFO")
    logger.setLevel(resolved_level)
    logger.propagate = False

    if not _has_handler(logger, logging.StreamHandler):
        stream_handler = logging.StreamHandler()
        stream_handler.setFormatter(formatter())
        logger.addHandler(stream_handler)

    return logger
