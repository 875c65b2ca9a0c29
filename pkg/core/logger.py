import logging
import sys
from pathlib import Path
from typing import Any, Optional, Union

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


class StructuredLogger:
    """Logger that appends `key=value` context to every message."""

    def __init__(
        self,
        name: str,
        log_level: str = "INFO",
        log_dir: Optional[Path] = None,
        context: Optional[dict[str, Any]] = None,
    ):
        self.name = name
        self.logger = logging.getLogger(name)
        self.logger.setLevel(getattr(logging, log_level.upper()))
        self.context = dict(context or {})

        if log_dir and not any(isinstance(h, logging.FileHandler) for h in self.logger.handlers):
            log_dir = Path(log_dir)
            log_dir.mkdir(parents=True, exist_ok=True)
            file_handler = logging.FileHandler(log_dir / f"{name}.log")
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(logging.Formatter(fmt=LOG_FORMAT, datefmt=DATE_FORMAT))
            self.logger.addHandler(file_handler)

    def bind(self, **context: Any) -> "StructuredLogger":
        child = StructuredLogger.__new__(StructuredLogger)
        child.name = self.name
        child.logger = self.logger
        child.context = {**self.context, **context}
        return child

    def debug(self, message: str, **kwargs: Any) -> None:
        self._log(logging.DEBUG, message, **kwargs)

    def info(self, message: str, **kwargs: Any) -> None:
        self._log(logging.INFO, message, **kwargs)

    def warning(self, message: str, **kwargs: Any) -> None:
        self._log(logging.WARNING, message, **kwargs)

    def error(self, message: str, **kwargs: Any) -> None:
        self._log(logging.ERROR, message, **kwargs)

    def _log(self, level: int, message: str, **kwargs: Any) -> None:
        fields = {**self.context, **kwargs}
        if fields:
            extra_info = " | ".join(f"{k}={_format(v)}" for k, v in fields.items())
            message = f"{message} | {extra_info}"
        self.logger.log(level, message)


def _format(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def setup_logging(log_level: str = "INFO", log_dir: Optional[Union[str, Path]] = None) -> None:
    """Diagnostics go to stderr so stdout stays free for data."""
    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_dir:
        Path(log_dir).mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(Path(log_dir) / "dice.log"))

    logging.basicConfig(
        level=getattr(logging, log_level.upper()),
        format=LOG_FORMAT,
        datefmt=DATE_FORMAT,
        handlers=handlers,
        force=True,
    )
