"""
Structured Logging
==================
One JSON object per record on stderr; stdout is reserved for CSV and report
documents. Solvers log iteration progress at DEBUG and convergence or
blow-up at INFO/WARNING; probes log each finished point and the verdict.
"""

import json
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Mapping, Optional

LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class StructuredFormatter(logging.Formatter):
    """Renders a record and its `context` mapping as a JSON line."""

    def format(self, record: logging.LogRecord) -> str:
        payload = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
        }
        context = getattr(record, "context", None)
        if context:
            payload["context"] = context
        if record.exc_info:
            payload["exception"] = self.formatException(record.exc_info)
        # numpy scalars and paths fall back to str
        return json.dumps(payload, ensure_ascii=False, default=str)


class PlainFormatter(logging.Formatter):
    """Human-readable variant used when LOG_JSON is off."""

    def __init__(self):
        super().__init__("%(asctime)s %(levelname)-7s %(name)s: %(message)s", datefmt="%H:%M:%S")

    def format(self, record: logging.LogRecord) -> str:
        text = super().format(record)
        context = getattr(record, "context", None)
        if context:
            text += " " + " ".join(f"{key}={value}" for key, value in context.items())
        return text


def _level(name: str) -> int:
    name = name.upper()
    return getattr(logging, name) if name in LEVELS else logging.WARNING


class ModspaceLogger:
    """
    Thin wrapper over a stdlib logger taking an optional `context` mapping
    on every call.
    """

    def __init__(
        self,
        name: str = "modspace",
        level: str = "WARNING",
        log_file: Optional[Path] = None,
        use_json: bool = True,
    ):
        self.logger = logging.getLogger(name)
        self.logger.setLevel(_level(level))
        self.logger.handlers.clear()
        self.logger.propagate = False

        stream = logging.StreamHandler(sys.stderr)
        stream.setFormatter(StructuredFormatter() if use_json else PlainFormatter())
        self.logger.addHandler(stream)

        if log_file:
            log_file = Path(log_file)
            log_file.parent.mkdir(parents=True, exist_ok=True)
            handler = logging.FileHandler(log_file, encoding="utf-8")
            handler.setFormatter(StructuredFormatter())
            self.logger.addHandler(handler)

    def _log(self, level: int, message: str, context: Optional[Mapping[str, Any]], exc_info: bool) -> None:
        extra = {"context": dict(context)} if context else None
        self.logger.log(level, message, extra=extra, exc_info=exc_info)

    def debug(self, message: str, context: Optional[Mapping[str, Any]] = None) -> None:
        self._log(logging.DEBUG, message, context, False)

    def info(self, message: str, context: Optional[Mapping[str, Any]] = None) -> None:
        self._log(logging.INFO, message, context, False)

    def warning(self, message: str, context: Optional[Mapping[str, Any]] = None) -> None:
        self._log(logging.WARNING, message, context, False)

    def error(self, message: str, context: Optional[Mapping[str, Any]] = None, exc_info: bool = False) -> None:
        self._log(logging.ERROR, message, context, exc_info)

    def log_performance(self, operation: str, duration_ms: float, **fields: Any) -> None:
        self.debug(
            f"Performance: {operation}",
            context={"operation": operation, "duration_ms": round(duration_ms, 3), **fields},
        )


_logger_instance: Optional[ModspaceLogger] = None


def get_logger() -> ModspaceLogger:
    """Process-wide logger configured from Settings on first use."""
    global _logger_instance
    if _logger_instance is None:
        from core.config import get_settings

        settings = get_settings()
        _logger_instance = ModspaceLogger(
            level=settings.LOG_LEVEL,
            log_file=settings.LOG_FILE,
            use_json=settings.LOG_JSON,
        )
    return _logger_instance


def set_log_level(level: str) -> None:
    """Used by the CLI -v/-vv flags."""
    if level.upper() not in LEVELS:
        raise ValueError(f"unknown log level '{level}'")
    get_logger().logger.setLevel(_level(level))

