"""
Logging setup for the gradedproj CLI.

Command output owns stdout, so every handler installed here writes to stderr
or to a JSON-lines file.
"""

import json
import logging
import os
import sys
from datetime import datetime, timezone
from typing import Optional

LOG_FILE_NAME = "gradedproj.log"

# Attributes callers may attach with `extra=` (sweeps tag failures with these)
CONTEXT_FIELDS = ("lie_type", "weight", "check")


class JSONFormatter(logging.Formatter):
    """One JSON object per record, with any computation context attached."""

    def format(self, record):
        entry = {
            "timestamp": datetime.fromtimestamp(record.created, tz=timezone.utc).isoformat(),
            "level": record.levelname,
            "name": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "funcName": record.funcName,
            "lineno": record.lineno,
        }
        entry.update({k: getattr(record, k) for k in CONTEXT_FIELDS if hasattr(record, k)})
        if record.exc_info:
            entry["exc_info"] = self.formatException(record.exc_info)
        return json.dumps(entry, default=str)


def _json_file_handler(log_dir: str) -> logging.Handler:
    os.makedirs(log_dir, exist_ok=True)
    handler = logging.FileHandler(os.path.join(log_dir, LOG_FILE_NAME), encoding="utf-8")
    handler.setFormatter(JSONFormatter())
    return handler


def setup_logging(level: str = "WARNING", log_dir: Optional[str] = None) -> None:
    """Reset the root logger: terse stderr console output plus an optional JSON file.

    The file handler is added only when `log_dir` or GRADEDPROJ_LOG_DIR is set.
    """
    root = logging.getLogger()
    root.setLevel(level.upper())
    root.handlers.clear()

    console = logging.StreamHandler(sys.stderr)
    console.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    root.addHandler(console)

    log_dir = log_dir or os.getenv("GRADEDPROJ_LOG_DIR")
    if log_dir:
        root.addHandler(_json_file_handler(log_dir))
        logging.getLogger(__name__).info(f"JSON log records go to {os.path.join(log_dir, LOG_FILE_NAME)}")
