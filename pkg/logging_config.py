"""
logging_config.py

Console logging on stderr plus an optional TimedRotatingFileHandler for run logs.
"""

import logging
import os
from logging.handlers import TimedRotatingFileHandler
from pathlib import Path
from typing import Optional, Union


def configure_logging(log_dir: Optional[str] = None, level: Union[int, str] = logging.INFO):
    root = logging.getLogger()
    if root.handlers:
        return  # already configured

    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.INFO
    root.setLevel(level)

    fmt = logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s")

    # Console handler; stdout carries report data
    ch = logging.StreamHandler()
    ch.setFormatter(fmt)
    root.addHandler(ch)

    log_dir = log_dir or os.environ.get("ENTPOWER_LOG_DIR")
    if not log_dir:
        return

    log_path = Path(log_dir)
    log_path.mkdir(parents=True, exist_ok=True)
    # Rotating log file per day, keep 14 days
    fh = TimedRotatingFileHandler(
        str(log_path / "entpower.log"), when="midnight", interval=1, backupCount=14, utc=True
    )
    fh.setFormatter(fmt)
    root.addHandler(fh)


__all__ = ["configure_logging"]
