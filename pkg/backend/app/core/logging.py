"""
Logging configuration for the toolkit

Results go to stdout, so every handler here writes to stderr or a file.
"""

import logging
import logging.config
import sys
from pathlib import Path
from typing import Optional

from app.core.config import get_settings


def setup_logging(level: Optional[str] = None):
    """Setup toolkit logging configuration"""
    settings = get_settings()
    level = (level or settings.LOG_LEVEL).upper()

    handlers = {
        "console": {
            "class": "logging.StreamHandler",
            "level": level,
            "formatter": "default",
            "stream": sys.stderr
        }
    }
    active = ["console"]

    if settings.LOG_FILE:
        Path(settings.LOG_FILE).parent.mkdir(parents=True, exist_ok=True)
        handlers["file"] = {
            "class": "logging.handlers.RotatingFileHandler",
            "level": "DEBUG",
            "formatter": "detailed",
            "filename": settings.LOG_FILE,
            "maxBytes": 10485760,  # 10MB
            "backupCount": 5
        }
        active.append("file")

    logging_config = {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "default": {
                "format": settings.LOG_FORMAT,
                "datefmt": "%Y-%m-%d %H:%M:%S"
            },
            "detailed": {
                "format": "%(asctime)s - %(name)s - %(levelname)s - %(module)s - %(funcName)s:%(lineno)d - %(message)s",
                "datefmt": "%Y-%m-%d %H:%M:%S"
            }
        },
        "handlers": handlers,
        "loggers": {
            "": {  # root logger
                "level": "WARNING",
                "handlers": active
            },
            "app": {
                "level": level,
                "handlers": active,
                "propagate": False
            },
            "concurrent.futures": {
                "level": "WARNING",
                "handlers": active,
                "propagate": False
            }
        }
    }

    logging.config.dictConfig(logging_config)
