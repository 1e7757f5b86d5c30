"""Logging configuration for the application"""
import logging
import os
from datetime import datetime
from pathlib import Path
from typing import Optional

APP_LOGGERS = ('__main__', 'cli', 'SpecMath', 'Transforms', 'SimGroup', 'Completion', 'FileFormats', 'utils')

_configured = False


class AppFilter(logging.Filter):
    def filter(self, record):
        return record.name.startswith(APP_LOGGERS)


def setup_logging(level: Optional[str] = None, log_dir: Optional[Path] = None, debug_file: Optional[str] = "debug.log"):
    """Setup application-wide logging configuration"""
    global _configured
    root_logger = logging.getLogger()
    level_name = (level or os.getenv('DEBUG_MODE', 'INFO')).upper()
    root_logger.setLevel(getattr(logging, level_name, logging.INFO))
    if _configured:
        return root_logger

    # Set third-party loggers to higher level to reduce noise
    logging.getLogger('PIL').setLevel(logging.WARNING)
    logging.getLogger('numexpr').setLevel(logging.WARNING)
    logging.getLogger('matplotlib').setLevel(logging.WARNING)

    detailed_formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    if log_dir is not None:
        log_dir = Path(log_dir)
        log_dir.mkdir(parents=True, exist_ok=True)

        if debug_file:
            debug_handler = logging.FileHandler(log_dir / debug_file)
            debug_handler.setFormatter(detailed_formatter)
            debug_handler.setLevel(logging.DEBUG)
            root_logger.addHandler(debug_handler)

        # Daily log only carries our own modules
        today = datetime.now().strftime('%Y-%m-%d')
        daily_handler = logging.FileHandler(log_dir / f'{today}.log')
        daily_handler.setFormatter(detailed_formatter)
        daily_handler.setLevel(logging.INFO)
        daily_handler.addFilter(AppFilter())
        root_logger.addHandler(daily_handler)

    console_handler = logging.StreamHandler()
    console_handler.setFormatter(detailed_formatter)
    console_handler.setLevel(logging.INFO)
    root_logger.addHandler(console_handler)

    _configured = True
    return root_logger
