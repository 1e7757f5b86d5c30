"""Error handling utilities"""
import logging
from functools import wraps
from typing import Callable

logger = logging.getLogger(__name__)


class SimEquivError(Exception):
    """Base exception for numerical and pipeline errors"""
    def __init__(self, message: str, context: dict = None):
        super().__init__(message)
        self.message = message
        self.context = context or {}

    def to_record(self) -> dict:
        """Machine-readable form used by the CLI error line"""
        return {
            "error": type(self).__name__,
            "message": self.message,
            "context": {k: _plain(v) for k, v in self.context.items()},
        }


class PoleError(SimEquivError):
    """Gamma evaluated at (or next to) a non-positive integer"""
    pass


class DomainError(SimEquivError):
    """Argument outside the domain of an operation"""
    pass


class NyquistError(SimEquivError):
    """Angular sampling too coarse for the requested frequencies"""
    pass


class ShapeMismatch(SimEquivError):
    """Operands with inconsistent grids or frequency configurations"""
    pass


class DivergenceError(SimEquivError):
    """Power iteration norm left the representable range"""
    pass


class ConfigError(SimEquivError):
    """Experiment configuration could not be parsed or validated"""
    pass


def _plain(value):
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return str(value)


def handle_numeric_errors(func: Callable) -> Callable:
    """Decorator for top-level operations: log and re-raise domain errors, wrap the rest"""
    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except SimEquivError as e:
            logger.error(f"{type(e).__name__} in {func.__name__}: {e}", extra={"context": e.context})
            raise
        except Exception as e:
            logger.error(f"Unexpected error in {func.__name__}: {e}", exc_info=True)
            raise SimEquivError(f"Processing error: {e}", {"operation": func.__name__}) from e

    return wrapper
