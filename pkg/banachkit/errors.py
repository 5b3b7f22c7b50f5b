"""
Exception hierarchy for banachkit.

Every error derives from the builtin type callers would naturally catch
(ValueError for bad input, RuntimeError for evaluation failures), so code that
only knows the builtins keeps working.
"""
from typing import Any, Dict, List, Optional


class BanachkitError(Exception):
    """Base class for all banachkit errors"""


class InvalidParameterError(BanachkitError, ValueError):
    """A parameter violates its documented precondition"""


class SchedulePolicyError(InvalidParameterError):
    """An m-schedule is inconsistent with the requested truncation"""


class SpaceSyntaxError(BanachkitError, ValueError):
    """Space expression text could not be parsed"""

    def __init__(self, message: str, position: int, expected: Optional[List[str]] = None):
        super().__init__(f"{message} (at position {position})")
        self.position = position
        self.expected = expected or []


class SpaceSemanticError(BanachkitError, ValueError):
    """Space expression parsed but a node parameter is out of range"""

    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class SizeLimitError(BanachkitError, RuntimeError):
    """An exhaustive search was asked to go beyond its configured cap"""

    def __init__(self, message: str, size: int, cap: int):
        super().__init__(message)
        self.size = size
        self.cap = cap


class SolverError(BanachkitError, RuntimeError):
    """A numerical solver did not converge within its iteration cap"""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class EvaluationError(BanachkitError, RuntimeError):
    """Size or solver failure annotated with the space-node path it happened under"""

    def __init__(self, message: str, path: str, cause: Exception):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.cause = cause

    @property
    def is_size_error(self) -> bool:
        return isinstance(self.cause, SizeLimitError)
