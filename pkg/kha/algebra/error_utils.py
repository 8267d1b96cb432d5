import logging
from typing import Optional, Dict, Any


class KhaError(Exception):
    """Base class for every domain failure raised by the library."""


class SchemaError(KhaError):
    """Malformed JSON input; ``path`` locates the offending node."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class QuiverError(KhaError):
    pass


class PotentialError(KhaError):
    pass


class StabilityError(KhaError):
    pass


class UnsupportedStabilityError(StabilityError):
    pass


class VarSpaceMismatch(KhaError):
    pass


class NotDivisibleError(KhaError):
    pass


class PolynomialityError(KhaError):
    pass


class SymmetryError(KhaError):
    pass


class FixedLocusError(KhaError):
    pass


class PreconditionError(KhaError):
    pass


class ErrorHandler:
    """Centralized error reporting for the command-line boundary."""

    @staticmethod
    def describe(error: Exception) -> Dict[str, Any]:
        payload = {"error": type(error).__name__, "message": str(error)}
        path = getattr(error, "path", None)
        if path:
            payload["path"] = path
        return payload

    @staticmethod
    def log_and_return_error(operation: str, error: Exception,
                             path: Optional[str] = None) -> Dict[str, Any]:
        """Logs error and returns the standardized error payload."""
        logging.error(f"Error in {operation}: {error}")
        logging.debug(f"Traceback for {operation}", exc_info=True)
        response = ErrorHandler.describe(error)
        response["operation"] = operation
        if path:
            response["input"] = path
        return response
