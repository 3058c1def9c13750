"""
Error Handler
=============
Centralized error handling for the command line.
Turns any exception into an exit code plus a single diagnostic line with a
machine-parsable prefix: ``modspace-error[<code>]: <detail>``.
"""

from dataclasses import dataclass
from typing import Any, Dict, Optional

import pydantic

from core.exceptions import (
    ConvergenceError,
    FieldFileNotFoundError,
    ModspaceError,
    ValidationError,
)
from core.logger import get_logger

DIAGNOSTIC_PREFIX = "modspace-error"


@dataclass(frozen=True)
class Diagnostic:
    """Exit code and one-line message for a failed command."""
    exit_code: int
    code_name: str
    detail: str

    @property
    def line(self) -> str:
        detail = " ".join(self.detail.split())
        return f"{DIAGNOSTIC_PREFIX}[{self.code_name}]: {detail}"


class ErrorHandler:
    """
    Centralized error handler.

    Provides consistent error logging and diagnostic formatting.
    """

    def __init__(self):
        self.logger = get_logger()

    def handle_validation_error(
        self,
        error: ValidationError,
        context: Optional[Dict[str, Any]] = None
    ) -> Diagnostic:
        """
        Handle validation errors.

        Args:
            error: ValidationError instance
            context: Optional context for logging

        Returns:
            Diagnostic with the usage exit code
        """
        self.logger.warning(
            f"Validation error: {error.detail}",
            context={**(context or {}), "field": error.field},
        )
        return Diagnostic(error.exit_code, error.code_name, error.detail)

    def handle_schema_error(
        self,
        error: pydantic.ValidationError,
        context: Optional[Dict[str, Any]] = None
    ) -> Diagnostic:
        """
        Handle pydantic validation errors raised by config documents.

        Args:
            error: pydantic ValidationError
            context: Optional context for logging

        Returns:
            Diagnostic with the usage exit code
        """
        first = error.errors()[0] if error.errors() else {"loc": (), "msg": str(error)}
        location = ".".join(str(part) for part in first.get("loc", ())) or "config"
        detail = f"Invalid {location}: {first.get('msg', 'invalid value')}"
        self.logger.warning(f"Schema error: {detail}", context=context or {})
        return Diagnostic(2, ValidationError.code_name, detail)

    def handle_convergence_error(
        self,
        error: ConvergenceError,
        context: Optional[Dict[str, Any]] = None
    ) -> Diagnostic:
        """Handle Picard non-convergence."""
        self.logger.warning(
            f"Convergence failure: {error.detail}",
            context={**(context or {}), "iterations": error.iterations},
        )
        return Diagnostic(error.exit_code, error.code_name, error.detail)

    def handle_domain_error(
        self,
        error: ModspaceError,
        context: Optional[Dict[str, Any]] = None
    ) -> Diagnostic:
        """Handle any other modspace error."""
        self.logger.error(f"{error.message}: {error.detail}", context=context or {})
        return Diagnostic(error.exit_code, error.code_name, error.detail)

    def handle_generic_error(
        self,
        error: Exception,
        context: Optional[Dict[str, Any]] = None
    ) -> Diagnostic:
        """
        Handle unexpected errors.

        Args:
            error: Exception instance
            context: Optional context for logging

        Returns:
            Diagnostic with exit code 1
        """
        self.logger.error(
            f"Unexpected error: {error}",
            context=context or {},
            exc_info=True
        )
        if isinstance(error, OSError):
            return Diagnostic(4, "io", str(error))
        return Diagnostic(1, "internal", f"{type(error).__name__}: {error}")

    def handle(
        self,
        error: Exception,
        context: Optional[Dict[str, Any]] = None
    ) -> Diagnostic:
        """
        Handle any error type.

        Automatically routes to the appropriate handler based on error type.
        """
        if isinstance(error, ValidationError):
            return self.handle_validation_error(error, context)
        if isinstance(error, pydantic.ValidationError):
            return self.handle_schema_error(error, context)
        if isinstance(error, ConvergenceError):
            return self.handle_convergence_error(error, context)
        if isinstance(error, FieldFileNotFoundError):
            self.logger.warning(f"File not found: {error.path}", context=context or {})
            return Diagnostic(error.exit_code, error.code_name, error.detail)
        if isinstance(error, ModspaceError):
            return self.handle_domain_error(error, context)
        return self.handle_generic_error(error, context)


# Singleton instance
_error_handler: Optional[ErrorHandler] = None


def get_error_handler() -> ErrorHandler:
    """Get or create ErrorHandler instance."""
    global _error_handler
    if _error_handler is None:
        _error_handler = ErrorHandler()
    return _error_handler


def handle_error(
    error: Exception,
    context: Optional[Dict[str, Any]] = None
) -> Diagnostic:
    """
    Convenience function to handle errors.

    Args:
        error: Exception instance
        context: Optional context for logging

    Returns:
        Diagnostic
    """
    return get_error_handler().handle(error, context)
