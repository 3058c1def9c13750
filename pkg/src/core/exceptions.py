"""
Custom Exceptions
=================
Domain-specific exceptions for better error handling.

Every error carries the process exit code the CLI reports for it.
"""

from typing import Any, Dict, Optional


class ModspaceError(Exception):
    """Base exception for all modspace errors."""

    code_name = "error"

    def __init__(
        self,
        message: str,
        exit_code: int = 1,
        detail: Optional[str] = None
    ):
        self.message = message
        self.exit_code = exit_code
        self.detail = detail or message
        super().__init__(self.message)


class ValidationError(ModspaceError):
    """Raised when input validation fails."""

    code_name = "invalid-parameter"

    def __init__(self, field: str, message: str):
        super().__init__(
            message=f"Validation error: {message}",
            exit_code=2,
            detail=f"Invalid {field}: {message}"
        )
        self.field = field


class GridError(ModspaceError):
    """Raised when a grid specification is rejected."""

    code_name = "grid"

    def __init__(self, message: str):
        super().__init__(message=message, exit_code=3, detail=f"Grid error: {message}")


class GridMismatchError(ModspaceError):
    """Raised when two operands live on different grids."""

    code_name = "grid-mismatch"

    def __init__(self, left: Any, right: Any):
        super().__init__(
            message="Grid mismatch",
            exit_code=3,
            detail=f"Operands live on different grids: {left} vs {right}"
        )
        self.left = left
        self.right = right


class FieldFileNotFoundError(ModspaceError):
    """Raised when a field file does not exist."""

    code_name = "file-not-found"

    def __init__(self, path: str):
        super().__init__(
            message=f"File not found: {path}",
            exit_code=4,
            detail=f"The path '{path}' does not exist"
        )
        self.path = path


class FieldFileError(ModspaceError):
    """Raised when a field file is malformed."""

    code_name = "malformed-file"

    def __init__(self, path: str, reason: str):
        super().__init__(
            message=f"Malformed field file: {path}",
            exit_code=4,
            detail=f"Cannot load '{path}': {reason}"
        )
        self.path = path
        self.reason = reason


class DecompositionError(ModspaceError):
    """Raised when the active box range does not fit the grid."""

    code_name = "decomposition"

    def __init__(self, message: str):
        super().__init__(message=message, exit_code=3, detail=f"Decomposition error: {message}")


class HeadroomError(ModspaceError):
    """Raised when a nonlinear product would alias into retained modes."""

    code_name = "headroom"

    def __init__(self, band: int, power: int, padded: int, required: int):
        super().__init__(
            message="Insufficient dealiasing headroom",
            exit_code=3,
            detail=(
                f"Band index {band} raised to power {power} needs at least "
                f"{required} padded samples per axis, got {padded}"
            )
        )
        self.band = band
        self.power = power


class PropagatorError(ModspaceError):
    """Raised for invalid propagator usage (e.g. backward heat flow)."""

    code_name = "propagator"

    def __init__(self, message: str):
        super().__init__(message=message, exit_code=2, detail=f"Propagator error: {message}")


class ConvergenceError(ModspaceError):
    """Raised when the Picard iteration does not converge."""

    code_name = "no-convergence"

    def __init__(self, iterations: int, last_difference: float, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(
            message="Picard iteration did not converge",
            exit_code=5,
            detail=(
                f"No convergence after {iterations} iterations "
                f"(last difference {last_difference:.3e}); reduce T or the data size"
            )
        )
        self.iterations = iterations
        self.last_difference = last_difference
        self.diagnostics = diagnostics or {}


class ProbeError(ModspaceError):
    """Raised when an experiment configuration cannot be run."""

    code_name = "probe"

    def __init__(self, message: str):
        super().__init__(message=message, exit_code=2, detail=f"Probe error: {message}")


class RegressionError(ModspaceError):
    """Raised when a slope fit is impossible."""

    code_name = "regression"

    def __init__(self, message: str):
        super().__init__(message=message, exit_code=2, detail=f"Regression error: {message}")
