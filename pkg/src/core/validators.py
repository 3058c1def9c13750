"""
Input Validators
================
Centralized validation for numerical parameters and file inputs.
"""

import math
from pathlib import Path
from typing import Sequence

from .exceptions import FieldFileNotFoundError, ValidationError


class ExponentValidator:
    """Validate integrability/summability exponents (p, q)."""

    @staticmethod
    def validate(value: float, name: str = "p") -> float:
        """
        Validate an exponent in [1, inf].

        Raises:
            ValidationError: If value is NaN or below 1
        """
        try:
            value = float(value)
        except (TypeError, ValueError):
            raise ValidationError(name, f"exponent must be a number, got {value!r}")
        if math.isnan(value) or value < 1.0:
            raise ValidationError(name, f"exponent must lie in [1, inf], got {value}")
        return value

    @staticmethod
    def validate_finite(value: float, name: str = "q") -> float:
        """Validate an exponent in [1, inf)."""
        value = ExponentValidator.validate(value, name)
        if math.isinf(value):
            raise ValidationError(name, "exponent must be finite here")
        return value


class PowerValidator:
    """Validate the power k of the nonlinearity u^k."""

    @staticmethod
    def validate(k: int) -> int:
        if isinstance(k, bool) or int(k) != k or k < 2:
            raise ValidationError("k", f"power must be an integer >= 2, got {k}")
        return int(k)


class DimensionValidator:
    """Validate the spatial dimension."""

    @staticmethod
    def validate(n: int) -> int:
        if isinstance(n, bool) or int(n) != n or not 1 <= n <= 3:
            raise ValidationError("n", f"dimension must be 1, 2 or 3, got {n}")
        return int(n)


class PositiveValidator:
    """Validate strictly positive reals (alpha, horizons, tolerances)."""

    @staticmethod
    def validate(value: float, name: str) -> float:
        value = float(value)
        if not math.isfinite(value) or value <= 0.0:
            raise ValidationError(name, f"must be a positive finite number, got {value}")
        return value

    @staticmethod
    def validate_nonnegative(value: float, name: str) -> float:
        value = float(value)
        if not math.isfinite(value) or value < 0.0:
            raise ValidationError(name, f"must be a nonnegative finite number, got {value}")
        return value


class CountValidator:
    """Validate node counts and list lengths."""

    @staticmethod
    def validate(value: int, name: str, minimum: int = 1) -> int:
        if isinstance(value, bool) or int(value) != value or value < minimum:
            raise ValidationError(name, f"must be an integer >= {minimum}, got {value}")
        return int(value)

    @staticmethod
    def validate_increasing(values: Sequence[float], name: str, minimum_length: int = 1) -> list:
        values = list(values)
        if len(values) < minimum_length:
            raise ValidationError(name, f"needs at least {minimum_length} entries, got {len(values)}")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValidationError(name, f"must be strictly increasing, got {values}")
        return values


class FilePathValidator:
    """Validate field file paths."""

    @staticmethod
    def validate(path: str, must_exist: bool = True) -> Path:
        """
        Validate and normalize a file path.

        Raises:
            ValidationError: If path is empty
            FieldFileNotFoundError: If path doesn't exist (when must_exist=True)
        """
        if not path:
            raise ValidationError("path", "Path cannot be empty")
        resolved = Path(path).expanduser()
        if must_exist and not resolved.is_file():
            raise FieldFileNotFoundError(str(resolved))
        return resolved
