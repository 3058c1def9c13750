"""
Pytest Configuration
====================
Shared fixtures and configuration for all tests.
"""

import sys
from pathlib import Path

# Add src to path for imports
src_path = Path(__file__).parent.parent / "src"
if str(src_path) not in sys.path:
    sys.path.insert(0, str(src_path))

import json

import numpy as np
import pytest

from core.field import Field, random_band_limited, single_mode
from core.grid import GridSpec, make_grid
from core.logger import get_logger

# bind the log handler to the real stderr before any CliRunner swaps streams
get_logger()

# Common fixtures
@pytest.fixture
def grid16() -> GridSpec:
    """(n=1, P=1, M=16)."""
    return make_grid(1, 1, 16)


@pytest.fixture
def grid64() -> GridSpec:
    """(n=1, P=1, M=64)."""
    return make_grid(1, 1, 64)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def mode3(grid16) -> Field:
    """e^{i3x} on the 16-point grid."""
    return single_mode(grid16, 3)


def _relative_error(a: np.ndarray, b: np.ndarray) -> float:
    scale = max(np.linalg.norm(np.ravel(b)), 1e-300)
    return float(np.linalg.norm(np.ravel(a) - np.ravel(b)) / scale)


def _write_field_file(path: Path, field: Field) -> Path:
    document = {
        "n": field.grid.n,
        "P": field.grid.P,
        "M": field.grid.M,
        "samples": [[float(z.real), float(z.imag)] for z in field.samples.reshape(-1)],
    }
    path.write_text(json.dumps(document), encoding="utf-8")
    return path


@pytest.fixture
def band_limited():
    """Random complex field with coefficients on |ξ|_∞ ≤ radius."""
    return random_band_limited


@pytest.fixture
def relative_error():
    return _relative_error


@pytest.fixture
def write_field_file():
    """Write a field file by hand, independent of the service."""
    return _write_field_file
