"""
Core
====
Numerical substrate (grids, fields, transforms, L^p quadrature) and the
shared infrastructure: settings, logging, exceptions, error handling,
validators and timing metrics.
"""

from .config import Settings, get_settings
from .exceptions import ModspaceError
from .field import Field, SpectralField, fft_forward, fft_inverse, lp_norm
from .grid import GridSpec, make_grid

__all__ = [
    "Settings",
    "get_settings",
    "ModspaceError",
    "GridSpec",
    "make_grid",
    "Field",
    "SpectralField",
    "fft_forward",
    "fft_inverse",
    "lp_norm",
]
