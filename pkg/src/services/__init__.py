"""
Services Module
===============
Windows, modulation norms, propagators, solvers, probes and the
classifier, plus field-file IO and the probe cache.
"""

from .cache_service import ProbeCache, get_probe_cache
from .classifier import classify, classify_grid
from .field_file_service import FieldFileService, get_field_file_service
from .modulation import decompose, modulation_norm, modulation_norm_report
from .propagator import PropagatorSpec, make_propagator, propagate
from .solver import solve

__all__ = [
    "ProbeCache",
    "get_probe_cache",
    "classify",
    "classify_grid",
    "FieldFileService",
    "get_field_file_service",
    "decompose",
    "modulation_norm",
    "modulation_norm_report",
    "PropagatorSpec",
    "make_propagator",
    "propagate",
    "solve",
]
