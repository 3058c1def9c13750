"""
Schemas Module
==============
Pydantic models for configuration, reports and field files.
"""

from .configs import (
    DecayConfig,
    EvolveConfig,
    InflationConfig,
    IsomorphismConfig,
    ModulationParams,
    ProductConfig,
    SmoothingConfig,
    SweepConfig,
)
from .field_file import FieldFile
from .reports import (
    BoxNorm,
    DecomposeReport,
    EvolveReport,
    NormReport,
    ProbePoint,
    ProbeReport,
    RunManifest,
    SlopeCheck,
    SweepReport,
    SweepRow,
    Verdict,
)

__all__ = [
    # Configuration
    "ModulationParams",
    "EvolveConfig",
    "InflationConfig",
    "SmoothingConfig",
    "ProductConfig",
    "IsomorphismConfig",
    "DecayConfig",
    "SweepConfig",
    # Reports
    "RunManifest",
    "Verdict",
    "BoxNorm",
    "NormReport",
    "DecomposeReport",
    "EvolveReport",
    "ProbePoint",
    "SlopeCheck",
    "ProbeReport",
    "SweepRow",
    "SweepReport",
    # Files
    "FieldFile",
]
