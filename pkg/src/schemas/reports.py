"""
Report Schemas
==============
Pydantic documents written by the command line: run manifests, classifier
verdicts, norm/evolve reports and probe reports.
"""

from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

VerdictStatus = Literal["WellPosed", "IllPosed", "Gap"]
ProbeVerdict = Literal["ConsistentWithPaper", "Inconsistent"]


class RunManifest(BaseModel):
    """Everything needed to reproduce a run."""

    model_config = ConfigDict(ser_json_inf_nan="constants")

    command: str
    config: Dict[str, Any] = Field(default_factory=dict, description="Fully resolved configuration")
    seed: int
    version: str
    runtime: Optional[float] = Field(None, description="Wall-clock seconds; null when timings are disabled")
    operations: Optional[Dict[str, Dict[str, float]]] = Field(
        None, description="Per-operation timing aggregates; null when timings are disabled"
    )
    inputs: Dict[str, str] = Field(default_factory=dict, description="path -> sha256")
    outputs: Dict[str, str] = Field(default_factory=dict, description="path -> sha256")


class Verdict(BaseModel):
    """Classifier outcome for one parameter point."""

    model_config = ConfigDict(frozen=True, ser_json_inf_nan="constants")

    status: VerdictStatus
    equation: str
    rule: str = Field(..., description="Name of the governing rule")
    sigma: float
    thresholds: Dict[str, float] = Field(default_factory=dict)
    detail: str = Field("", description="Threshold arithmetic")
    overlap: bool = Field(False, description="Both the well- and ill-posedness conditions hold")
    citation: str = Field("", description="Result the verdict rests on, e.g. 'Theorem 2'")

    def line(self) -> str:
        return f"{self.status} ({self.citation or self.rule}: {self.detail})"


class BoxNorm(BaseModel):
    k: List[int]
    box_norm: float
    weighted: float


class NormReport(BaseModel):
    model_config = ConfigDict(ser_json_inf_nan="constants")

    value: float
    s: float
    p: float
    q: float
    window: str
    k_max: int
    tail_mass: float
    breakdown: Optional[List[BoxNorm]] = None
    manifest: Optional[RunManifest] = None


class DecomposeReport(BaseModel):
    window: str
    k_max: int
    boxes: List[BoxNorm]
    files: Dict[str, str] = Field(default_factory=dict, description="box label -> field file path")
    manifest: Optional[RunManifest] = None


class EvolveReport(BaseModel):
    model_config = ConfigDict(ser_json_inf_nan="constants")

    mode: str
    status: str
    iterations: int
    times: List[float]
    norms: List[float]
    final_norm: float
    differences: List[float] = Field(default_factory=list)
    contraction_ratios: List[float] = Field(default_factory=list)
    contraction_factor: Optional[float] = None
    residual: Optional[float] = None
    files: List[str] = Field(default_factory=list)
    manifest: Optional[RunManifest] = None


class ProbePoint(BaseModel):
    """One swept parameter value and its measurements."""

    model_config = ConfigDict(ser_json_inf_nan="constants")

    parameter: str
    value: float
    measurements: Dict[str, float]


class SlopeCheck(BaseModel):
    """A fitted log–log slope against its predicted value."""

    model_config = ConfigDict(ser_json_inf_nan="constants")

    name: str
    fitted: float
    stderr: float
    intercept: float
    predicted: float
    tolerance: float
    consistent: bool

    @model_validator(mode="after")
    def check_consistency(self) -> "SlopeCheck":
        expected = abs(self.fitted - self.predicted) <= self.tolerance
        if self.consistent != expected:
            raise ValueError("consistent flag disagrees with |fitted - predicted| <= tolerance")
        return self


class ProbeReport(BaseModel):
    """Experiment record: points, fitted slopes, predictions and the verdict."""

    model_config = ConfigDict(ser_json_inf_nan="constants")

    probe: str
    points: List[ProbePoint]
    fitted_slope: float
    stderr: float
    predicted_slope: float
    tolerance: float
    checks: List[SlopeCheck]
    verdict: ProbeVerdict
    derived: Dict[str, float] = Field(default_factory=dict)
    notes: List[str] = Field(default_factory=list)
    runtime: Optional[float] = None
    manifest: Optional[RunManifest] = None

    @model_validator(mode="after")
    def check_verdict(self) -> "ProbeReport":
        expected = "ConsistentWithPaper" if all(c.consistent for c in self.checks) else "Inconsistent"
        if self.verdict != expected:
            raise ValueError(f"verdict {self.verdict} disagrees with the slope checks")
        return self

    def check(self, name: str) -> SlopeCheck:
        for item in self.checks:
            if item.name == name:
                return item
        raise KeyError(name)

    def series(self, key: str) -> List[float]:
        """Measurement `key` across all points."""
        return [point.measurements[key] for point in self.points]


class SweepRow(BaseModel):
    model_config = ConfigDict(ser_json_inf_nan="constants")

    s: float
    q: float
    inv_q: float
    sigma: float
    status: VerdictStatus
    rule: str
    overlap: bool
    fitted_exponent: Optional[float] = None
    predicted_exponent: Optional[float] = None


class SweepReport(BaseModel):
    equation: str
    rows: List[SweepRow]
    manifest: Optional[RunManifest] = None
