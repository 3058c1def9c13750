"""
Configuration Schemas
=====================
Pydantic models for solver and experiment configuration.
Defaults are materialized from the settings table so every report can embed
its fully resolved configuration.
"""

import math
from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from core.config import get_settings

EquationKind = Literal["fractional-heat", "schrodinger", "klein-gordon", "heat-iwabuchi"]
PropagatorKind = Literal["fractional-heat", "schrodinger", "kg-cos", "kg-sinc"]


def _settings():
    return get_settings()


def sigma_value(s: float, q: float, n: int) -> float:
    """s − n(1 − 1/q)."""
    return s - n * (1.0 - 1.0 / q)


def default_t_list() -> List[float]:
    points = _settings().SMOOTHING_T_POINTS
    return [float(t) for t in np.geomspace(1.0 / 128.0, 1.0 / 8.0, points)]


def default_family() -> List[int]:
    return list(range(2, _settings().SMOOTHING_FAMILY_MAX + 1))


def _check_increasing(values: List[float], name: str, minimum_length: int = 1) -> None:
    if len(values) < minimum_length:
        raise ValueError(f"{name} needs at least {minimum_length} entries")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError(f"{name} must be strictly increasing")


class ModulationParams(BaseModel):
    """The triple (s, p, q) plus the dimension n."""

    model_config = ConfigDict(frozen=True, ser_json_inf_nan="constants")

    s: float = Field(default=0.0, description="Regularity")
    p: float = Field(default=2.0, ge=1.0, description="Spatial integrability, [1, inf]")
    q: float = Field(default=2.0, ge=1.0, description="Lattice summability, [1, inf]")
    n: int = Field(default=1, ge=1, le=3)

    @field_validator("s")
    @classmethod
    def finite_regularity(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("s must be finite")
        return v

    @property
    def sigma(self) -> float:
        return sigma_value(self.s, self.q, self.n)


class EvolveConfig(BaseModel):
    """Configuration of the nonlinear solver for u_t = L u + u^k."""

    model_config = ConfigDict(ser_json_inf_nan="constants")

    power_k: int = Field(default=2, ge=2, description="Power of the nonlinearity u^k")
    T: float = Field(default=1.0, gt=0.0, description="Time horizon")
    time_nodes: int = Field(default_factory=lambda: _settings().TIME_NODES, ge=2)
    quad_nodes: int = Field(default_factory=lambda: _settings().QUAD_NODES, ge=4)
    picard_tol: float = Field(default_factory=lambda: _settings().PICARD_TOL, gt=0.0)
    picard_max_iter: int = Field(default_factory=lambda: _settings().PICARD_MAX_ITER, ge=1)
    dealias_factor: Optional[float] = Field(default=None, description="Padding factor, >= (k+1)/2")
    mode: Literal["picard-global", "etd-step"] = "picard-global"
    etd_order: Literal[1, 2] = Field(default_factory=lambda: _settings().ETD_ORDER)
    etd_substeps: int = Field(default_factory=lambda: _settings().ETD_SUBSTEPS, ge=1)
    nonlinear: bool = True
    norm_s: float = 0.0
    norm_p: float = Field(default=2.0, ge=1.0)
    norm_q: float = Field(default=2.0, ge=1.0)
    window: str = Field(default_factory=lambda: _settings().WINDOW)
    k_max: Optional[int] = None
    blowup_factor: float = Field(default_factory=lambda: _settings().BLOWUP_FACTOR, gt=1.0)

    @model_validator(mode="after")
    def resolve_dealias_factor(self) -> "EvolveConfig":
        minimum = (self.power_k + 1) / 2.0
        if self.dealias_factor is None:
            self.dealias_factor = minimum
        elif self.dealias_factor < minimum:
            raise ValueError(
                f"dealias_factor {self.dealias_factor} below (k+1)/2 = {minimum} for k={self.power_k}"
            )
        return self

    def norm_params(self, n: int) -> ModulationParams:
        return ModulationParams(s=self.norm_s, p=self.norm_p, q=self.norm_q, n=n)


class InflationConfig(BaseModel):
    """Norm-inflation experiment for the witness map of the fractional heat flow."""

    model_config = ConfigDict(ser_json_inf_nan="constants")

    case: Literal["one", "two"] = "one"
    n: int = Field(default=1, ge=1, le=3)
    k: int = Field(default=2, ge=2)
    alpha: float = Field(default=1.0, gt=0.0)
    s: float = -1.5
    q: float = Field(default=2.0, ge=1.0)
    N_list: List[int] = Field(default_factory=lambda: list(_settings().INFLATION_N_LIST))
    sep: int = Field(default_factory=lambda: _settings().INFLATION_SEP, ge=2)
    quad_nodes: int = Field(default_factory=lambda: _settings().WITNESS_QUAD_NODES, ge=1)
    near_center_radius: Optional[int] = Field(default=None, ge=0)
    window: str = Field(default_factory=lambda: _settings().WINDOW)
    dealias_factor: Optional[float] = None
    slope_tolerance: float = Field(default_factory=lambda: _settings().SLOPE_TOLERANCE, gt=0.0)
    input_tolerance: float = Field(default_factory=lambda: _settings().INPUT_SLOPE_TOLERANCE, gt=0.0)
    exponent_tolerance: float = Field(default_factory=lambda: _settings().EXPONENT_TOLERANCE, gt=0.0)

    @field_validator("case", mode="before")
    @classmethod
    def normalize_case(cls, v):
        return {"1": "one", "2": "two", 1: "one", 2: "two"}.get(v, v)

    @field_validator("N_list")
    @classmethod
    def check_n_list(cls, v: List[int]) -> List[int]:
        if any(value < 1 for value in v):
            raise ValueError("N values must be positive")
        _check_increasing(v, "N_list")
        return v

    @property
    def sigma(self) -> float:
        return sigma_value(self.s, self.q, self.n)


class SmoothingConfig(BaseModel):
    """Smoothing-rate experiment r(t) = max_N ‖U(t)f_N‖_{M^{s1}} / ‖f_N‖_{M^{s2}}."""

    model_config = ConfigDict(ser_json_inf_nan="constants")

    kind: Literal["fractional-heat", "schrodinger"] = "fractional-heat"
    alpha: float = Field(default=1.0, gt=0.0)
    s1: float = 1.0
    s2: float = 0.0
    q: float = Field(default=2.0, ge=1.0)
    n: int = Field(default=1, ge=1, le=3)
    P: int = Field(default=1, ge=1)
    family: List[int] = Field(default_factory=default_family)
    t_list: List[float] = Field(default_factory=default_t_list)
    window: str = Field(default_factory=lambda: _settings().WINDOW)
    tolerance: float = Field(default_factory=lambda: _settings().SMOOTHING_TOLERANCE, gt=0.0)

    @field_validator("family")
    @classmethod
    def check_family(cls, v: List[int]) -> List[int]:
        if any(value < 0 for value in v):
            raise ValueError("family frequencies must be nonnegative")
        _check_increasing(v, "family")
        return v

    @field_validator("t_list")
    @classmethod
    def check_times(cls, v: List[float]) -> List[float]:
        if any(t <= 0.0 for t in v):
            raise ValueError("times must be positive")
        _check_increasing(v, "t_list")
        return v

    @model_validator(mode="after")
    def check_regularities(self) -> "SmoothingConfig":
        if self.s1 < self.s2:
            raise ValueError(f"s1 must be >= s2, got s1={self.s1}, s2={self.s2}")
        return self


class ProductConfig(BaseModel):
    """
    Product-estimate ensembles.

    estimate="product":  ‖u^k‖_{M^s_{p,q}} / (‖u‖_{M^s_{p,q1}} ‖u‖^{k−1}_{M^0_{p,q2}})
    estimate="power":    ‖u^k‖_{M^{s2}_{p,q2}} / ‖u‖^k_{M^{s1}_{p,q1}}
    """

    model_config = ConfigDict(ser_json_inf_nan="constants")

    estimate: Literal["product", "power"] = "product"
    k: int = Field(default=2, ge=2)
    n: int = Field(default=1, ge=1, le=3)
    p: float = Field(default=2.0, ge=1.0)
    s: float = 0.0
    q: float = Field(default=1.0, ge=1.0)
    q1: float = Field(default=1.0, ge=1.0)
    q2: float = Field(default=1.0, ge=1.0)
    s1: float = 1.0
    s2: float = 0.0
    ensemble_size: int = Field(default_factory=lambda: _settings().ENSEMBLE_SIZE, ge=0)
    bands: List[int] = Field(default_factory=lambda: list(_settings().PRODUCT_BANDS))
    window: str = Field(default_factory=lambda: _settings().WINDOW)
    tolerance: float = Field(default_factory=lambda: _settings().PRODUCT_TOLERANCE, gt=0.0)

    @field_validator("bands")
    @classmethod
    def check_bands(cls, v: List[int]) -> List[int]:
        if any(value < 1 for value in v):
            raise ValueError("band radii must be positive")
        _check_increasing(v, "bands")
        return v

    @model_validator(mode="after")
    def check_exponents(self) -> "ProductConfig":
        k = self.k
        if self.estimate == "product":
            if self.s < 0:
                raise ValueError(f"product estimate needs s >= 0, got s={self.s}")
            lhs = 1.0 / self.q + k - 1
            rhs = 1.0 / self.q1 + (k - 1) / self.q2
            if abs(lhs - rhs) > 1e-12:
                raise ValueError(
                    f"exponent relation violated: 1/q + k - 1 = {lhs:g} but 1/q1 + (k-1)/q2 = {rhs:g}"
                )
        else:
            if self.q1 > self.q2:
                raise ValueError("power estimate needs q1 <= q2")
            if not 0.0 <= self.s2 <= self.s1 or self.s1 <= 0.0:
                raise ValueError("power estimate needs 0 <= s2 <= s1 and s1 > 0")
            sigma1 = sigma_value(self.s1, self.q1, self.n)
            gap = sigma1 - sigma_value(self.s2, self.q2, self.n)
            if not sigma1 > -gap / (k - 1):
                raise ValueError(
                    f"power estimate needs sigma(s1,q1) > -R/(k-1): sigma={sigma1:g}, R={gap:g}"
                )
        return self


class IsomorphismConfig(BaseModel):
    """Bessel-potential isomorphism check over single-mode fields."""

    model_config = ConfigDict(ser_json_inf_nan="constants")

    sigma: float = 2.0
    s: float = 0.0
    p: float = Field(default=2.0, ge=1.0)
    q: float = Field(default=2.0, ge=1.0)
    n: int = Field(default=1, ge=1, le=3)
    N_list: List[int] = Field(default_factory=lambda: [4, 8, 16, 32, 64, 128])
    window: str = Field(default_factory=lambda: _settings().WINDOW)
    tolerance: float = Field(default_factory=lambda: _settings().ISOMORPHISM_TOLERANCE, gt=0.0)

    @field_validator("N_list")
    @classmethod
    def check_n_list(cls, v: List[int]) -> List[int]:
        _check_increasing(v, "N_list")
        return v


class DecayConfig(BaseModel):
    """Per-box decay sweep of the fractional heat semigroup."""

    alpha: float = Field(default=1.0, gt=0.0)
    n: int = Field(default=1, ge=1, le=3)
    t_list: List[float] = Field(default_factory=lambda: [0.01, 0.1, 1.0])
    k_list: List[int] = Field(default_factory=lambda: [2, 4, 8, 16, 32, 64])
    ensemble_size: int = Field(default_factory=lambda: _settings().DECAY_ENSEMBLE_SIZE, ge=1)

    @field_validator("k_list")
    @classmethod
    def check_k_list(cls, v: List[int]) -> List[int]:
        if any(value < 2 for value in v):
            raise ValueError("box indices must satisfy |k| >= 2")
        return v

    @field_validator("t_list")
    @classmethod
    def check_times(cls, v: List[float]) -> List[float]:
        if any(t < 0.0 for t in v):
            raise ValueError("times must be nonnegative")
        return v


class SweepConfig(BaseModel):
    """Phase-diagram sweep over (s, q)."""

    model_config = ConfigDict(ser_json_inf_nan="constants")

    equation: EquationKind = "fractional-heat"
    n: int = Field(default=1, ge=1, le=3)
    k: int = Field(default=2, ge=2)
    alpha: float = Field(default=1.0, gt=0.0)
    s_min: float = -3.0
    s_max: float = 1.0
    s_points: int = Field(default=41, ge=1)
    q_values: List[float] = Field(default_factory=lambda: [1.0, 2.0, 4.0])
    measure: bool = False
    measure_stride: int = Field(default=4, ge=1, description="Subgrid stride for --measure")
    measure_N_list: List[int] = Field(default_factory=lambda: [8, 16, 32])

    @field_validator("q_values")
    @classmethod
    def check_q_values(cls, v: List[float]) -> List[float]:
        if not v:
            raise ValueError("q range is empty")
        if any(q < 1.0 or math.isinf(q) for q in v):
            raise ValueError("q values must lie in [1, inf)")
        return v

    @model_validator(mode="after")
    def check_range(self) -> "SweepConfig":
        if not (math.isfinite(self.s_min) and math.isfinite(self.s_max)):
            raise ValueError("s range must be finite")
        if self.s_max < self.s_min:
            raise ValueError("s range is empty")
        return self

    def s_values(self) -> List[float]:
        if self.s_points == 1 or self.s_max == self.s_min:
            return [self.s_min]
        return [float(s) for s in np.linspace(self.s_min, self.s_max, self.s_points)]
