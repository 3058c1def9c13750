"""
Field File Schema
=================
UTF-8 JSON document holding one field:

    {"n": 1, "P": 1, "M": 16, "samples": [[re, im], ...]}

samples are row-major over the axes and must number exactly M^n.
"""

from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class FieldFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: int = Field(..., ge=1, le=3, description="Spatial dimension")
    P: int = Field(..., ge=1, description="Period multiplier, box side 2πP")
    M: int = Field(..., ge=8, description="Samples per axis (even)")
    samples: List[List[float]] = Field(..., description="Row-major [re, im] pairs")
    label: Optional[str] = Field(None, description="Free-form tag, e.g. a box index or time")

    @field_validator("M")
    @classmethod
    def even_samples(cls, v: int) -> int:
        if v % 2:
            raise ValueError(f"odd-M: sample count must be even, got {v}")
        return v

    @field_validator("samples")
    @classmethod
    def pairs(cls, v: List[List[float]]) -> List[List[float]]:
        for index, pair in enumerate(v):
            if len(pair) != 2:
                raise ValueError(f"sample {index} is not an [re, im] pair")
        return v

    @model_validator(mode="after")
    def sample_count(self) -> "FieldFile":
        expected = self.M ** self.n
        if len(self.samples) != expected:
            raise ValueError(f"expected M^n = {expected} samples, got {len(self.samples)}")
        return self
