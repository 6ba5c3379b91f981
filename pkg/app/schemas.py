from pydantic import BaseModel, Field, field_validator, model_validator
from typing import Optional, Union
from enum import Enum


class Criterion(str, Enum):
    PPT = "PPT"
    REDUCTION1 = "Reduction1"
    REDUCTION2 = "Reduction2"
    PHI = "Phi"
    REALIGNMENT = "Realignment"
    MAJORIZATION = "Majorization"


class Verdict(str, Enum):
    ENTANGLED = "Entangled"
    INCONCLUSIVE = "Inconclusive"


class CriterionReport(BaseModel):
    """Verdict of one separability criterion on one state."""
    criterion: Criterion
    verdict: Verdict
    score: Optional[float] = Field(None, description="Signed margin; None when skipped")
    detail: str = ""
    skipped: bool = False

    @property
    def entangled(self) -> bool:
        return self.verdict == Verdict.ENTANGLED


class ThresholdResult(BaseModel):
    """Detection threshold λ^c of a criterion on the family ρ(λ)."""
    criterion: Criterion
    N: int
    threshold: float = Field(..., ge=0.0, le=1.0)
    detected: bool = True
    closed_form: Optional[float] = None


class StateFile(BaseModel):
    """On-disk state: {"dims": [d1, d2], "re": [[...]], "im": [[...]]}."""
    dims: list[int] = Field(..., min_length=2, max_length=2)
    re: list[list[float]]
    im: list[list[float]]

    @field_validator('dims')
    def validate_dims(cls, v):
        """Subsystem dimensions must be positive."""
        if any(d < 1 for d in v):
            raise ValueError("dims must be positive integers")
        return v

    @model_validator(mode='after')
    def validate_shapes(self):
        """re and im must both be d x d with d = d1 * d2."""
        d = self.dims[0] * self.dims[1]
        for name in ("re", "im"):
            rows = getattr(self, name)
            if len(rows) != d or any(len(row) != d for row in rows):
                raise ValueError(f"'{name}' must be a {d}x{d} matrix for dims {self.dims}")
        return self


class RunReport(BaseModel):
    """Everything a command reports, serializable as a table or as JSON."""
    command: str
    input_digest: Optional[str] = None
    reports: list[CriterionReport] = []
    witness_expectation: Optional[float] = None
    thresholds: list[ThresholdResult] = []
    detections: dict[str, int] = {}
    checks: dict[str, Union[bool, int, float, str]] = {}
    output_path: Optional[str] = None
    wall_time: float = 0.0
    exit_code: int = 0
    streamed: bool = Field(False, exclude=True, description="Output already written to stdout")
