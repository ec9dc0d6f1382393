import math
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class CurveConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["circle", "fourier"]
    role: Literal["outer", "hole"]
    center: List[float] = Field(default_factory=lambda: [0.0, 0.0])
    radius: Optional[float] = None
    x_cos: List[float] = Field(default_factory=list)
    x_sin: List[float] = Field(default_factory=list)
    y_cos: List[float] = Field(default_factory=list)
    y_sin: List[float] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_shape(self) -> "CurveConfig":
        if len(self.center) != 2:
            raise ValueError("center must have two coordinates")
        if self.kind == "circle" and (self.radius is None or self.radius <= 0):
            raise ValueError("circle needs a positive radius")
        if self.kind == "fourier" and not (
            (self.x_cos or self.x_sin) and (self.y_cos or self.y_sin)
        ):
            raise ValueError("fourier curve needs coefficients for both coordinates")
        return self


def _exactly_one(model: BaseModel, names: tuple[str, ...]) -> None:
    given = [name for name in names if getattr(model, name) is not None]
    if len(given) != 1:
        raise ValueError(f"exactly one of {', '.join(names)} must be given")


class HSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    constant: Optional[float] = None
    expression: Optional[str] = None
    values: Optional[List[float]] = None

    @model_validator(mode="after")
    def check_one(self) -> "HSpec":
        _exactly_one(self, ("constant", "expression", "values"))
        return self


class ManufacturedSpec(BaseModel):
    name: str
    params: Dict[str, Any] = Field(default_factory=dict)


class DataSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    manufactured: Optional[ManufacturedSpec] = None
    expression: Optional[str] = None
    values: Optional[List[float]] = None

    @model_validator(mode="after")
    def check_one(self) -> "DataSpec":
        _exactly_one(self, ("manufactured", "expression", "values"))
        return self


class Tolerances(BaseModel):
    model_config = ConfigDict(extra="forbid")

    exceptional: float = 1e-8
    svd_rcond: float = 1e-8
    flux: float = 1e-10
    condition_cap: float = 1e12
    interior_error: float = 1e-8
    boundary_residual: float = 1e-9
    side_condition: float = 1e-10
    energy: float = 1e-8
    identity: float = 1e-8
    oracle: float = 1e-9


class OutputSpec(BaseModel):
    report: Optional[str] = None
    csv_dir: Optional[str] = None


class CaseConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str
    problem: Literal["robin", "neumann", "dirichlet"] = "robin"
    geometry: List[CurveConfig] = Field(..., min_length=1)
    nodes: Union[int, List[int]] = 128
    h: Optional[HSpec] = None
    neumann_flag: bool = False
    data: Optional[DataSpec] = None
    tolerances: Tolerances = Field(default_factory=Tolerances)
    probe_offset: float = Field(0.25, gt=0.0, lt=0.5)
    output: OutputSpec = Field(default_factory=OutputSpec)

    @model_validator(mode="after")
    def check_case(self) -> "CaseConfig":
        roles = [curve.role for curve in self.geometry]
        if roles[0] != "outer" or roles.count("outer") != 1:
            raise ValueError("geometry must list exactly one outer curve, first")
        counts = self.nodes if isinstance(self.nodes, list) else [self.nodes]
        if isinstance(self.nodes, list) and len(self.nodes) != len(self.geometry):
            raise ValueError("nodes list must give one count per curve")
        if any(n < 16 or n % 2 for n in counts):
            raise ValueError("node counts must be even and at least 16")
        if self.problem == "robin" and self.h is None:
            raise ValueError("robin problems need an h specification")
        return self

    def nodes_per_component(self) -> List[int]:
        if isinstance(self.nodes, list):
            return list(self.nodes)
        return [self.nodes] * len(self.geometry)


class ConvergenceRow(BaseModel):
    nodes: int
    error: float
    ratio: Optional[float] = None


class Report(BaseModel):
    case_id: str
    command: str
    problem: Optional[str] = None
    path: Optional[str] = None
    nodes: List[int] = Field(default_factory=list)
    metrics: Dict[str, float] = Field(default_factory=dict)
    identities: Dict[str, float] = Field(default_factory=dict)
    diagnostics: Dict[str, Any] = Field(default_factory=dict)
    convergence: List[ConvergenceRow] = Field(default_factory=list)
    timings: Dict[str, float] = Field(default_factory=dict)
    checks: Dict[str, bool] = Field(default_factory=dict)
    error: Optional[str] = None
    passed: bool = False

    @field_validator("metrics", "identities", "timings")
    @classmethod
    def check_finite(cls, values: Dict[str, float]) -> Dict[str, float]:
        for key, value in values.items():
            if not math.isfinite(value):
                raise ValueError(f"{key} is not finite: {value}")
        return values


class ErrorResponse(BaseModel):
    status: str = "error"
    case: Optional[str] = None
    error: str
