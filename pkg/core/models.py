"""运行配置的 Pydantic 模型。"""

from __future__ import annotations

import math
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

DistributionFamily = Literal[
    "uniform",
    "exponential",
    "gamma",
    "normal",
    "beta",
    "flat",
    "constant",
]

_REQUIRED_FIELDS: dict[str, tuple[str, ...]] = {
    "uniform": ("a", "b"),
    "exponential": ("mean",),
    "gamma": ("shape", "scale"),
    "normal": ("mu", "sigma"),
    "beta": ("alpha", "beta"),
    "flat": (),
    "constant": ("value",),
}


class Base(BaseModel):
    model_config = ConfigDict(from_attributes=True, extra="forbid", populate_by_name=True)


class DistributionSpec(Base):
    family: DistributionFamily
    a: float | None = None
    b: float | None = None
    mean: float | None = None
    shape: float | None = None
    scale: float | None = None
    mu: float | None = None
    sigma: float | None = None
    alpha: float | None = None
    beta: float | None = None
    value: float | None = None
    truncate: bool = False

    @model_validator(mode="after")
    def _check_fields(self) -> "DistributionSpec":
        missing = [name for name in _REQUIRED_FIELDS[self.family] if getattr(self, name) is None]
        if missing:
            raise ValueError(f"{self.family} distribution requires {', '.join(missing)}")
        if self.family == "uniform" and not self.a < self.b:
            raise ValueError("uniform distribution requires a < b")
        for name in ("mean", "shape", "scale", "sigma", "alpha"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise ValueError(f"{self.family} distribution requires {name} > 0")
        if self.family == "beta" and self.beta <= 0:
            raise ValueError("beta distribution requires beta > 0")
        return self


class DistanceComponentSpec(Base):
    kind: Literal["euclidean", "matrix_file", "indicator"]
    columns: list[str] = Field(default_factory=list)
    column: str | None = None
    path: str | None = None
    same_location: float | None = None

    @model_validator(mode="after")
    def _check_kind(self) -> "DistanceComponentSpec":
        if self.kind == "euclidean" and not self.columns:
            raise ValueError("euclidean distance requires columns")
        if self.kind == "matrix_file" and not self.path:
            raise ValueError("matrix_file distance requires path")
        if self.kind == "indicator" and not self.column:
            raise ValueError("indicator distance requires column")
        return self


class PopulationSection(Base):
    risks: str
    distances: list[DistanceComponentSpec | str] = Field(default_factory=list)


class ExtentsSection(Base):
    exposure: float | tuple[float, float] | None = None
    infection: float | tuple[float, float] | None = None
    removal: float | tuple[float, float] | None = None


class ModelSection(Base):
    model_class: str = Field(alias="class")
    functions: dict[str, str]
    parameters: dict[str, list[float]] = Field(default_factory=dict)
    priors: dict[str, list[DistributionSpec]] = Field(default_factory=dict)
    extents: ExtentsSection | None = None


class SimulateSection(Base):
    starting_states: dict[str, str] = Field(default_factory=dict)
    start_time: float = 0.0
    tmax: float | None = None
    max_iterations: int | None = None
    max_wall_time: float | None = None
    infection_delay: DistributionSpec | None = None
    removal_delay: DistributionSpec | None = None
    force: bool = False
    replicates: int = 1
    resync_interval: int = 1000
    curve_points: int = 201

    @field_validator("tmax")
    @classmethod
    def _finite_or_none(cls, value: float | None) -> float | None:
        if value is not None and math.isinf(value):
            return None
        return value


class FitSection(Base):
    observations: str | None = None
    start_time: float | None = None
    init_attempts: int = 1000
    iterations: int = 1000
    event_sigma: float = 1.0
    event_batches: int = 1
    condition_on_network: bool = True
    per_event_acceptance: bool = False
    adapt: bool = True
    adaptation_scale: float | None = None
    mixing_weight: float = 0.05
    jitter: float = 1e-10
    fixed_kernel: Literal["identity", "prior"] = "identity"
    chains: int = 1
    progress_interval: int = 1000
    spill: bool = False
    audit_every: int = 0
    dump_terms: bool = False


class SummarySection(Base):
    burnin: int = 0
    thin: int = 1
    curve_points: int = 201


class OutputSection(Base):
    directory: str = "output"


class RunConfig(Base):
    seed: int = 0
    population: PopulationSection
    model: ModelSection
    simulate: SimulateSection | None = None
    fit: FitSection | None = None
    summary: SummarySection = Field(default_factory=SummarySection)
    output: OutputSection = Field(default_factory=OutputSection)
