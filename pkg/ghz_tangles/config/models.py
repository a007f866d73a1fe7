from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

LogLevel = Literal["NOTSET", "DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]

DEFAULT_T2_SLICES = (0.98, 0.64, 0.09, 0.0, -0.01, -0.25)


class SuiteConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    seed: int = Field(2024, ge=0, lt=2**64, description="Seed of the per-sample random streams.")
    samples: int = Field(1000, ge=1, description="Number of Monte Carlo samples.")
    tolerance: float = Field(1e-9, gt=0.0, description="A sample violates a suite if its margin is below -tolerance.")
    n: int = Field(3, ge=1, le=12, description="Number of qubits or parties for suites that take it.")
    workers: int = Field(1, ge=1, description="Number of worker processes.")
    loglevel: LogLevel = Field("INFO", description="Level at which messages should be logged.")


class AxisSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    start: float = Field(0.0, ge=-1.0, le=1.0, description="First grid value.")
    stop: float = Field(1.0, ge=-1.0, le=1.0, description="Last grid value.")
    steps: int = Field(50, ge=2, description="Number of grid values including both ends.")

    @model_validator(mode="after")
    def ordered(self) -> "AxisSpec":
        if self.stop < self.start:
            raise ValueError(f"Axis stop {self.stop} is below its start {self.start}.")
        return self


class GridSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    x: AxisSpec = Field(default_factory=AxisSpec, description="Grid along x.")
    y: AxisSpec = Field(default_factory=AxisSpec, description="Grid along y.")
    z: AxisSpec = Field(default_factory=AxisSpec, description="Grid along z.")
    t2_slices: list[float] = Field(list(DEFAULT_T2_SLICES), description="Signed values of t^2, one slice each.")

    @field_validator("t2_slices")
    @classmethod
    def slices_in_range(cls, v: list[float]) -> list[float]:
        if not v:
            raise ValueError("At least one t^2 slice is needed.")
        if any(not -1.0 <= value <= 1.0 for value in v):
            raise ValueError(f"t^2 slices must lie in [-1, 1], got {v}.")
        return v

    @classmethod
    def cube(
        cls, steps: int = 50, lo: float = 0.0, hi: float = 1.0, t2_slices: list[float] | None = None
    ) -> "GridSpec":
        axis = AxisSpec(start=lo, stop=hi, steps=steps)
        return cls(x=axis, y=axis, z=axis, t2_slices=list(DEFAULT_T2_SLICES) if t2_slices is None else t2_slices)
