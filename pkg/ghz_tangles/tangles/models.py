from pydantic import BaseModel, ConfigDict, Field, model_validator

TANGLE_UPPER = 1.0 + 1e-9


class TangleTuple(BaseModel):
    """3-qubit tangles ordered as (tau_B|C, tau_A|C, tau_A|B, tau_A|B|C)."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    x: float = Field(..., ge=0.0, le=TANGLE_UPPER, description="2-tangle between B and C.")
    y: float = Field(..., ge=0.0, le=TANGLE_UPPER, description="2-tangle between A and C.")
    z: float = Field(..., ge=0.0, le=TANGLE_UPPER, description="2-tangle between A and B.")
    t: float = Field(..., ge=0.0, le=TANGLE_UPPER, description="3-tangle of A, B and C.")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x, self.y, self.z, self.t)


class RootPair(BaseModel):
    """Convex roof (minimal average) and concave roof (maximal average) of a tangle."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    convex: float = Field(..., ge=0.0, description="Minimal average pure-state tangle.")
    concave: float = Field(..., ge=0.0, description="Maximal average pure-state tangle (tangle of assistance).")

    @model_validator(mode="after")
    def concave_dominates_convex(self) -> "RootPair":
        if self.concave < self.convex - 1e-10:
            raise ValueError(f"Concave roof {self.concave} is below convex roof {self.convex}.")
        return self
