from typing import Any

from pydantic import BaseModel, ConfigDict, Field

from ..canonical.acin import AcinForm, CertificateReport
from ..tangles.models import RootPair, TangleTuple


class WorstCase(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    index: int = Field(..., description="Sample index of the smallest margin.")
    input: dict[str, Any] = Field(..., description="Input the margin was evaluated at.")
    margin: float = Field(..., description="Smallest margin of the run.")


class SuiteSummary(BaseModel):
    """Aggregate of one Monte Carlo suite run."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    suite: str
    samples: int = Field(..., description="Number of requested samples.")
    seed: int
    n: int
    tolerance: float
    evaluated: int = Field(..., description="Samples the suite applied to; the rest were skipped.")
    violations: int = Field(..., description="Samples with margin < -tolerance.")
    min_margin: float | None = None
    max_margin: float | None = None
    mean_margin: float | None = None
    worst: WorstCase | None = None

    @property
    def passed(self) -> bool:
        return self.violations == 0


class SubsetTangle(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    mask: int = Field(..., description="Subset bitmask, bit p marks party p.")
    parties: list[int]
    tangle: float | None = Field(..., description="None where the odd mixed tangle is not defined.")


class TanglesReport(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    n: int
    one_tangles: list[float]
    subsets: list[SubsetTangle]
    three_qubit: TangleTuple | None = Field(None, description="(x, y, z, t) for 3 qubits.")


class CheckReport(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    tangles: TangleTuple
    feasible: bool = Field(..., description="Achievability margin >= -tolerance.")
    on_boundary: bool = Field(..., description="|margin| <= tolerance.")
    status: str = Field(..., description="feasible, infeasible or boundary-degenerate (boundary with t = 0).")
    margins: dict[str, float]
    marginal_margins: tuple[float, float, float] | None = Field(
        None, description="Triangle margins of the single-party eigenvalues of the derived 1-tangles."
    )
    witness: dict[str, Any] | None = Field(None, description="Inverted (r, phis) when t > 0 and feasible.")


class MonogamyReport(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    n: int
    residuals: list[float] = Field(..., description="Strong-monogamy residual per party.")
    max_abs_residual: float


class RoofReport(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    k: int
    rank: int
    bruteforce: RootPair = Field(..., description="Roofs found by the decomposition search.")
    formula: RootPair = Field(..., description="Roofs from the generalized Wootters formula.")


class CanonicalReport(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    form: AcinForm
    tangles: TangleTuple = Field(..., description="Tangles of the normal form.")
    residual: float | None = Field(None, description="Largest amplitude left at the zeroed positions.")
    certificates: CertificateReport
