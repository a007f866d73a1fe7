import logging
from .._compat import StrEnum

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field

log = logging.getLogger(__name__)

# margins are >= 0 when satisfied; the _t2 variants take a signed t^2 so that t^2 < 0 slices stay real
Real = float | npt.NDArray[np.float64]

RADICAND_TOL = 1e-12


class SteinerMode(StrEnum):
    CONVEX = "convex"
    CONCAVE = "concave"


class ConstraintVerdict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str = Field(..., description="Constraint identifier.")
    margin: float = Field(..., description="Signed margin, >= 0 means satisfied.")
    inputs: tuple[float, ...] = Field(..., description="Arguments the margin was evaluated at.")


def _pair_terms(x: Real, y: Real, z: Real) -> Real:
    return x**2 * y**2 + x**2 * z**2 + y**2 * z**2


def achievability_lhs_t2(x: Real, y: Real, z: Real, t2: Real) -> Real:
    """t2 (1 - x^2 - y^2 - z^2 - t2) - (x^2 y^2 + x^2 z^2 + y^2 z^2 - 2xyz)."""
    return t2 * (1.0 - x**2 - y**2 - z**2 - t2) - (_pair_terms(x, y, z) - 2.0 * x * y * z)


def achievability_lhs(x: Real, y: Real, z: Real, t: Real) -> Real:
    """Left-hand side of the achievability inequality; (x, y, z, t) is achievable by a pure state iff it is >= 0."""
    return achievability_lhs_t2(x, y, z, t**2)


def flipped_achievability_lhs(x: Real, y: Real, z: Real, t: Real) -> Real:
    """Achievability polynomial with the sign of the 2xyz term flipped, the stronger of the two forms."""
    return t**2 * (1.0 - x**2 - y**2 - z**2 - t**2) - (_pair_terms(x, y, z) + 2.0 * x * y * z)


def completed_square_margin_t2(x: Real, y: Real, z: Real, t2: Real) -> Real:
    product = (1.0 + x + y + z) * (1.0 + x - y - z) * (1.0 - x + y - z) * (1.0 - x - y + z)
    return product - (1.0 - 2.0 * t2 - x**2 - y**2 - z**2) ** 2


def completed_square_margin(x: Real, y: Real, z: Real, t: Real) -> Real:
    """Completed-square form of the achievability inequality; identically four times its left-hand side."""
    return completed_square_margin_t2(x, y, z, t**2)


def steiner_radicand(x: Real, y: Real, z: Real) -> Real:
    return (1.0 - x - y + z) * (1.0 - x + y - z) * (1.0 + x - y - z) * (1.0 + x + y + z)


def steiner_margin(x: Real, y: Real, z: Real, mode: SteinerMode | str) -> Real:
    """Steiner inequality on convex (concave) roof 2-tangles."""
    sign = 1.0 if SteinerMode(mode) is SteinerMode.CONVEX else -1.0
    radicand = np.asarray(steiner_radicand(x, y, z), dtype=np.float64)
    root = np.sqrt(np.clip(radicand, 0.0, None))
    spread = 1.0 - np.square(x) - np.square(y) - np.square(z)
    margin = np.where(radicand < -RADICAND_TOL, -np.inf, root + sign * spread)
    return float(margin) if margin.ndim == 0 else margin


def assistance_boundary_t2(x: Real, y: Real, z: Real, t2: Real) -> Real:
    return achievability_lhs_t2(x, y, z, -t2)


def assistance_boundary(x: Real, y: Real, z: Real, t: Real) -> Real:
    """Boundary polynomial of tangles of assistance, the image of the achievability polynomial under t -> it."""
    return assistance_boundary_t2(x, y, z, t**2)


def steiner_null_cone(x: Real, y: Real, z: Real) -> Real:
    """Achievability polynomial on the null cone t = 0, where convex and concave roofs coincide."""
    return achievability_lhs_t2(x, y, z, 0.0)


def evaluate_all(x: float, y: float, z: float, t: float) -> list[ConstraintVerdict]:
    """Every tuple-level constraint at one point."""
    inputs = (x, y, z, t)
    verdicts = [
        ConstraintVerdict(name="achievability", margin=float(achievability_lhs(x, y, z, t)), inputs=inputs),
        ConstraintVerdict(name="completed-square", margin=float(completed_square_margin(x, y, z, t)), inputs=inputs),
        ConstraintVerdict(name="assistance-boundary", margin=float(assistance_boundary(x, y, z, t)), inputs=inputs),
    ]
    for mode in SteinerMode:
        verdicts.append(
            ConstraintVerdict(name=f"steiner-{mode}", margin=float(steiner_margin(x, y, z, mode)), inputs=inputs[:3])
        )
    return verdicts
