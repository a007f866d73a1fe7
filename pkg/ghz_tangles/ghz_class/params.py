"""
Parameterization of the GHZ class.

A GHZ-class state is (M_0 (x) ... (x) M_n-1)|GHZ> with invertible M_p. Writing the columns of M_p as u_p and v_p,
the tangles only depend on

- ``phi_p``: the angle between u_p and v_p,
- ``r``: defined by 2r = prod |u|/|v| + prod |v|/|u|,
- ``kappa``: the cosine of the accumulated phase of prod <u_p, v_p>.
"""

import logging
import math
from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..core.numerics import DET_TOL, MAX_QUBITS
from ..core.operators import LocalOperator
from ..core.states import Ket, apply_local, ghz_ket
from ..errors import ArityError, ClassExitError

log = logging.getLogger(__name__)

HALF_PI = math.pi / 2
ANGLE_SLACK = 1e-12


class GhzClassParams(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    n: int = Field(..., ge=1, le=MAX_QUBITS, description="Number of parties.")
    r: float = Field(..., description="Asymmetry between the two GHZ branches, r >= 1.")
    phis: tuple[float, ...] = Field(..., description="Angle between the two columns of each local operator.")
    kappa: float = Field(-1.0, ge=-1.0, le=1.0, description="Cosine of the relative phase of the cross term.")

    @field_validator("r")
    @classmethod
    def r_at_least_one(cls, v: float) -> float:
        if not v >= 1.0 - 1e-12:
            raise ValueError(f"r must be >= 1, got {v}.")
        return v

    @field_validator("phis")
    @classmethod
    def phis_in_quadrant(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        for phi in v:
            if not -ANGLE_SLACK <= phi <= HALF_PI + ANGLE_SLACK:
                raise ValueError(f"Angles must lie in [0, pi/2], got {phi}.")
        return tuple(min(max(phi, 0.0), HALF_PI) for phi in v)

    @model_validator(mode="after")
    def one_angle_per_party(self) -> "GhzClassParams":
        if len(self.phis) != self.n:
            raise ValueError(f"Expected {self.n} angles, got {len(self.phis)}.")
        return self

    @property
    def cosines(self) -> np.ndarray:
        return np.cos(np.asarray(self.phis))

    @property
    def sines(self) -> np.ndarray:
        return np.sin(np.asarray(self.phis))

    @property
    def denominator(self) -> float:
        """D = r + kappa * prod(cos phi)."""
        return float(self.r + self.kappa * np.prod(self.cosines))


class LocalFactor(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    u: float = Field(..., ge=0.0, description="Norm of the first column.")
    v: float = Field(..., ge=0.0, description="Norm of the second column.")
    phi: float = Field(..., ge=0.0, le=HALF_PI + ANGLE_SLACK, description="Angle between the columns.")

    @model_validator(mode="after")
    def columns_not_both_zero(self) -> "LocalFactor":
        if self.u == 0.0 and self.v == 0.0:
            raise ValueError("At least one column must be nonzero.")
        return self


def local_factor(op: LocalOperator) -> LocalFactor:
    """
    Column norms and angle of one invertible local operator.

    :param op: Local operator.
    :return: Its (u, v, phi) factor.
    """
    det = abs(op.det)
    if det <= DET_TOL:
        raise ClassExitError(f"Operator on party {op.party} is singular (|det| = {det:.3e}).")
    first, second = op.entries[:, 0], op.entries[:, 1]
    u, v = float(np.linalg.norm(first)), float(np.linalg.norm(second))
    overlap = abs(np.vdot(first, second))
    return LocalFactor(u=u, v=v, phi=float(math.atan2(det, overlap)))


def canonical_params(ops: Sequence[LocalOperator]) -> GhzClassParams:
    """
    Canonical parameters of (x) M_p |GHZ>.

    :param ops: One invertible operator per party.
    :return: The parameters (r, phis, kappa).
    """
    ordered = sorted(ops, key=lambda op: op.party)
    if [op.party for op in ordered] != list(range(len(ordered))) or not ordered:
        raise ArityError("Need exactly one operator for each party 0..n-1.")
    factors = [local_factor(op) for op in ordered]
    ratio = math.prod(f.u / f.v for f in factors)
    cross = complex(np.prod([np.vdot(op.entries[:, 0], op.entries[:, 1]) for op in ordered]))
    kappa = -1.0 if abs(cross) <= DET_TOL else max(-1.0, min(1.0, cross.real / abs(cross)))
    params = GhzClassParams(
        n=len(ordered),
        r=max(0.5 * (ratio + 1.0 / ratio), 1.0),
        phis=tuple(f.phi for f in factors),
        kappa=kappa,
    )
    log.debug("Canonical parameters %s.", params)
    return params


def reconstruct_operators(params: GhzClassParams) -> list[LocalOperator]:
    """
    Local operators realizing the parameters.

    Party 0 carries u = r + sqrt(r^2 - 1) and a phase exp(i arccos kappa) on its second column; every other party
    has unit columns. Each operator is [[u, v cos phi], [0, v sin phi]].

    :param params: GHZ-class parameters.
    :return: One operator per party.
    """
    stretch = params.r + math.sqrt(max(params.r**2 - 1.0, 0.0))
    phase = np.exp(1j * math.acos(params.kappa))
    ops = []
    for party, (c, s) in enumerate(zip(params.cosines, params.sines)):
        u = stretch if party == 0 else 1.0
        twist = phase if party == 0 else 1.0
        ops.append(LocalOperator(party, np.array([[u, twist * c], [0.0, twist * s]])))
    return ops


def reconstruct_ket(params: GhzClassParams) -> Ket:
    """Normalized state with the given parameters."""
    psi, _ = apply_local(reconstruct_operators(params), ghz_ket(params.n))
    return psi.normalize()


def random_params(n: int, rng: np.random.Generator, kappa: float = -1.0) -> GhzClassParams:
    """
    Random GHZ-class parameters with r - 1 exponentially distributed and uniform angles.

    :param n: Number of parties.
    :param rng: Random generator.
    :param kappa: Phase cosine.
    :return: Parameters.
    """
    return GhzClassParams(
        n=n,
        r=1.0 + float(rng.exponential(1.0)),
        phis=tuple(float(phi) for phi in rng.uniform(0.0, HALF_PI, size=n)),
        kappa=kappa,
    )
